"""Spin-1/2 quantum mechanics over one odd generator.

A state is ψ(ξ) = ψ0 + ψ1·ξ, identified with the column (ψ0, ψ1).  An
operator appears in four interchangeable forms:

* 2x2 matrix (nested tuples, exact coefficients when the inputs are exact);
* normal-ordered word operator α + β·ξ̂ + γ·ξ̄̂ + δ·ξ̂ξ̄̂ with ξ̂ = (ξ·) and
  ξ̄̂ = d/dξ, acting on wavefunctions;
* normal-ordered symbol A(ξ, ξ̄) = α + βξ + γξ̄ + δξξ̄;
* integral kernel Ã(ξ, ξ′), applied by Berezin integration against ψ(ξ′).

The maps between the forms are exact.  Symbols of successive evolution
factors compose by a two-variable Berezin convolution
(``compose_symbols``); chaining the short-time symbol 1 − i·ε·H̄ gives the
time-sliced propagator, whose error against the closed-form evolution
decays like 1/n in the slice count.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParityError
from .exact import CRational, crational
from .grassmann import (
    GeneratorTable,
    GrassmannOperator,
    Multivector,
    berezin_integral,
    graded_exp,
    product,
)

WAVE_TABLE = GeneratorTable.odd("xi")
SYMBOL_TABLE = GeneratorTable.odd("xi", "xibar")
KERNEL_TABLE = GeneratorTable.odd("xi", "xip")
_SYMBOL_KERNEL_TABLE = GeneratorTable.odd("xi", "xibar", "xip")
_COMPOSE_TABLE = GeneratorTable.odd("xi", "xibar", "xip", "xibarp")


def _is_exact(value) -> bool:
    return isinstance(value, (int, Fraction, CRational))


def _lift(value, exact: bool):
    if exact:
        return crational(value)
    return complex(value)


@dataclass(frozen=True)
class MagneticField:
    """Field vector and the magneton-like coupling in front of it."""

    bx: object
    by: object
    bz: object
    mu_b: object = 1

    @classmethod
    def from_text(cls, text: str, mu_b=1.0) -> "MagneticField":
        """Parse "BX,BY,BZ"; fractions and integers stay exact, decimals float."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError("expected three comma-separated components")

        def component(p: str):
            try:
                return int(p)
            except ValueError:
                pass
            try:
                return Fraction(p)
            except ValueError:
                return float(p)

        return cls(*(component(p) for p in parts), mu_b=mu_b)

    def is_exact(self) -> bool:
        return all(_is_exact(v) for v in (self.bx, self.by, self.bz, self.mu_b))

    def norm(self) -> float:
        return math.sqrt(
            float(self.bx) ** 2 + float(self.by) ** 2 + float(self.bz) ** 2
        )

    def unit(self) -> tuple[float, float, float]:
        n = self.norm()
        if n == 0:
            raise ValueError("zero field has no direction")
        return (float(self.bx) / n, float(self.by) / n, float(self.bz) / n)

    def larmor_phase(self, t: float) -> float:
        return float(self.mu_b) * self.norm() * t


@dataclass(frozen=True)
class SpinState:
    """ψ(ξ) = c0 + c1·ξ, i.e. the column (c0, c1)."""

    c0: object
    c1: object

    def as_multivector(self) -> Multivector:
        return Multivector(WAVE_TABLE, {(0,): self.c0, (1,): self.c1})

    @classmethod
    def from_multivector(cls, mv: Multivector) -> "SpinState":
        if mv.table != WAVE_TABLE:
            raise ValueError("state multivectors live on the single-ξ table")
        return cls(mv.terms.get((0,), 0), mv.terms.get((1,), 0))

    def as_vector(self) -> np.ndarray:
        return np.array([complex(self.c0), complex(self.c1)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_vector()))


@dataclass(frozen=True)
class SpinOperator:
    """One operator in matrix form and word form together."""

    matrix: tuple
    word: GrassmannOperator

    def apply_matrix(self, state: SpinState) -> SpinState:
        (a, b), (c, d) = self.matrix
        return SpinState(a * state.c0 + b * state.c1, c * state.c0 + d * state.c1)

    def apply_wavefunction(self, psi: Multivector) -> Multivector:
        return self.word.apply(psi)

    def apply_state_via_words(self, state: SpinState) -> SpinState:
        return SpinState.from_multivector(self.apply_wavefunction(state.as_multivector()))

    def matrix_array(self) -> np.ndarray:
        return np.array([[complex(v) for v in row] for row in self.matrix])


def operator_from_matrix(matrix) -> SpinOperator:
    """Normal-ordered word operator with the given matrix.

    α = a00, β = a10, γ = a01, δ = a11 − a00 reproduce the matrix columns on
    the basis states 1 and ξ.
    """
    (a00, a01), (a10, a11) = matrix
    alpha, beta, gamma, delta = a00, a10, a01, a11 - a00
    terms = []
    if not _zero(alpha):
        terms.append((alpha, ()))
    if not _zero(beta):
        terms.append((beta, (("mul", "xi"),)))
    if not _zero(gamma):
        terms.append((gamma, (("diff", "xi"),)))
    if not _zero(delta):
        terms.append((delta, (("mul", "xi"), ("diff", "xi"))))
    return SpinOperator(
        ((a00, a01), (a10, a11)), GrassmannOperator(WAVE_TABLE, terms)
    )


def _zero(value) -> bool:
    return value == 0


def spin_operators(hbar=1):
    """(Sx, Sy, Sz, N) with word forms built from ξ̂ and ξ̄̂ directly.

    Sx = (ħ/2)(ξ̄̂+ξ̂), Sy = (iħ/2)(ξ̂−ξ̄̂), Sz = ħN̂,
    N̂ = (ξ̄̂ξ̂ − ξ̂ξ̄̂)/2.  ħ defaults to 1 and may be any exact or float
    scale.
    """
    exact = _is_exact(hbar)
    if exact:
        h2 = crational(hbar) * CRational(Fraction(1, 2))
        half = CRational(Fraction(1, 2))
        i = CRational(0, 1)
    else:
        h2 = 0.5 * hbar
        half = 0.5
        i = 1j
    mul = (("mul", "xi"),)
    diff = (("diff", "xi"),)
    raise_then_lower = (("diff", "xi"), ("mul", "xi"))  # ξ̄̂ξ̂: multiply first
    lower_then_raise = (("mul", "xi"), ("diff", "xi"))  # ξ̂ξ̄̂: differentiate first
    zero = h2 - h2
    sx = SpinOperator(
        ((zero, h2), (h2, zero)),
        GrassmannOperator(WAVE_TABLE, [(h2, diff), (h2, mul)]),
    )
    sy = SpinOperator(
        ((zero, -(i * h2)), (i * h2, zero)),
        GrassmannOperator(WAVE_TABLE, [(i * h2, mul), (-(i * h2), diff)]),
    )
    sz = SpinOperator(
        ((h2, zero), (zero, -h2)),
        GrassmannOperator(
            WAVE_TABLE, [(h2, raise_then_lower), (-h2, lower_then_raise)]
        ),
    )
    n = SpinOperator(
        ((half, zero), (zero, -half)),
        GrassmannOperator(
            WAVE_TABLE, [(half, raise_then_lower), (-half, lower_then_raise)]
        ),
    )
    return sx, sy, sz, n


def hamiltonian(b: MagneticField) -> SpinOperator:
    """Magnetic spin Hamiltonian in matrix and word form.

    Matrix: −μ_B [[Bz, Bx−iBy], [Bx+iBy, −Bz]].
    Words:  −μ_B [Bz + (Bx+iBy)·ξ̂ + (Bx−iBy)·ξ̄̂ − 2Bz·ξ̂ξ̄̂].
    The two are built independently from the components.
    """
    exact = b.is_exact()
    bx, by, bz, mu = (_lift(v, exact) for v in (b.bx, b.by, b.bz, b.mu_b))
    i = CRational(0, 1) if exact else 1j
    matrix = (
        (-(mu * bz), -(mu * (bx - i * by))),
        ((-(mu * (bx + i * by))), mu * bz),
    )
    terms = []
    if not _zero(mu * bz):
        terms.append((-(mu * bz), ()))
    if not _zero(mu * (bx + i * by)):
        terms.append((-(mu * (bx + i * by)), (("mul", "xi"),)))
    if not _zero(mu * (bx - i * by)):
        terms.append((-(mu * (bx - i * by)), (("diff", "xi"),)))
    if not _zero(mu * bz):
        terms.append((2 * (mu * bz), (("mul", "xi"), ("diff", "xi"))))
    return SpinOperator(matrix, GrassmannOperator(WAVE_TABLE, terms))


# -- symbol and kernel forms -------------------------------------------------------


def ordered_symbol(op: SpinOperator) -> Multivector:
    """Normal-ordered symbol A(ξ, ξ̄) = α + βξ + γξ̄ + δξξ̄."""
    (a00, a01), (a10, a11) = op.matrix
    return Multivector(
        SYMBOL_TABLE,
        {(0, 0): a00, (1, 0): a10, (0, 1): a01, (1, 1): a11 - a00},
    )


def symbol_to_matrix(sym: Multivector) -> tuple:
    if sym.table != SYMBOL_TABLE:
        raise ValueError("symbols live on the (xi, xibar) table")
    alpha = sym.terms.get((0, 0), 0)
    beta = sym.terms.get((1, 0), 0)
    gamma = sym.terms.get((0, 1), 0)
    delta = sym.terms.get((1, 1), 0)
    return ((alpha, gamma), (beta, alpha + delta))


def integral_kernel(op: SpinOperator) -> Multivector:
    """Kernel Ã(ξ, ξ′) with Ĥψ(ξ) = ∫dξ′ Ã(ξ, ξ′) ψ(ξ′)."""
    (a00, a01), (a10, a11) = op.matrix
    return Multivector(
        KERNEL_TABLE,
        {(0, 0): a01, (1, 0): -a11, (0, 1): a00, (1, 1): -a10},
    )


def kernel_to_matrix(kern: Multivector) -> tuple:
    if kern.table != KERNEL_TABLE:
        raise ValueError("kernels live on the (xi, xip) table")
    k0 = kern.terms.get((0, 0), 0)
    k1 = kern.terms.get((1, 0), 0)
    k2 = kern.terms.get((0, 1), 0)
    k3 = kern.terms.get((1, 1), 0)
    return ((k2, k0), (-k3, -k1))


def kernel_from_symbol(sym: Multivector) -> Multivector:
    """Ã(ξ, ξ′) = ∫dξ̄ A(ξ, ξ̄) e^{ξ̄(ξ′−ξ)}."""
    if sym.table != SYMBOL_TABLE:
        raise ValueError("symbols live on the (xi, xibar) table")
    t3 = _SYMBOL_KERNEL_TABLE
    lifted = sym.substitute({}, table=t3)
    weight = graded_exp(product(t3.gen("xibar"), t3.gen("xip") - t3.gen("xi")))
    integrated = berezin_integral(product(lifted, weight), ["xibar"])
    return integrated.substitute({}, table=KERNEL_TABLE)


def apply_kernel(kern: Multivector, psi: Multivector) -> Multivector:
    """∫dξ′ Ã(ξ, ξ′) ψ(ξ′) as a wavefunction of ξ."""
    if psi.table != WAVE_TABLE:
        raise ValueError("wavefunctions live on the single-ξ table")
    shifted = psi.substitute({"xi": KERNEL_TABLE.gen("xip")}, table=KERNEL_TABLE)
    integrated = berezin_integral(product(kern, shifted), ["xip"])
    return integrated.substitute({}, table=WAVE_TABLE)


_COMPOSE_WEIGHT = graded_exp(
    product(
        _COMPOSE_TABLE.gen("xibarp") - _COMPOSE_TABLE.gen("xibar"),
        _COMPOSE_TABLE.gen("xip") - _COMPOSE_TABLE.gen("xi"),
    )
)


def compose_symbols(late: Multivector, early: Multivector) -> Multivector:
    """Symbol of the operator product (late ∘ early).

    U(ξ; ξ̄0) = ∫dξ′dξ̄′ e^{(ξ̄′−ξ̄0)(ξ′−ξ)} · late(ξ, ξ̄′) · early(ξ′, ξ̄0),
    the rightmost measure acting first.
    """
    for s in (late, early):
        if s.table != SYMBOL_TABLE:
            raise ValueError("symbols live on the (xi, xibar) table")
    ct = _COMPOSE_TABLE
    u1 = late.substitute({"xibar": ct.gen("xibarp")}, table=ct)
    u2 = early.substitute({"xi": ct.gen("xip")}, table=ct)
    integrand = product(product(_COMPOSE_WEIGHT, u1), u2)
    out = berezin_integral(integrand, ["xip", "xibarp"])
    return out.substitute({}, table=SYMBOL_TABLE)


# -- propagators -------------------------------------------------------------------


def sliced_symbol(b: MagneticField, t: float, n: int) -> Multivector:
    """Symbol of the n-slice propagator: (1 − i·(t/n)·H̄) composed n times."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("the slice count must be a positive integer")
    h_bar = ordered_symbol(hamiltonian(b))
    eps = t / n
    one_slice = SYMBOL_TABLE.scalar(1) + h_bar * complex(0, -eps)
    acc = one_slice
    for _ in range(n - 1):
        acc = compose_symbols(acc, one_slice)
    return acc


def sliced_propagator(b: MagneticField, t: float, n: int) -> np.ndarray:
    matrix = symbol_to_matrix(sliced_symbol(b, t, n))
    return np.array([[complex(v) for v in row] for row in matrix])


def magnetic_evolution(b: MagneticField, t: float) -> np.ndarray:
    """Closed-form evolution exp(−i·H·t) for the magnetic Hamiltonian.

    With φ = μ_B|B|t and n̂ the field direction this is
    cos(φ)·I + i·sin(φ)·(n̂·σ); the +i sign reflects the −μ_B coupling.
    """
    if b.norm() == 0:
        return np.eye(2, dtype=complex)
    phi = b.larmor_phase(t)
    nx, ny, nz = b.unit()
    sigma = np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]])
    return math.cos(phi) * np.eye(2) + 1j * math.sin(phi) * sigma


def pauli_evolve(state: SpinState, b: MagneticField, t: float) -> SpinState:
    out = magnetic_evolution(b, t) @ state.as_vector()
    return SpinState(out[0], out[1])


def kernel_propagate(psi: Multivector, b: MagneticField, t: float, n: int) -> Multivector:
    """ψ(ξ, t) = ∫dξ0 Ũ(ξ, t; ξ0) ψ(ξ0) with the n-slice propagator."""
    kern = kernel_from_symbol(sliced_symbol(b, t, n))
    return apply_kernel(kern, psi)


def slicing_errors(b: MagneticField, t: float, slice_counts) -> list[tuple[int, float]]:
    """Max-element error of the sliced propagator against the closed form."""
    oracle = magnetic_evolution(b, t)
    out = []
    for n in slice_counts:
        approx = sliced_propagator(b, t, n)
        out.append((n, float(np.max(np.abs(approx - oracle)))))
    return out
