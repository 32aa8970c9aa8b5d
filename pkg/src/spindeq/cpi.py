"""Classical-path-integral (CPI) engine for the three cases.

Symbolic side: builders for the CPI kinetic term, the CPI Hamiltonian
generated by a phase-space Hamiltonian, and their difference (the CPI
Lagrangian).  These are what ``superfield.dequantize`` must reproduce.

Numeric side: the CPI Hamiltonian realized as an operator on wavefunctions
over the enlarged space (fields and ghosts).  Auxiliary and antighost
symbols become derivatives:

    even base fields:  aux → −i ∂_field,  antighost → +∂_ghost
    odd base fields:   aux → +i ∂_field,  antighost → −∂_ghost

and every monomial is ordered "multiply first, then differentiate", i.e. a
classical monomial read left to right in canonical order is the operator
composition read the same way.  Evolution solves i dψ/dt = H̃ψ.

The compact-angle case (coadjoint) uses Fourier modes e^{ikφ} instead of a
polynomial basis; its CPI Hamiltonian is first order, so each mode just
picks up the phase exp(i·k·μB·t), which is transport along the classical
precession flow.
"""

from __future__ import annotations

import cmath
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from operator import index as _as_int_index
from typing import Mapping

import numpy as np
from scipy.linalg import expm

from .errors import UnsupportedCaseError
from .exact import CRational, crational
from .grassmann import (
    DEFAULT_EVEN_TRUNCATION,
    EVEN,
    ODD,
    GeneratorTable,
    GrassmannOperator,
    Multivector,
)
from .superfield import get_case
from .symbols import GradedPolynomial, bind_constants, partial_derivative

OMEGA_CANONICAL = ((0, 1), (-1, 0))


# -- symbolic builders -------------------------------------------------------------


def cpi_kinetic(case) -> GradedPolynomial:
    """Σ_a aux_a·(d base_a/dt) + i·Σ_a antighost_a·(d ghost_a/dt)."""
    case = get_case(case)
    ctx = case.context
    out = ctx.zero()
    i = ctx.imaginary()
    for f in case.families:
        out = out + ctx.sym(f.aux) * ctx.sym(f.base, dot=1)
    for f in case.families:
        out = out + i * ctx.sym(f.antighost) * ctx.sym(f.ghost, dot=1)
    return out


def cpi_hamiltonian(case, hamiltonian: GradedPolynomial) -> GradedPolynomial:
    """CPI Hamiltonian generated by a phase-space Hamiltonian.

    Even base fields (bosonic, coadjoint), with ω the canonical symplectic
    matrix on (first, second):

        H̃ = Σ_ab aux_a ω^{ab} ∂_b H + i Σ_abd antighost_a ω^{ad} (∂_d ∂_b H) ghost_b

    Odd base fields (grassmann): supported for the bilinear family
    H = α + β·ξξ̄, whose equations of motion are ξ̇ = iβξ, ξ̄̇ = −iβξ̄:

        H̃ = iβ(aux_ξ·ξ − aux_ξ̄·ξ̄ + i·antighost_ξ·ghost_ξ − i·antighost_ξ̄·ghost_ξ̄)
    """
    case = get_case(case)
    ctx = case.context
    if case.base_parity == EVEN:
        fams = case.families
        out = ctx.zero()
        i = ctx.imaginary()
        for a in range(2):
            for b in range(2):
                w = OMEGA_CANONICAL[a][b]
                if not w:
                    continue
                db = partial_derivative(hamiltonian, fams[b].base)
                out = out + CRational(w) * (ctx.sym(fams[a].aux) * db)
        for a in range(2):
            for d in range(2):
                w = OMEGA_CANONICAL[a][d]
                if not w:
                    continue
                for b in range(2):
                    hdb = partial_derivative(
                        partial_derivative(hamiltonian, fams[b].base), fams[d].base
                    )
                    if hdb.is_zero():
                        continue
                    out = out + CRational(w) * (
                        i * ctx.sym(fams[a].antighost) * hdb * ctx.sym(fams[b].ghost)
                    )
        return out
    xi, xibar = case.families
    beta = partial_derivative(partial_derivative(hamiltonian, xi.base), xibar.base)
    rest = hamiltonian - beta * (ctx.sym(xi.base) * ctx.sym(xibar.base))
    odd_names = (xi.base, xibar.base)
    if rest.degree_in(odd_names) > 0 or beta.degree_in(odd_names) > 0:
        raise UnsupportedCaseError(
            "odd-field CPI Hamiltonian supported only for H = const + beta*xi*xibar"
        )
    i = ctx.imaginary()
    core = (
        ctx.sym(xi.aux) * ctx.sym(xi.base)
        - ctx.sym(xibar.aux) * ctx.sym(xibar.base)
        + i * ctx.sym(xi.antighost) * ctx.sym(xi.ghost)
        - i * ctx.sym(xibar.antighost) * ctx.sym(xibar.ghost)
    )
    return i * beta * core


def cpi_lagrangian(case, hamiltonian: GradedPolynomial) -> GradedPolynomial:
    return cpi_kinetic(case) - cpi_hamiltonian(case, hamiltonian)


# -- numeric engine ----------------------------------------------------------------


def _exactify(value):
    """Lift a coefficient to exact rational-complex form; floats go through
    their exact binary value."""
    if isinstance(value, float):
        return CRational(Fraction(value))
    if isinstance(value, complex):
        return CRational(Fraction(value.real), Fraction(value.imag))
    return crational(value)


@dataclass(frozen=True)
class CpiSpec:
    """What to evolve: a case, its Hamiltonian, and numeric constants.

    ``hamiltonian`` is a polynomial over the case's base fields, possibly
    with constant symbols; ``coefficients`` binds those to numbers.  For the
    coadjoint case the Hamiltonian is fixed to H = −μB·η with
    μB = coefficients["muB"].
    """

    case: str
    hamiltonian: GradedPolynomial | None = None
    omega_matrix: tuple = OMEGA_CANONICAL
    coefficients: Mapping | None = None
    truncation: int = DEFAULT_EVEN_TRUNCATION

    def __post_init__(self):
        case = get_case(self.case)
        w = self.omega_matrix
        if len(w) != 2 or any(len(row) != 2 for row in w):
            raise ValueError("omega_matrix must be 2x2")
        if any(w[a][b] != -w[b][a] for a in range(2) for b in range(2)):
            raise ValueError("omega_matrix must be antisymmetric")
        if case.name == "coadjoint" and tuple(map(tuple, w)) != OMEGA_CANONICAL:
            raise ValueError("coadjoint case fixes omega_matrix to ((0,1),(-1,0))")
        if self.truncation < 1:
            raise ValueError("truncation must be at least 1")
        if self.hamiltonian is not None:
            degree = self.hamiltonian.degree_in(case.base_names)
            if degree > self.truncation:
                raise ValueError(
                    f"Hamiltonian degree {degree} exceeds truncation {self.truncation}"
                )

    def bound_hamiltonian(self) -> GradedPolynomial:
        case = get_case(self.case)
        h = self.hamiltonian
        if h is None:
            from .superfield import builtin_hamiltonian

            h = builtin_hamiltonian(case, "spin" if case.name != "bosonic" else "harmonic")
        values = {k: _exactify(v) for k, v in (self.coefficients or {}).items()}
        h = bind_constants(h, values)
        leftover = [
            name for (name, _dot) in h.symbols_used() if case.context.is_constant(name)
        ]
        if leftover:
            raise UnsupportedCaseError(
                f"unbound constants {sorted(leftover)}; supply them in coefficients"
            )
        return h

    def constant(self, name, default=1.0) -> float:
        value = (self.coefficients or {}).get(name, default)
        return float(value)


def operator_table(case, truncation=DEFAULT_EVEN_TRUNCATION) -> GeneratorTable:
    """Generator table for wavefunctions over fields and ghosts."""
    case = get_case(case)
    entries = []
    ghost_parity = ODD if case.base_parity == EVEN else EVEN
    for f in case.families:
        entries.append((f.base, case.base_parity, truncation))
    for f in case.families:
        entries.append((f.ghost, ghost_parity, truncation))
    return GeneratorTable(entries)


@dataclass(frozen=True)
class LiouvilleOperator:
    """CPI Hamiltonian as an operator on enlarged-space wavefunctions."""

    case: str
    table: GeneratorTable
    operator: GrassmannOperator
    description: str
    truncation: int

    def apply(self, psi: Multivector) -> Multivector:
        return self.operator.apply(psi)

    def eigenvalue_on(self, exps) -> complex | None:
        """Eigenvalue on a single monomial, or None if it is not an eigenvector."""
        mono = Multivector(self.table, {tuple(exps): 1})
        image = self.apply(mono)
        if image.is_zero():
            return 0j
        terms = dict(image.terms)
        value = terms.pop(tuple(exps), None)
        if value is None or terms:
            return None
        return complex(value)

    def closure_matrix(self, seeds):
        """Basis closure of the seed monomials and the matrix of the operator.

        Column j holds the expansion of the operator applied to basis
        monomial j.
        """
        basis = list(dict.fromkeys(tuple(m) for m in seeds))
        index = {m: i for i, m in enumerate(basis)}
        columns = []
        pos = 0
        while pos < len(basis):
            image = self.apply(Multivector(self.table, {basis[pos]: 1}))
            col = {}
            for mono, coeff in image.terms.items():
                if mono not in index:
                    index[mono] = len(basis)
                    basis.append(mono)
                col[mono] = complex(coeff)
            columns.append(col)
            pos += 1
        matrix = np.zeros((len(basis), len(basis)), dtype=complex)
        for j, col in enumerate(columns):
            for mono, value in col.items():
                matrix[index[mono], j] = value
        return basis, matrix

    def full_basis(self):
        """All monomials with total base-field degree within the truncation.

        The supported Hamiltonians never raise that degree, so the operator
        is closed on this set.
        """
        case = get_case(self.case)
        D = self.truncation
        names = self.table.names
        ranges = [range(self.table.truncation(i) + 1) for i in range(len(names))]
        base_slots = [i for i, n in enumerate(names) if n in case.base_names]
        out = []
        for exps in itertools.product(*ranges):
            if sum(exps[i] for i in base_slots) <= D:
                out.append(exps)
        return out

    def spectrum(self) -> np.ndarray:
        basis, matrix = self.closure_matrix(self.full_basis())
        return np.linalg.eigvals(matrix)

    def spectrum_is_real(self, tol=1e-9) -> bool:
        return bool(np.max(np.abs(self.spectrum().imag), initial=0.0) <= tol)


def build_cpi_hamiltonian(spec: CpiSpec) -> LiouvilleOperator:
    """Realize the CPI Hamiltonian of ``spec`` as an operator.

    Coadjoint evolution uses Fourier modes, not this operator; asking for it
    raises an unsupported-case error.
    """
    case = get_case(spec.case)
    if case.name == "coadjoint":
        raise UnsupportedCaseError(
            "coadjoint wavefunctions are Fourier series; use evolve directly"
        )
    h = spec.bound_hamiltonian()
    h_tilde = cpi_hamiltonian(case, h)
    table = operator_table(case, spec.truncation)
    ghost_of = {f.antighost: f.ghost for f in case.families}
    base_of = {f.aux: f.base for f in case.families}
    aux_factor = CRational(0, 1) if case.base_parity == ODD else CRational(0, -1)
    antighost_factor = CRational(-1) if case.base_parity == ODD else CRational(1)
    terms = []
    pieces = []
    for mono in sorted(
        h_tilde.terms, key=lambda m: tuple((case.context.sort_key(k), e) for k, e in m)
    ):
        coeff = h_tilde.terms[mono]
        word = []
        for (name, dot), exp in mono:
            if dot:
                raise UnsupportedCaseError("CPI Hamiltonian with dotted symbols")
            if name in base_of:
                for _ in range(exp):
                    coeff = coeff * aux_factor
                    word.append(("diff", base_of[name]))
            elif name in ghost_of:
                for _ in range(exp):
                    coeff = coeff * antighost_factor
                    word.append(("diff", ghost_of[name]))
            else:
                word.extend(("mul", name) for _ in range(exp))
        terms.append((coeff, tuple(word)))
        pieces.append(
            "("
            + " ".join(f"d/d{n}" if kind == "diff" else n for kind, n in word)
            + ")"
        )
    operator = GrassmannOperator(table, terms)
    return LiouvilleOperator(
        case.name,
        table,
        operator,
        " + ".join(pieces) if pieces else "0",
        spec.truncation,
    )


# -- wavefunctions -----------------------------------------------------------------


class FourierWavefunction:
    """Wavefunction on the enlarged coadjoint space.

    Terms are keyed (k, eta_exp, c_phi_exp, c_eta_exp) and stand for
    e^{ikφ}·η^a·(c^φ)^g·(c^η)^h with a complex coefficient.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping):
        clean = {}
        for key, coeff in terms.items():
            k, eta_e, cphi_e, ceta_e = key
            try:
                k = _as_int_index(k)
            except TypeError:
                raise ValueError(f"bad Fourier term key {key!r}") from None
            if eta_e < 0 or cphi_e not in (0, 1) or ceta_e not in (0, 1):
                raise ValueError(f"bad Fourier term key {key!r}")
            value = complex(coeff)
            if value:
                clean[(k, eta_e, cphi_e, ceta_e)] = value
        self.terms = clean

    @classmethod
    def wrapped_gaussian(cls, center: float, sigma: float = 0.35, modes: int = 48):
        """Periodic Gaussian packet: c_k = e^{−σ²k²/2} e^{−ik·center} / 2π."""
        terms = {}
        for k in range(-modes, modes + 1):
            terms[(k, 0, 0, 0)] = (
                cmath.exp(-0.5 * sigma * sigma * k * k) * cmath.exp(-1j * k * center) / (2 * cmath.pi)
            )
        return cls(terms)

    def tensor_factor(self, eta_exp=0, c_phi_exp=0, c_eta_exp=0):
        """Same mode content attached to a fixed η/ghost monomial."""
        return FourierWavefunction(
            {
                (k, eta_exp, c_phi_exp, c_eta_exp): c
                for (k, _e, _g, _h), c in self.terms.items()
            }
        )

    def coefficient(self, key) -> complex:
        return self.terms.get(tuple(key), 0j)

    def circular_center(self) -> float:
        """Angle estimate from the k = −1 mode (the circular first moment)."""
        c = self.coefficient((-1, 0, 0, 0))
        if not c:
            raise ValueError("no k=-1 mode; circular center undefined")
        return cmath.phase(c)

    def norm_sq(self) -> float:
        return sum(abs(c) ** 2 for c in self.terms.values())

    def max_difference(self, other) -> float:
        keys = set(self.terms) | set(other.terms)
        if not keys:
            return 0.0
        return max(abs(self.terms.get(k, 0j) - other.terms.get(k, 0j)) for k in keys)

    def __eq__(self, other):
        if not isinstance(other, FourierWavefunction):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"FourierWavefunction({len(self.terms)} modes)"


@dataclass(frozen=True)
class EnlargedWavefunction:
    """Wavefunction over fields and ghosts for one case.

    ``expansion`` is a Multivector for the polynomial cases and a
    FourierWavefunction for the coadjoint case.
    """

    case: str
    expansion: object

    def __post_init__(self):
        case = get_case(self.case)
        if case.name == "coadjoint":
            if not isinstance(self.expansion, FourierWavefunction):
                raise UnsupportedCaseError("coadjoint expansion must be a Fourier series")
        elif not isinstance(self.expansion, Multivector):
            raise UnsupportedCaseError("polynomial expansion must be a Multivector")


# -- evolution ---------------------------------------------------------------------


def evolve(psi, spec: CpiSpec, t: float, operator: LiouvilleOperator | None = None):
    """Solve i dψ/dt = H̃ψ for time t.

    Coadjoint: each Fourier mode k gains the exact phase e^{i·k·μB·t}.
    Polynomial cases: matrix exponential on the closure of ψ's monomials,
    with exact per-monomial phases when the closure is diagonal.
    """
    if isinstance(psi, EnlargedWavefunction):
        return EnlargedWavefunction(psi.case, evolve(psi.expansion, spec, t, operator))
    case = get_case(spec.case)
    if case.name == "coadjoint":
        if not isinstance(psi, FourierWavefunction):
            raise UnsupportedCaseError("coadjoint evolve expects a FourierWavefunction")
        mu_b = spec.constant("muB")
        return FourierWavefunction(
            {key: c * cmath.exp(1j * key[0] * mu_b * t) for key, c in psi.terms.items()}
        )
    if not isinstance(psi, Multivector):
        raise UnsupportedCaseError("polynomial evolve expects a Multivector")
    h = spec.bound_hamiltonian()
    if h.degree_in(case.base_names) > 2:
        raise UnsupportedCaseError(
            "evolution generator is not block diagonal for base-field degree > 2"
        )
    if operator is None:
        operator = build_cpi_hamiltonian(spec)
    if psi.table != operator.table:
        raise UnsupportedCaseError("wavefunction table does not match the operator table")
    if psi.is_zero():
        return psi
    basis, matrix = operator.closure_matrix(sorted(psi.terms))
    vec = np.zeros(len(basis), dtype=complex)
    for i, mono in enumerate(basis):
        c = psi.terms.get(mono)
        if c is not None:
            vec[i] = complex(c)
    off_diagonal = matrix - np.diag(np.diag(matrix))
    if not off_diagonal.any():
        out = vec * np.array(
            [cmath.exp(-1j * t * matrix[i, i]) for i in range(len(basis))]
        )
    else:
        out = expm(-1j * t * matrix) @ vec
    terms = {mono: out[i] for i, mono in enumerate(basis) if out[i]}
    return Multivector(operator.table, terms)


def jacobi_fields(spec: CpiSpec, c0, t: float) -> tuple:
    """Closed-form ghost transport along the classical flow.

    coadjoint: ghosts are constant.  grassmann: (e^{iωt}c₀, e^{−iωt}c₁) with
    ω the bilinear coefficient.  bosonic: exp(t·Ω·Hess H) applied to c₀.
    """
    case = get_case(spec.case)
    c0 = tuple(complex(v) for v in c0)
    if len(c0) != 2:
        raise ValueError("expected one ghost component per phase-space direction")
    if case.name == "coadjoint":
        return c0
    if case.name == "grassmann":
        w = spec.constant("w")
        return (c0[0] * cmath.exp(1j * w * t), c0[1] * cmath.exp(-1j * w * t))
    h = spec.bound_hamiltonian()
    hess = np.zeros((2, 2))
    for a, fa in enumerate(case.families):
        for b, fb in enumerate(case.families):
            dd = partial_derivative(partial_derivative(h, fb.base), fa.base)
            if not dd.is_constant():
                raise UnsupportedCaseError("ghost transport needs a quadratic Hamiltonian")
            hess[a, b] = float(complex(dd.constant_part()).real)
    flow = expm(t * np.array(OMEGA_CANONICAL, dtype=float) @ hess)
    moved = flow @ np.array(c0)
    return (moved[0], moved[1])


def flow_matrix(spec: CpiSpec, t: float) -> np.ndarray:
    """Linear classical flow on (first, second) base fields; bosonic only.

    Requires a homogeneous quadratic Hamiltonian so that fields and ghosts
    share one linear flow.
    """
    case = get_case(spec.case)
    if case.name != "bosonic":
        raise UnsupportedCaseError("linear flow matrix is for the bosonic case")
    h = spec.bound_hamiltonian()
    hess = np.zeros((2, 2))
    for a, fa in enumerate(case.families):
        da = partial_derivative(h, fa.base)
        if da.constant_part():
            raise UnsupportedCaseError("linear flow needs a homogeneous quadratic Hamiltonian")
        for b, fb in enumerate(case.families):
            dd = partial_derivative(da, fb.base)
            if not dd.is_constant():
                raise UnsupportedCaseError("linear flow needs a quadratic Hamiltonian")
            hess[a, b] = float(complex(dd.constant_part()).real)
    return expm(t * np.array(OMEGA_CANONICAL, dtype=float) @ hess)


def characteristics_check(spec: CpiSpec, t: float = 0.7, seed: int = 0, samples: int = 5) -> dict:
    """Compare operator evolution against transport along classical paths.

    Returns {"checks": [{name, expected, actual, residual, passed}, ...],
    "passed": bool}.  Residual tolerances: 1e−9.
    """
    rng = random.Random(seed)
    case = get_case(spec.case)
    checks = []

    def add(name, expected, actual, residual, tol=1e-9):
        checks.append(
            {
                "name": name,
                "expected": expected,
                "actual": actual,
                "residual": float(residual),
                "passed": bool(residual <= tol),
            }
        )

    if case.name == "coadjoint":
        mu_b = spec.constant("muB")
        for n in range(samples):
            center = rng.uniform(0, 2 * np.pi)
            packet = FourierWavefunction.wrapped_gaussian(center)
            moved = evolve(packet, spec, t)
            expected = (center - mu_b * t) % (2 * np.pi)
            actual = moved.circular_center() % (2 * np.pi)
            residual = abs((actual - expected + np.pi) % (2 * np.pi) - np.pi)
            add(f"packet-center-{n}", expected, actual, residual)
        packet = FourierWavefunction.wrapped_gaussian(1.0)
        with_eta = packet.tensor_factor(eta_exp=2)
        moved = evolve(with_eta, spec, t)
        residual = max(
            abs(
                moved.coefficient((k, 2, 0, 0))
                - packet.coefficient((k, 0, 0, 0)) * cmath.exp(1j * k * mu_b * t)
            )
            for k in range(-48, 49)
        )
        add("eta-marginal-invariant", 0.0, residual, residual)
        period = 2 * np.pi / mu_b
        back = evolve(packet, spec, period)
        add("period-identity", 0.0, packet.max_difference(back), packet.max_difference(back), 1e-9)
        ghosts = jacobi_fields(spec, (0.3 + 0.1j, -0.2j), t)
        residual = max(abs(ghosts[0] - (0.3 + 0.1j)), abs(ghosts[1] - (-0.2j)))
        add("ghosts-constant", 0.0, residual, residual)
        add(
            "norm-preserved",
            packet.norm_sq(),
            moved.norm_sq(),
            abs(packet.norm_sq() - evolve(packet, spec, t).norm_sq()),
        )
        return {"checks": checks, "passed": all(c["passed"] for c in checks)}

    operator = build_cpi_hamiltonian(spec)
    if case.name == "grassmann":
        w = spec.constant("w")
        for a in (0, 1):
            for b in (0, 1):
                for j in (0, 1, 2):
                    for k in (0, 1):
                        exps = (a, b, j, k)
                        value = operator.eigenvalue_on(exps)
                        expected = w * (a - b + j - k)
                        if value is None:
                            add(f"eigen-{exps}", expected, None, float("inf"))
                            continue
                        residual = abs(value - expected)
                        add(f"eigen-{exps}", expected, value.real, residual)
        mono = Multivector(operator.table, {(1, 0, 1, 0): 1.0})
        moved = evolve(mono, spec, t, operator)
        expected_phase = cmath.exp(-1j * w * 2 * t)
        actual = complex(moved.terms.get((1, 0, 1, 0), 0j))
        add("phase-xi-cxi", expected_phase, actual, abs(actual - expected_phase))
        one = operator.table.scalar(1.0)
        add(
            "constant-annihilated",
            0.0,
            0.0,
            0.0 if operator.apply(one).is_zero() else 1.0,
        )
        return {"checks": checks, "passed": all(c["passed"] for c in checks)}

    # bosonic: operator evolution against substitution along the linear flow
    flow_back = flow_matrix(spec, -t)
    table = operator.table
    q_flow = flow_back[0, 0] * table.gen("q") + flow_back[0, 1] * table.gen("p")
    p_flow = flow_back[1, 0] * table.gen("q") + flow_back[1, 1] * table.gen("p")
    cq_flow = flow_back[0, 0] * table.gen("c_q") + flow_back[0, 1] * table.gen("c_p")
    cp_flow = flow_back[1, 0] * table.gen("c_q") + flow_back[1, 1] * table.gen("c_p")
    bindings = {"q": q_flow, "p": p_flow, "c_q": cq_flow, "c_p": cp_flow}
    for n in range(samples):
        terms = {}
        for _ in range(4):
            a = rng.randrange(0, spec.truncation - 1)
            b = rng.randrange(0, spec.truncation - 1)
            g = rng.randrange(0, 2)
            h_ = rng.randrange(0, 2)
            terms[(a, b, g, h_)] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        psi = Multivector(table, terms)
        via_operator = evolve(psi, spec, t, operator)
        via_flow = psi.substitute(bindings)
        keys = set(via_operator.terms) | set(via_flow.terms)
        residual = max(
            (
                abs(
                    complex(via_operator.terms.get(kk, 0j))
                    - complex(via_flow.terms.get(kk, 0j))
                )
                for kk in keys
            ),
            default=0.0,
        )
        add(f"transport-{n}", 0.0, residual, residual)
    return {"checks": checks, "passed": all(c["passed"] for c in checks)}
