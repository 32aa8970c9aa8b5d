"""Spin-1/2 over one odd generator: operators, symbols, kernels, slicing.

Every operator here exists in four interchangeable forms: a 2x2 matrix, a
word in multiplication/derivative moves on wavefunctions, an ordered symbol
in (xi, xibar), and an integral kernel in (xi, xi').  The tests force all
four to agree, then check that composing symbols is a homomorphism onto
matrix products and that the time-sliced propagator converges at first
order onto the closed-form rotation.
"""

from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from spindeq import (
    CRational,
    MagneticField,
    SpinState,
    apply_kernel,
    compose_symbols,
    hamiltonian,
    integral_kernel,
    kernel_from_symbol,
    kernel_propagate,
    kernel_to_matrix,
    magnetic_evolution,
    operator_from_matrix,
    ordered_symbol,
    pauli_evolve,
    sliced_propagator,
    sliced_symbol,
    spin_operators,
    symbol_to_matrix,
)

fractions_st = st.fractions(min_value=-3, max_value=3, max_denominator=6)
entry_st = st.builds(CRational, fractions_st, fractions_st)
matrix_st = st.tuples(
    st.tuples(entry_st, entry_st), st.tuples(entry_st, entry_st)
)

BASIS = (SpinState(1, 0), SpinState(0, 1))


def _matmul(m1, m2):
    return tuple(
        tuple(sum((m1[i][k] * m2[k][j] for k in range(2)), CRational(0)) for j in range(2))
        for i in range(2)
    )


def _matrices_equal(m1, m2) -> bool:
    return all(m1[i][j] == m2[i][j] for i in range(2) for j in range(2))


def test_spin_operator_matrices():
    sx, sy, sz, n = spin_operators()
    half = CRational(Fraction(1, 2))
    assert sx.matrix == ((CRational(0), half), (half, CRational(0)))
    assert sy.matrix == ((CRational(0), CRational(0, Fraction(-1, 2))),
                         (CRational(0, Fraction(1, 2)), CRational(0)))
    assert sz.matrix == ((half, CRational(0)), (CRational(0), -half))
    assert n.matrix == ((half, CRational(0)), (CRational(0), -half))


def test_hbar_scales_spin_but_not_occupation():
    plain = spin_operators()
    scaled = spin_operators(hbar=Fraction(3))
    for a, b in zip(plain[:3], scaled[:3]):
        assert _matrices_equal(
            tuple(tuple(e * 3 for e in row) for row in a.matrix), b.matrix
        )
    assert _matrices_equal(plain[3].matrix, scaled[3].matrix)


def test_occupation_operator_squares_to_quarter_identity():
    n = spin_operators()[3]
    quarter = CRational(Fraction(1, 4))
    assert _matrices_equal(
        _matmul(n.matrix, n.matrix), ((quarter, CRational(0)), (CRational(0), quarter))
    )
    for state in BASIS:
        twice = n.apply_state_via_words(n.apply_state_via_words(state))
        assert twice.c0 == quarter * state.c0
        assert twice.c1 == quarter * state.c1


def test_hamiltonian_matrix_forms():
    mu = Fraction(3, 2)
    diag = hamiltonian(MagneticField(0, 0, 2, mu_b=mu))
    assert diag.matrix == ((CRational(-3), CRational(0)), (CRational(0), CRational(3)))
    zero = hamiltonian(MagneticField(0, 0, 0))
    assert all(e == 0 for row in zero.matrix for e in row)


def test_diagonal_field_symbol_and_kernel_terms():
    b = MagneticField(0, 0, 1)
    sym = ordered_symbol(hamiltonian(b))
    assert sym.coefficient() == -1
    assert sym.coefficient(xi=1, xibar=1) == 2
    bx, by, mu = Fraction(2), Fraction(-1), Fraction(1, 2)
    kern = integral_kernel(hamiltonian(MagneticField(bx, by, 0, mu_b=mu)))
    assert kern.coefficient() == -CRational(mu) * CRational(bx, -by)


def test_matrix_and_word_forms_agree_on_basis():
    ops = list(spin_operators()) + [hamiltonian(MagneticField(1, Fraction(1, 2), -2))]
    for op in ops:
        for state in BASIS:
            via_matrix = op.apply_matrix(state)
            via_words = op.apply_state_via_words(state)
            assert via_matrix.c0 == via_words.c0
            assert via_matrix.c1 == via_words.c1


def test_su2_commutators_in_matrix_form():
    sx, sy, sz, _ = spin_operators()
    i = CRational(0, 1)
    for a, b, c in ((sx, sy, sz), (sy, sz, sx), (sz, sx, sy)):
        comm = _matmul(a.matrix, b.matrix)
        swapped = _matmul(b.matrix, a.matrix)
        lhs = tuple(tuple(comm[r][s] - swapped[r][s] for s in range(2)) for r in range(2))
        rhs = tuple(tuple(i * c.matrix[r][s] for s in range(2)) for r in range(2))
        assert _matrices_equal(lhs, rhs)


def test_symbol_matrix_round_trip():
    for op in spin_operators():
        assert _matrices_equal(symbol_to_matrix(ordered_symbol(op)), op.matrix)


def test_kernel_matrix_round_trip():
    for op in spin_operators():
        assert _matrices_equal(kernel_to_matrix(integral_kernel(op)), op.matrix)


def test_kernel_from_symbol_matches_direct_kernel():
    ops = list(spin_operators()) + [hamiltonian(MagneticField(2, -1, Fraction(1, 3)))]
    for op in ops:
        assert kernel_from_symbol(ordered_symbol(op)) == integral_kernel(op)


def test_identity_kernel_reproduces_states():
    ident = operator_from_matrix(((1, 0), (0, 1)))
    kern = integral_kernel(ident)
    for state in (SpinState(1, 0), SpinState(Fraction(2, 3), CRational(0, 1))):
        out = apply_kernel(kern, state.as_multivector())
        assert out == state.as_multivector()


def test_kernel_application_matches_matrix():
    op = hamiltonian(MagneticField(1, 2, 3))
    kern = integral_kernel(op)
    for state in BASIS:
        via_kernel = SpinState.from_multivector(apply_kernel(kern, state.as_multivector()))
        via_matrix = op.apply_matrix(state)
        assert via_kernel.c0 == via_matrix.c0
        assert via_kernel.c1 == via_matrix.c1


@given(m1=matrix_st, m2=matrix_st)
def test_symbol_composition_is_matrix_multiplication(m1, m2):
    s1 = ordered_symbol(operator_from_matrix(m1))
    s2 = ordered_symbol(operator_from_matrix(m2))
    assert _matrices_equal(symbol_to_matrix(compose_symbols(s1, s2)), _matmul(m1, m2))


@given(m1=matrix_st, m2=matrix_st, m3=matrix_st)
def test_symbol_composition_is_associative(m1, m2, m3):
    s1, s2, s3 = (ordered_symbol(operator_from_matrix(m)) for m in (m1, m2, m3))
    assert compose_symbols(compose_symbols(s1, s2), s3) == compose_symbols(
        s1, compose_symbols(s2, s3)
    )


def test_identity_symbol_is_neutral():
    ident = ordered_symbol(operator_from_matrix(((1, 0), (0, 1))))
    probe = ordered_symbol(hamiltonian(MagneticField(1, -2, 3)))
    assert compose_symbols(ident, probe) == probe
    assert compose_symbols(probe, ident) == probe


def test_magnetic_field_parsing():
    b = MagneticField.from_text("1/2, 0, -3", mu_b=Fraction(2))
    assert b.bx == Fraction(1, 2) and b.bz == -3
    assert b.is_exact()
    assert b.norm() == pytest.approx(np.sqrt(0.25 + 9.0))
    assert b.larmor_phase(2.0) == pytest.approx(4.0 * b.norm())
    with pytest.raises(ValueError):
        MagneticField.from_text("1,2")
    with pytest.raises(ValueError):
        MagneticField(0, 0, 0).unit()


def test_magnetic_evolution_matches_expm():
    for b, t in [
        (MagneticField(1, 0, 0), 0.9),
        (MagneticField(0.3, -0.4, 0.8, mu_b=1.7), 2.5),
        (MagneticField(0, 0, 0), 1.0),
    ]:
        h = hamiltonian(b).matrix_array()
        expected = scipy.linalg.expm(-1j * t * h)
        assert np.allclose(magnetic_evolution(b, t), expected, atol=1e-12)


def test_pauli_evolution_diagonal_phase_and_unitarity():
    mu_b, bz, t = 1.3, 0.7, 2.1
    out = pauli_evolve(SpinState(1, 0), MagneticField(0, 0, bz, mu_b=mu_b), t)
    assert complex(out.c0) == pytest.approx(np.exp(1j * mu_b * bz * t))
    assert complex(out.c1) == pytest.approx(0.0)
    rng = np.random.default_rng(5)
    for _ in range(5):
        b = MagneticField(*rng.normal(size=3), mu_b=abs(rng.normal()))
        psi = SpinState(*(rng.normal(size=2) + 1j * rng.normal(size=2)))
        evolved = pauli_evolve(psi, b, float(rng.uniform(0.1, 4.0)))
        assert evolved.norm() == pytest.approx(psi.norm(), abs=1e-12)


def test_zero_field_slicing_is_identity():
    assert np.allclose(sliced_propagator(MagneticField(0, 0, 0), 2.0, 5), np.eye(2))


def test_sliced_propagator_converges():
    b = MagneticField(0.6, 0.0, 0.8)
    t = 1.2
    exact = magnetic_evolution(b, t)
    errs = [np.abs(sliced_propagator(b, t, n) - exact).max() for n in (16, 32, 64)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] / errs[2] == pytest.approx(2.0, rel=0.2)


def test_sliced_symbol_single_slice():
    b = MagneticField(Fraction(1, 2), 0, 1)
    t = 0.25
    sym = sliced_symbol(b, t, 1)
    h = hamiltonian(b)
    expected = ordered_symbol(operator_from_matrix(((1, 0), (0, 1)))) + ordered_symbol(
        h
    ) * complex(0, -t)
    assert sym == expected


def test_sliced_propagator_rejects_bad_counts():
    with pytest.raises(ValueError):
        sliced_propagator(MagneticField(1, 0, 0), 1.0, 0)
    with pytest.raises(ValueError):
        sliced_symbol(MagneticField(1, 0, 0), 1.0, -3)


def test_kernel_propagation_tracks_matrix_evolution():
    b = MagneticField(0.3, -0.4, 0.8)
    t = 1.0
    n = 400
    state = SpinState(0.6, 0.8j)
    via_kernel = SpinState.from_multivector(
        kernel_propagate(state.as_multivector(), b, t, n)
    )
    via_matrix = pauli_evolve(state, b, t)
    err = max(
        abs(complex(via_kernel.c0) - complex(via_matrix.c0)),
        abs(complex(via_kernel.c1) - complex(via_matrix.c1)),
    )
    assert err < 5.0 / n
