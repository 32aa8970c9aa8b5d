"""Classical-path-integral Hamiltonians as polynomials and as operators.

The polynomial layer is pinned by worked examples for all three cases; the
operator layer is checked against closed-form characteristics: Fourier
modes shift, ghost factors ride along unchanged, monomial eigenvalues come
out real, and the matrix-exponential evolution is additive in time.
"""

import cmath
import math

import numpy as np
import pytest

from spindeq import (
    CpiSpec,
    EnlargedWavefunction,
    FourierWavefunction,
    UnsupportedCaseError,
    build_cpi_hamiltonian,
    builtin_hamiltonian,
    characteristics_check,
    cpi_hamiltonian,
    cpi_kinetic,
    cpi_lagrangian,
    evolve,
    flow_matrix,
    get_case,
    jacobi_fields,
    operator_table,
)


def test_coadjoint_hamiltonian_is_linear_in_aux():
    case = get_case("coadjoint")
    h = builtin_hamiltonian("coadjoint", "spin")
    assert cpi_hamiltonian(case, h) == case.context.parse("-muB*Lam_phi")


def test_bosonic_hamiltonians():
    case = get_case("bosonic")
    ctx = case.context
    free = cpi_hamiltonian(case, builtin_hamiltonian("bosonic", "free"))
    assert free == ctx.parse("lam_q*p + i*cbar_q*c_p")
    harmonic = cpi_hamiltonian(case, builtin_hamiltonian("bosonic", "harmonic"))
    assert harmonic == ctx.parse("lam_q*p - lam_p*q + i*cbar_q*c_p - i*cbar_p*c_q")
    assert cpi_hamiltonian(case, ctx.zero()).is_zero()


def test_grassmann_hamiltonian():
    case = get_case("grassmann")
    ctx = case.context
    out = cpi_hamiltonian(case, builtin_hamiltonian("grassmann", "spin"))
    assert out == ctx.parse(
        "i*w*(lam_xi*xi - lam_xibar*xibar) - w*(cbar_xi*c_xi - cbar_xibar*c_xibar)"
    )


def test_grassmann_hamiltonian_requires_bilinear_form():
    case = get_case("grassmann")
    with pytest.raises(UnsupportedCaseError):
        cpi_hamiltonian(case, case.context.parse("w*xi"))


def test_lagrangian_is_kinetic_minus_hamiltonian():
    for name, key in [("bosonic", "harmonic"), ("grassmann", "spin"), ("coadjoint", "spin")]:
        case = get_case(name)
        h = builtin_hamiltonian(name, key)
        assert cpi_lagrangian(case, h) == cpi_kinetic(case) - cpi_hamiltonian(case, h)


def test_spec_validation():
    with pytest.raises(ValueError):
        CpiSpec("bosonic", omega_matrix=((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        CpiSpec("coadjoint", omega_matrix=((0, 2), (-2, 0)))
    with pytest.raises(ValueError):
        CpiSpec("bosonic", truncation=0)
    ctx = get_case("bosonic").context
    with pytest.raises(ValueError):
        CpiSpec("bosonic", hamiltonian=ctx.parse("q^5"), truncation=4)


def test_spec_binds_constants_exactly():
    spec = CpiSpec("grassmann", coefficients={"w": 1.5})
    bound = spec.bound_hamiltonian()
    ctx = get_case("grassmann").context
    assert bound == ctx.parse("-3/4 + 3/2*xi*xibar")
    assert spec.constant("w") == 1.5


def test_spec_default_hamiltonians():
    assert CpiSpec("bosonic").bound_hamiltonian() == get_case("bosonic").context.parse(
        "p^2/2 + q^2/2"
    )
    with pytest.raises(UnsupportedCaseError):
        CpiSpec("grassmann").bound_hamiltonian()
    with pytest.raises(UnsupportedCaseError):
        build_cpi_hamiltonian(CpiSpec("coadjoint", coefficients={"muB": 1.0}))


def test_operator_annihilates_constants():
    for spec in (CpiSpec("bosonic"), CpiSpec("grassmann", coefficients={"w": 2.0})):
        op = build_cpi_hamiltonian(spec)
        assert op.apply(op.table.scalar(3)).is_zero()


def test_zero_hamiltonian_gives_zero_operator():
    ctx = get_case("bosonic").context
    op = build_cpi_hamiltonian(CpiSpec("bosonic", hamiltonian=ctx.zero()))
    probe = op.table.gen("q") * op.table.gen("c_p") + op.table.scalar(2)
    assert op.apply(probe).is_zero()


def test_zero_time_evolution_is_identity():
    spec = CpiSpec("coadjoint", coefficients={"muB": 0.8})
    wave = FourierWavefunction.wrapped_gaussian(center=0.4)
    assert evolve(wave, spec, 0.0).max_difference(wave) == 0.0
    psi = operator_table("bosonic").gen("q")
    out = evolve(psi, CpiSpec("bosonic"), 0.0)
    assert complex(out.terms[(1, 0, 0, 0)]) == pytest.approx(1.0, abs=1e-15)


def test_grassmann_eigenvalues_count_occupation():
    w = 1.3
    op = build_cpi_hamiltonian(CpiSpec("grassmann", coefficients={"w": w}))
    # exps = (xi, xibar, c_xi, c_xibar); eigenvalue = w(a - b + j - k).
    for exps, factor in [
        ((1, 0, 0, 0), 1),
        ((0, 1, 0, 0), -1),
        ((1, 0, 1, 0), 2),
        ((1, 1, 0, 1), -1),
        ((0, 0, 0, 0), 0),
    ]:
        value = op.eigenvalue_on(exps)
        assert value is not None
        assert value == pytest.approx(w * factor)


def test_bosonic_monomials_mix_under_rotation():
    op = build_cpi_hamiltonian(CpiSpec("bosonic"))
    assert op.eigenvalue_on((1, 0, 0, 0)) is None
    basis, matrix = op.closure_matrix([(1, 0, 0, 0)])
    assert basis == [(1, 0, 0, 0), (0, 1, 0, 0)]
    assert np.allclose(matrix, np.array([[0, 1j], [-1j, 0]]))


def test_spectrum_is_real():
    for spec in (CpiSpec("bosonic"), CpiSpec("grassmann", coefficients={"w": 0.7})):
        assert build_cpi_hamiltonian(spec).spectrum_is_real()


def test_fourier_wavefunction_validation():
    with pytest.raises(ValueError):
        FourierWavefunction({(0, 0, 2, 0): 1.0})
    with pytest.raises(ValueError):
        FourierWavefunction({(0.5, 0, 0, 0): 1.0})
    with pytest.raises(ValueError):
        FourierWavefunction({(0, -1, 0, 0): 1.0})
    wave = FourierWavefunction({(2, 0, 0, 0): 0.0, (1, 1, 1, 0): 2.0})
    assert (2, 0, 0, 0) not in wave.terms
    assert wave.coefficient((1, 1, 1, 0)) == 2.0


def test_wrapped_gaussian_center():
    for center in (-2.0, 0.3, 3.0):
        wave = FourierWavefunction.wrapped_gaussian(center=center)
        assert wave.circular_center() == pytest.approx(center, abs=1e-9)
    assert FourierWavefunction.wrapped_gaussian(center=1.0).max_difference(
        FourierWavefunction.wrapped_gaussian(center=1.0)
    ) == 0.0


def test_coadjoint_evolution_shifts_the_packet():
    mu_b = 0.8
    spec = CpiSpec("coadjoint", coefficients={"muB": mu_b})
    wave = FourierWavefunction.wrapped_gaussian(center=1.0)
    out = evolve(wave, spec, 2.0)
    assert out.circular_center() == pytest.approx(1.0 - mu_b * 2.0, abs=1e-9)


def test_coadjoint_evolution_is_additive_and_periodic():
    mu_b = 0.8
    spec = CpiSpec("coadjoint", coefficients={"muB": mu_b})
    wave = FourierWavefunction.wrapped_gaussian(center=0.4)
    once = evolve(wave, spec, 2.0)
    twice = evolve(evolve(wave, spec, 0.7), spec, 1.3)
    assert once.max_difference(twice) < 1e-12
    period = 2.0 * math.pi / mu_b
    assert evolve(wave, spec, period).max_difference(wave) < 1e-12


def test_coadjoint_ghost_factors_only_pick_up_mode_phases():
    mu_b = 1.1
    spec = CpiSpec("coadjoint", coefficients={"muB": mu_b})
    wave = FourierWavefunction({(2, 1, 1, 0): 1.0, (-1, 0, 0, 1): 0.5})
    out = evolve(wave, spec, 0.9)
    assert out.coefficient((2, 1, 1, 0)) == pytest.approx(cmath.exp(1j * 2 * mu_b * 0.9))
    assert out.coefficient((-1, 0, 0, 1)) == pytest.approx(
        0.5 * cmath.exp(-1j * mu_b * 0.9)
    )


def test_polynomial_evolution_is_additive():
    spec = CpiSpec("bosonic")
    psi = operator_table("bosonic").gen("q") + operator_table("bosonic").gen("c_p")
    once = evolve(psi, spec, 1.7)
    twice = evolve(evolve(psi, spec, 0.9), spec, 0.8)
    for mono in set(once.terms) | set(twice.terms):
        a = complex(once.terms.get(mono, 0))
        b = complex(twice.terms.get(mono, 0))
        assert a == pytest.approx(b, abs=1e-12)


def test_quartic_evolution_is_rejected():
    ctx = get_case("bosonic").context
    spec = CpiSpec("bosonic", hamiltonian=ctx.parse("p^2/2 + q^4/4"))
    with pytest.raises(UnsupportedCaseError):
        evolve(operator_table("bosonic").gen("q"), spec, 1.0)


def test_evolve_type_and_table_guards():
    spec = CpiSpec("coadjoint", coefficients={"muB": 1.0})
    with pytest.raises(UnsupportedCaseError):
        evolve(operator_table("bosonic").gen("q"), spec, 1.0)
    bos = CpiSpec("bosonic")
    with pytest.raises(UnsupportedCaseError):
        evolve(operator_table("bosonic", truncation=2).gen("q"), bos, 1.0)


def test_enlarged_wavefunction_wrapping():
    with pytest.raises(UnsupportedCaseError):
        EnlargedWavefunction("coadjoint", operator_table("bosonic").gen("q"))
    with pytest.raises(UnsupportedCaseError):
        EnlargedWavefunction("bosonic", FourierWavefunction({}))
    wrapped = EnlargedWavefunction("bosonic", operator_table("bosonic").gen("q"))
    out = evolve(wrapped, CpiSpec("bosonic"), 0.3)
    assert isinstance(out, EnlargedWavefunction)
    assert out.case == "bosonic"


def test_jacobi_fields_all_cases():
    coad = CpiSpec("coadjoint", coefficients={"muB": 0.8})
    assert jacobi_fields(coad, (1.0, 2.0), 3.0) == ((1 + 0j), (2 + 0j))
    w = 1.3
    gra = CpiSpec("grassmann", coefficients={"w": w})
    c0, c1 = jacobi_fields(gra, (1.0, 1.0), 1.0)
    assert c0 == pytest.approx(cmath.exp(1j * w))
    assert c1 == pytest.approx(cmath.exp(-1j * w))
    bos = CpiSpec("bosonic")
    out = jacobi_fields(bos, (1.0, 0.0), math.pi / 2)
    assert complex(out[0]) == pytest.approx(0, abs=1e-12)
    assert complex(out[1]) == pytest.approx(-1, abs=1e-12)


def test_flow_matrix_forms():
    assert np.allclose(
        flow_matrix(CpiSpec("bosonic"), 0.5),
        np.array([[math.cos(0.5), math.sin(0.5)], [-math.sin(0.5), math.cos(0.5)]]),
    )
    ctx = get_case("bosonic").context
    bilinear = CpiSpec("bosonic", hamiltonian=ctx.parse("alpha*q*p"), coefficients={"alpha": 0.5})
    assert np.allclose(flow_matrix(bilinear, 2.0), np.diag([math.e, 1.0 / math.e]))
    with pytest.raises(UnsupportedCaseError):
        flow_matrix(CpiSpec("bosonic", hamiltonian=ctx.parse("q^4/4")), 1.0)


def test_characteristics_check_smoke():
    report = characteristics_check(CpiSpec("coadjoint", coefficients={"muB": 0.8}), t=0.5)
    assert report["passed"]
    assert all(c["passed"] for c in report["checks"])
