"""Graded-algebra toolkit relating quantum and classical spin path integrals.

Layers, bottom up:

* :mod:`spindeq.exact`: exact rational-complex coefficients;
* :mod:`spindeq.grassmann`: finite graded algebras with Berezin calculus;
* :mod:`spindeq.symbols`: graded polynomials in named symbols with formal
  time derivatives, parsing, and printing;
* :mod:`spindeq.superfield`: superfield expansions and the dequantization
  map from quantum to classical-path-integral Lagrangians;
* :mod:`spindeq.quantum`: spin-1/2 states and operators over one odd
  generator, symbol composition, and time-sliced propagators;
* :mod:`spindeq.cpi`: the classical-path-integral Hamiltonian as an
  operator, with transport checks against classical characteristics;
* :mod:`spindeq.orbit`: the constrained sphere: Poisson/Dirac brackets and
  closed-form precession;
* :mod:`spindeq.suite` / :mod:`spindeq.cli`: end-to-end checks and the
  ``spindeq`` command.
"""

from .errors import (
    IdentityViolationError,
    OddPowerError,
    ParityError,
    ParseError,
    PoleError,
    SpindeqError,
    TableMismatchError,
    UnknownGeneratorError,
    UnknownSymbolError,
    UnsupportedCaseError,
)
from .exact import CRational, I, crational
from .grassmann import (
    DEFAULT_EVEN_TRUNCATION,
    EVEN,
    ODD,
    Generator,
    GeneratorTable,
    GrassmannOperator,
    Multivector,
    berezin_integral,
    graded_exp,
    left_derivative,
    product,
)
from .symbols import (
    GradedPolynomial,
    SymbolContext,
    SymbolDecl,
    bind_constants,
    formal_time_derivative,
    format_poly,
    parse,
    partial_derivative,
    substitute,
)
from .superfield import (
    CASES,
    DequantizationCase,
    DequantizationResult,
    FieldFamily,
    Superfield,
    builtin_hamiltonian,
    builtin_hamiltonians,
    compose_observable,
    compose_observable_taylor,
    dequantize,
    get_case,
    quantum_lagrangian,
    standard_superfields,
    superfield_bindings,
    supertime_integral,
)
from .quantum import (
    MagneticField,
    SpinOperator,
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
    slicing_errors,
    spin_operators,
    symbol_to_matrix,
)
from .cpi import (
    OMEGA_CANONICAL,
    CpiSpec,
    EnlargedWavefunction,
    FourierWavefunction,
    LiouvilleOperator,
    build_cpi_hamiltonian,
    characteristics_check,
    cpi_hamiltonian,
    cpi_kinetic,
    cpi_lagrangian,
    evolve,
    flow_matrix,
    jacobi_fields,
    operator_table,
)
from .orbit import (
    BUILTIN_FUNCTIONS,
    CARTESIAN,
    CONSTRAINT_1,
    CONSTRAINT_2,
    HEIGHT,
    PHI,
    P_PHI,
    P_THETA,
    THETA,
    X1,
    X2,
    X3,
    OrbitState,
    PhaseFunction,
    classical_trajectory,
    dirac_bracket,
    equation_residuals,
    one_form_exterior_residual,
    poisson_bracket,
    precession_period,
    random_states,
    strip_gradient,
    symplectic_data,
    total_hamiltonian,
    trajectory_derivatives,
    wrap_angle,
)
from .suite import (
    ALL_CHECKS,
    CheckResult,
    check_bosonic_dequantization,
    check_coadjoint_dequantization,
    check_cpi_transport,
    check_dirac_brackets,
    check_grassmann_dequantization,
    check_isomorphism,
    check_observable_map,
    check_precession,
    check_slicing,
    run_all,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
