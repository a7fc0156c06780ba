"""Moment closures and finite-volume transport in slab geometry."""

from .closures import (
    ClosureKind,
    characteristic_field,
    flux,
    interpolation_constant,
    jacobian,
    kershaw_close,
    mn_close,
    mn_solve_dual,
    pn_close,
    pn_flux_matrix,
)
from .errors import (
    BoundaryMoment,
    ConfigError,
    DegenerateState,
    GridMismatch,
    NoConvergence,
    NonPositiveDensity,
    NotRealizable,
    OrderTooLow,
    ParseError,
    RealizabilityLost,
    ReconstructionFailed,
    SlabMomentsError,
    ValidationError,
)
from .kernels import BACKEND
from .moment_core import (
    QuadratureRule,
    default_quadrature,
    gauss_legendre,
    isotropic_moments,
    legendre_to_monomial,
    moments_of_density,
    monomial_to_legendre,
    normalize,
)
from .realizability import (
    AtomicMeasure,
    HankelSet,
    MomentBounds,
    build_hankel,
    hankel_rank,
    is_realizable,
    moment_bounds,
    realizability_slack,
    reconstruct_atomic,
)
from .solver import (
    Grid,
    MaterialField,
    RunResult,
    Scenario,
    SCENARIOS,
    SolverState,
    compare_to_reference,
    lax_friedrichs_flux,
    plane_source,
    run_scenario,
    scattering_source,
    source_beam,
    step,
)

__version__ = "0.1.0"
