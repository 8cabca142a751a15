"""rhofix: contraction fixed points in modular spaces.

Modular functionals and their F-norm, randomized checkers for the modular
axioms (plus s-convexity, doubling constants, and a sampled Fatou
surrogate), a Picard fixed-point engine with a doubling-constant power
path, and finite chain certificates for contraction orbits.
"""

from .chain import (
    ALPHA_MARGIN,
    EPS_GRID,
    ChainCertificate,
    SlackCheck,
    build_chain,
    cauchy_modulus,
    compute_alpha,
    node_slacks,
    verify_maximum_element,
    verify_order_pairs,
)
from .checks import (
    INVALID_FUNCTIONALS,
    AxiomReport,
    Delta2Result,
    PointSampler,
    Violation,
    check_fatou_sampled,
    check_modular_axioms,
    check_s_convexity,
    dead_zone,
    delta2_type_estimate,
    exact_doubling_constant,
    sign_skewed,
    sine_bump,
)
from .config import ProblemConfig, load_config
from .errors import (
    BracketSearchError,
    ConfigError,
    DimensionMismatch,
    DivergenceError,
    InconsistentContractionError,
    InvalidModularError,
    RhofixError,
    UnboundedOrbitError,
)
from .modular import (
    ABS_TOL,
    REL_TOL,
    Family,
    ModularSpec,
    NamedFunctional,
    Phi,
    as_point,
    f_norm,
    modular_dim,
    modular_fn,
    slack_tol,
)
from .problems import Problem, builtin_problems, l1_operator_norm, random_affine_contraction
from .solver import (
    IterationTrace,
    MapKind,
    MapSpec,
    OrbitBound,
    TraceStep,
    orbit_bound_check,
    picard_solve,
    power_index,
    solve_via_power,
    verify_contraction,
    verify_s_contraction,
)

__version__ = "0.1.0"

__all__ = [
    "ABS_TOL",
    "ALPHA_MARGIN",
    "AxiomReport",
    "BracketSearchError",
    "ChainCertificate",
    "ConfigError",
    "Delta2Result",
    "DimensionMismatch",
    "DivergenceError",
    "EPS_GRID",
    "Family",
    "INVALID_FUNCTIONALS",
    "InconsistentContractionError",
    "InvalidModularError",
    "IterationTrace",
    "MapKind",
    "MapSpec",
    "ModularSpec",
    "NamedFunctional",
    "OrbitBound",
    "Phi",
    "PointSampler",
    "Problem",
    "ProblemConfig",
    "REL_TOL",
    "RhofixError",
    "SlackCheck",
    "TraceStep",
    "UnboundedOrbitError",
    "Violation",
    "as_point",
    "build_chain",
    "builtin_problems",
    "cauchy_modulus",
    "check_fatou_sampled",
    "check_modular_axioms",
    "check_s_convexity",
    "compute_alpha",
    "dead_zone",
    "delta2_type_estimate",
    "exact_doubling_constant",
    "f_norm",
    "l1_operator_norm",
    "load_config",
    "modular_dim",
    "modular_fn",
    "node_slacks",
    "orbit_bound_check",
    "picard_solve",
    "power_index",
    "random_affine_contraction",
    "sign_skewed",
    "sine_bump",
    "slack_tol",
    "solve_via_power",
    "verify_contraction",
    "verify_maximum_element",
    "verify_order_pairs",
    "verify_s_contraction",
]
