"""Domain-aware quantum uncertainty relations on 1-D grids."""

__version__ = "0.1.0"

from .config import Config  # noqa: E402
from .errors import (  # noqa: E402
    DegenerateStateError,
    InapplicableError,
    NotNormalizedError,
    OracleCapExceeded,
    SpecParseError,
    StructuralError,
)
from .grid import GridTopology, WaveFunction, inner_product, norm, normalize, refine  # noqa: E402
from .operators import (  # noqa: E402
    DomainReport,
    OperatorSpec,
    angle,
    angular_momentum,
    apply,
    composite_domain_check,
    dense,
    domain_check,
    momentum,
    multiply,
    position,
)
from .relations import (  # noqa: E402
    RelationReport,
    evaluate_commutator_form,
    evaluate_modified,
    phi_Lz_bound,
    quadratic_form_check,
    xp_boundary_term,
)
from .states import StateRecipe, parse_state_spec, realize, sweep  # noqa: E402
from .stats import (  # noqa: E402
    StatReport,
    commutator_expectation,
    covariance,
    expectation,
    imag_cross,
    stat_report,
    uncertainty,
)

__all__ = [
    "Config", "DegenerateStateError", "InapplicableError", "NotNormalizedError", "OracleCapExceeded",
    "SpecParseError", "StructuralError", "GridTopology", "WaveFunction", "inner_product", "norm",
    "normalize", "refine", "DomainReport", "OperatorSpec", "angle", "angular_momentum", "apply",
    "composite_domain_check", "dense", "domain_check", "momentum", "multiply", "position",
    "RelationReport", "evaluate_commutator_form", "evaluate_modified", "phi_Lz_bound",
    "quadratic_form_check", "xp_boundary_term", "StateRecipe", "parse_state_spec", "realize", "sweep",
    "StatReport", "commutator_expectation", "covariance", "expectation", "imag_cross", "stat_report",
    "uncertainty",
]
