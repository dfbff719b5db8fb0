"""Verification workbench for fixed-point results on partial b-metric spaces."""

from .contraction import (
    check_banach, check_chatterjea, check_chatterjea_kannan, check_chatterjea_max,
    check_orbit_contraction, check_power_banach, picard_rate,
)
from .errors import (
    AxiomError, DivergenceError, FormatError, GenerationError, ParameterError,
    PBMetricError, PreconditionError, StructuralError,
)
from .maps import SelfMap
from .picard import certify_rate, fixed_points, iterate, iterate_all
from .pproperty import p_property
from .space import (
    FunctionSpace, MetricPair, PartialBMetricSpace, ball, ball_contains,
    equivalence_constants, is_ultra, minimal_coefficient, verify_axioms,
)
from .stability import check_lemma_sequences, run_perturbed, stability_condition
from .transform import (
    build_h_series, build_pprime, check_convergence_transfer, verify_transform_contraction,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomError",
    "DivergenceError",
    "FormatError",
    "FunctionSpace",
    "GenerationError",
    "MetricPair",
    "PBMetricError",
    "ParameterError",
    "PartialBMetricSpace",
    "PreconditionError",
    "SelfMap",
    "StructuralError",
    "ball",
    "ball_contains",
    "build_h_series",
    "build_pprime",
    "certify_rate",
    "check_banach",
    "check_chatterjea",
    "check_chatterjea_kannan",
    "check_chatterjea_max",
    "check_convergence_transfer",
    "check_lemma_sequences",
    "check_orbit_contraction",
    "check_power_banach",
    "equivalence_constants",
    "fixed_points",
    "is_ultra",
    "iterate",
    "iterate_all",
    "minimal_coefficient",
    "p_property",
    "picard_rate",
    "run_perturbed",
    "stability_condition",
    "verify_axioms",
    "verify_transform_contraction",
]
