"""Exact-arithmetic toolkit for deformed box sets, deformed Stanley-Reisner
cohomology, deformed Grothendieck-ring spectra, and Gamma-series solutions of
better-behaved GKZ systems on simplicial stacky fans."""

from .linalg import (
    Fraction,
    GaussianRational,
    format_gaussian,
    format_rational,
    parse_gaussian,
    parse_rational,
)
from .fan import (
    StackyFan,
    ValidationReport,
    normalized_volume,
    triangulate_from_heights,
    validate,
)
from .box import (
    BoxElement,
    CollisionClass,
    DeltaCorrespondence,
    box_of_cone,
    box_of_fan,
    collisions,
    correspondence_at,
    normalize_beta,
    stabilize,
)
from .quotient import (
    ModuleSpec,
    QuotientAlgebra,
    build_quotient,
    graded_piece,
    module_product,
    verify_def2_isomorphism,
)
from .kring import KPoint, WallRecord, is_semisimple, spectrum, wall_report
from .gkz import (
    GkzInstance,
    SeriesValue,
    SolutionSystem,
    build_gkz,
    enumerate_L,
    gamma_series,
    gamma_series_derivative,
    reciprocal_gamma_jet,
    solution_system,
    suggest_x,
    verify_euler,
    verify_term_shift,
)

__all__ = [
    "Fraction",
    "GaussianRational",
    "format_gaussian",
    "format_rational",
    "parse_gaussian",
    "parse_rational",
    "StackyFan",
    "ValidationReport",
    "normalized_volume",
    "validate",
    "triangulate_from_heights",
    "BoxElement",
    "CollisionClass",
    "DeltaCorrespondence",
    "box_of_cone",
    "box_of_fan",
    "collisions",
    "correspondence_at",
    "normalize_beta",
    "stabilize",
    "ModuleSpec",
    "QuotientAlgebra",
    "build_quotient",
    "graded_piece",
    "module_product",
    "verify_def2_isomorphism",
    "KPoint",
    "WallRecord",
    "spectrum",
    "wall_report",
    "is_semisimple",
    "GkzInstance",
    "SeriesValue",
    "SolutionSystem",
    "build_gkz",
    "enumerate_L",
    "gamma_series",
    "gamma_series_derivative",
    "reciprocal_gamma_jet",
    "solution_system",
    "suggest_x",
    "verify_euler",
    "verify_term_shift",
]

__version__ = "0.1.0"
