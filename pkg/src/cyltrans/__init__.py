"""Line transversals for families of pairwise intersecting cylinders."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    GenerationFailed,
    GeometryError,
    GuaranteeNotMet,
    InvariantViolation,
    NotCrossIntersecting,
    NotPairwiseIntersecting,
    NotWellRounded,
    ParallelAxes,
    PerturbationFailed,
)
from .piercing import PiercingSet, piercing_points, verify_piercing  # noqa: E402
from .planar import ConvexPolygon, Slab2, SlabRelation, classify_slab, convex_hull, min_width_slab  # noqa: E402
from .rounded import LineCover, RoundedBody, cover_lines, phi_angle, verify_cover  # noqa: E402
from .solid import Cylinder3, Frame, Line3, crosses, cylinder_width, intersects, line_hits_cylinder, shadow  # noqa: E402
from .transversal import (  # noqa: E402
    Branch,
    Digraph,
    TransversalReport,
    build_digraph,
    perturb_directions,
    solve,
    solve_bipartite,
    verify_report,
)

__all__ = [
    "__version__",
    "GenerationFailed",
    "GeometryError",
    "GuaranteeNotMet",
    "InvariantViolation",
    "NotCrossIntersecting",
    "NotPairwiseIntersecting",
    "NotWellRounded",
    "ParallelAxes",
    "PerturbationFailed",
    "PiercingSet",
    "piercing_points",
    "verify_piercing",
    "ConvexPolygon",
    "Slab2",
    "SlabRelation",
    "classify_slab",
    "convex_hull",
    "min_width_slab",
    "LineCover",
    "RoundedBody",
    "cover_lines",
    "phi_angle",
    "verify_cover",
    "Cylinder3",
    "Frame",
    "Line3",
    "crosses",
    "cylinder_width",
    "intersects",
    "line_hits_cylinder",
    "shadow",
    "Branch",
    "Digraph",
    "TransversalReport",
    "build_digraph",
    "perturb_directions",
    "solve",
    "solve_bipartite",
    "verify_report",
]
