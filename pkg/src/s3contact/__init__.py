"""Contact angle, adapted frames and curvature identities for surfaces in S^3."""

from s3contact.ambient import (
    covariant_derivative,
    cross4,
    inner,
    j_mul,
    reeb,
    tangent_project,
)
from s3contact.surface import (
    AdaptedFrame,
    GridSpec,
    Jet2,
    SurfacePatch,
    adapted_frame,
    eval_jet,
    frame_field,
    unit_normal,
)
from s3contact import calculus, catalog, identities

__all__ = [
    "AdaptedFrame",
    "GridSpec",
    "Jet2",
    "SurfacePatch",
    "adapted_frame",
    "calculus",
    "catalog",
    "covariant_derivative",
    "cross4",
    "eval_jet",
    "frame_field",
    "identities",
    "inner",
    "j_mul",
    "reeb",
    "tangent_project",
    "unit_normal",
]

__version__ = "0.1.0"
