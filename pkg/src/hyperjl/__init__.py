"""Dimension reduction and plane embeddings for point sets in hyperbolic space.

Points live in the Poincare half-space model: a pair ``(z, x)`` with height
``z > 0`` and Euclidean coordinates ``x``.
"""

from hyperjl.geometry import (
    HalfSpacePoint,
    PointSet,
    cosh_gap,
    distance,
    fcurve,
    stable_acosh1p,
)
from hyperjl.projection import (
    LinearMap,
    ProjectionError,
    ProjectionSpec,
    RatioReport,
    apply,
    calibrate_noncontracting,
    make_projection,
    project_until_valid,
    target_dim,
    verify_one_sided,
)
from hyperjl.reduction import (
    CertificateError,
    PairRecord,
    ReductionResult,
    certify,
    reduce,
    thm1_upper,
)
from hyperjl.plane import (
    LineEmbedding,
    PlaneEmbeddingResult,
    conservative_separation,
    embed_line,
    embed_plane,
    min_separation,
    required_separation,
    separated_instance,
)
from hyperjl.harness import (
    DistortionReport,
    distortion,
    gen_random,
    gen_separated,
    pairwise_distances,
)

__version__ = "0.1.0"

__all__ = [
    "HalfSpacePoint",
    "PointSet",
    "cosh_gap",
    "distance",
    "fcurve",
    "stable_acosh1p",
    "LinearMap",
    "ProjectionError",
    "ProjectionSpec",
    "RatioReport",
    "apply",
    "calibrate_noncontracting",
    "make_projection",
    "project_until_valid",
    "target_dim",
    "verify_one_sided",
    "CertificateError",
    "PairRecord",
    "ReductionResult",
    "certify",
    "reduce",
    "thm1_upper",
    "LineEmbedding",
    "PlaneEmbeddingResult",
    "conservative_separation",
    "embed_line",
    "embed_plane",
    "min_separation",
    "required_separation",
    "separated_instance",
    "DistortionReport",
    "distortion",
    "gen_random",
    "gen_separated",
    "pairwise_distances",
]
