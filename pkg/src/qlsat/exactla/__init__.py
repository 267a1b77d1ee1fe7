"""Exact linear algebra over Q and Q(i): matrices, subspaces and orthogonal projectors."""

from .linalg import inverse, kernel, rank, rref, rref_with_pivots
from .matrix import DimensionMismatchError, Matrix, identity, zeros
from .scalar import Field, FieldMismatchError, Gauss, Scalar, conj, format_scalar, parse_scalar
from .subspace import (
    Projector,
    ProjectorError,
    Subspace,
    commutes,
    complement_projector,
    contains,
    orthocomplement,
    projector_of,
    projector_violation,
    range_of,
    subspace_intersect,
    subspace_sum,
)

__all__ = [
    "DimensionMismatchError",
    "Field",
    "FieldMismatchError",
    "Gauss",
    "Matrix",
    "Projector",
    "ProjectorError",
    "Scalar",
    "Subspace",
    "commutes",
    "complement_projector",
    "conj",
    "contains",
    "format_scalar",
    "identity",
    "inverse",
    "kernel",
    "orthocomplement",
    "parse_scalar",
    "projector_of",
    "projector_violation",
    "range_of",
    "rank",
    "rref",
    "rref_with_pivots",
    "subspace_intersect",
    "subspace_sum",
    "zeros",
]
