"""Subspaces of F^d, orthogonal projectors, and the lattice operations on them."""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from functools import lru_cache

from .linalg import inverse, kernel, rref_with_pivots
from .matrix import DimensionMismatchError, Matrix
from .scalar import Field


class ProjectorError(ValueError):
    """A matrix claimed to be an orthogonal projector is not one."""


@dataclass(frozen=True, slots=True)
class Subspace:
    """A subspace held by its canonical basis.

    The basis columns are the nonzero rows of ``rref(B.T)`` for any spanning
    matrix ``B``, so equal subspaces have identical fields. Build instances
    with :meth:`span`, :meth:`zero` or :meth:`full`.
    """

    ambient: int
    basis: Matrix

    @classmethod
    def span(cls, vectors: Matrix) -> Subspace:
        """Column space of ``vectors`` (an ambient x k matrix)."""
        return _canonical(vectors)

    @classmethod
    def from_vectors(cls, vectors, ambient: int, field: Field | str = Field.RAT) -> Subspace:
        return _canonical(Matrix.from_columns(list(vectors), field, rows=ambient))

    @classmethod
    def zero(cls, ambient: int, field: Field | str = Field.RAT) -> Subspace:
        return cls(ambient, Matrix.zeros(ambient, 0, field))

    @classmethod
    def full(cls, ambient: int, field: Field | str = Field.RAT) -> Subspace:
        return cls(ambient, Matrix.identity(ambient, field))

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def field(self) -> Field:
        return self.basis.field

    def vectors(self) -> list[list]:
        return self.basis.columns()

    def is_zero(self) -> bool:
        return self.dim == 0

    def __str__(self) -> str:
        if self.dim == 0:
            return "{0}"
        return "span(" + ", ".join("(" + ", ".join(c) + ")" for c in _text_columns(self.basis)) + ")"


def _text_columns(m: Matrix) -> list[list[str]]:
    rows = m.to_text_rows()
    return [[rows[i][j] for i in range(m.rows)] for j in range(m.cols)]


@lru_cache(maxsize=1 << 14)
def _canonical(vectors: Matrix) -> Subspace:
    R, pivots = rref_with_pivots(vectors.T)
    return Subspace(vectors.rows, R.take_rows(len(pivots)).T)


def _check_pair(a: Subspace, b: Subspace) -> None:
    if a.ambient != b.ambient:
        raise DimensionMismatchError(f"ambient dimensions {a.ambient} vs {b.ambient}")


@lru_cache(maxsize=1 << 14)
def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_pair(a, b)
    return Subspace.span(a.basis.hstack(b.basis))


@lru_cache(maxsize=1 << 14)
def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the kernel of [A | -B]: Ax = By gives the common vectors Ax."""
    _check_pair(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient, a.field)
    k = kernel(a.basis.hstack(-b.basis))
    return Subspace.span(a.basis @ k.take_rows(a.dim))


@lru_cache(maxsize=1 << 14)
def orthocomplement(a: Subspace) -> Subspace:
    """{x : <b, x> = 0 for every basis vector b}, with <u, v> = u* v."""
    if a.dim == 0:
        return Subspace.full(a.ambient, a.field)
    return Subspace.span(kernel(a.basis.H))


def contains(a: Subspace, b: Subspace) -> bool:
    """True if ``b`` is a subspace of ``a``."""
    return subspace_sum(a, b) == a


@dataclass(frozen=True, slots=True)
class Projector:
    """A self-adjoint idempotent square matrix; checked on construction unless ``check=False``."""

    matrix: Matrix
    check: InitVar[bool] = True

    def __post_init__(self, check: bool) -> None:
        if check:
            problem = projector_violation(self.matrix)
            if problem:
                raise ProjectorError(problem)

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @property
    def field(self) -> Field:
        return self.matrix.field

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __str__(self) -> str:
        return str(self.matrix)


@lru_cache(maxsize=1 << 16)
def projector_violation(m: Matrix) -> str | None:
    """Name the first failed projector invariant of ``m``, or None."""
    if not m.is_square():
        return f"not square ({m.rows}x{m.cols})"
    if m.H != m:
        return "not self-adjoint"
    if m @ m != m:
        return "not idempotent"
    return None


@lru_cache(maxsize=1 << 14)
def projector_of(a: Subspace) -> Projector:
    """The orthogonal projector B (B*B)^-1 B* onto ``a``."""
    if a.dim == 0:
        return Projector(Matrix.zeros(a.ambient, a.ambient, a.field), check=False)
    b = a.basis
    return Projector(b @ inverse(b.H @ b) @ b.H, check=False)


@lru_cache(maxsize=1 << 14)
def range_of(p: Projector | Matrix) -> Subspace:
    m = p.matrix if isinstance(p, Projector) else p
    return Subspace.span(m)


def commutes(p: Projector | Matrix, q: Projector | Matrix) -> bool:
    a = p.matrix if isinstance(p, Projector) else p
    b = q.matrix if isinstance(q, Projector) else q
    return _commutes(a, b)


@lru_cache(maxsize=1 << 16)
def _commutes(a: Matrix, b: Matrix) -> bool:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"{a.shape} vs {b.shape}")
    return a @ b == b @ a


def complement_projector(p: Projector) -> Projector:
    return Projector(Matrix.identity(p.dim, p.field) - p.matrix, check=False)
