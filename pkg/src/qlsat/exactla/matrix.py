"""Exact dense matrices over Q and Q(i).

Entries are stored as integer numerators over one shared positive
denominator, reduced so the gcd of all numerators and the denominator is 1.
That makes the representation canonical: two matrices are equal exactly when
their dataclass fields are equal. A GAUSS matrix keeps separate real and
imaginary numerator grids.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from operator import mul
from typing import Iterable, Optional, Sequence

from .scalar import Field, FieldMismatchError, Gauss, Scalar, coerce, format_scalar

Grid = tuple[tuple[int, ...], ...]


class DimensionMismatchError(ValueError):
    pass


def _grid_gcd(g: Grid, acc: int) -> int:
    for row in g:
        acc = gcd(acc, *row)
        if acc == 1:
            break
    return acc


def _div_grid(g: Grid, k: int) -> Grid:
    return tuple(tuple(x // k for x in row) for row in g)


def _zeros(rows: int, cols: int) -> Grid:
    return tuple((0,) * cols for _ in range(rows))


def _matmul(a: Grid, b: Grid, ncols: int) -> Grid:
    if not b:
        return _zeros(len(a), ncols)
    cols = tuple(zip(*b))
    return tuple(tuple(sum(map(mul, row, col)) for col in cols) for row in a)


def _add(a: Grid, b: Grid, sa: int = 1, sb: int = 1) -> Grid:
    return tuple(tuple(sa * x + sb * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _transpose(g: Grid, cols: int) -> Grid:
    if not g:
        return _zeros(cols, 0)
    return tuple(zip(*g))


@dataclass(frozen=True, slots=True)
class Matrix:
    rows: int
    cols: int
    field: Field
    re: Grid
    im: Optional[Grid]
    den: int

    @staticmethod
    def _make(rows: int, cols: int, field: Field, re: Grid, im: Optional[Grid], den: int) -> Matrix:
        if den < 0:
            re = tuple(tuple(-x for x in r) for r in re)
            if im is not None:
                im = tuple(tuple(-x for x in r) for r in im)
            den = -den
        g = _grid_gcd(re, den)
        if im is not None and g != 1:
            g = _grid_gcd(im, g)
        if g != 1:
            re = _div_grid(re, g)
            if im is not None:
                im = _div_grid(im, g)
            den //= g
        return Matrix(rows, cols, field, re, im, den)

    # --- construction ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], field: Field | str = Field.RAT,
                  cols: int | None = None) -> Matrix:
        """Build from nested entries (ints, Fractions, Gauss, or scalar text)."""
        field = Field(field)
        vals = [[coerce(x, field) for x in r] for r in rows]
        n = len(vals)
        m = len(vals[0]) if vals else (cols or 0)
        if any(len(r) != m for r in vals):
            raise DimensionMismatchError("ragged rows")
        if field is Field.RAT:
            den = lcm(1, *(x.denominator for r in vals for x in r))
            re = tuple(tuple(x.numerator * (den // x.denominator) for x in r) for r in vals)
            return cls._make(n, m, field, re, None, den)
        den = lcm(1, *(q.denominator for r in vals for x in r for q in (x.re, x.im)))
        re = tuple(tuple(x.re.numerator * (den // x.re.denominator) for x in r) for r in vals)
        im = tuple(tuple(x.im.numerator * (den // x.im.denominator) for x in r) for r in vals)
        return cls._make(n, m, field, re, im, den)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], field: Field | str = Field.RAT,
                     rows: int | None = None) -> Matrix:
        if not columns:
            return cls.zeros(rows or 0, 0, field)
        return cls.from_rows(list(zip(*columns)), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field | str = Field.RAT) -> Matrix:
        field = Field(field)
        z = _zeros(rows, cols)
        return cls(rows, cols, field, z, z if field is Field.GAUSS else None, 1)

    @classmethod
    def identity(cls, n: int, field: Field | str = Field.RAT) -> Matrix:
        field = Field(field)
        re = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return cls(n, n, field, re, _zeros(n, n) if field is Field.GAUSS else None, 1)

    # --- access ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def entry(self, i: int, j: int) -> Scalar:
        r = Fraction(self.re[i][j], self.den)
        if self.im is None:
            return r
        return Gauss(r, Fraction(self.im[i][j], self.den))

    def to_rows(self) -> list[list[Scalar]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def column(self, j: int) -> list[Scalar]:
        return [self.entry(i, j) for i in range(self.rows)]

    def columns(self) -> list[list[Scalar]]:
        return [self.column(j) for j in range(self.cols)]

    def to_text_rows(self) -> list[list[str]]:
        return [[format_scalar(x, self.field) for x in row] for row in self.to_rows()]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.re) and not (self.im and any(any(r) for r in self.im))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(r) + "]" for r in self.to_text_rows()) or "[]"

    # --- arithmetic --------------------------------------------------------

    def _check_field(self, other: Matrix) -> None:
        if self.field is not other.field:
            raise FieldMismatchError(f"{self.field.value} vs {other.field.value}")

    def _check_same_shape(self, other: Matrix) -> None:
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"{self.shape} vs {other.shape}")

    def _lift(self, other: Matrix) -> tuple[Grid, Optional[Grid], Grid, Optional[Grid], int]:
        """Both operands over the common denominator lcm(den, other.den)."""
        den = lcm(self.den, other.den)
        fa, fb = den // self.den, den // other.den

        def scale(g: Optional[Grid], k: int) -> Optional[Grid]:
            if g is None or k == 1:
                return g
            return tuple(tuple(k * x for x in r) for r in g)

        return scale(self.re, fa), scale(self.im, fa), scale(other.re, fb), scale(other.im, fb), den

    def __add__(self, other: Matrix) -> Matrix:
        return self._combine(other, 1)

    def __sub__(self, other: Matrix) -> Matrix:
        return self._combine(other, -1)

    def _combine(self, other: Matrix, sign: int) -> Matrix:
        self._check_same_shape(other)
        ar, ai, br, bi, den = self._lift(other)
        re = _add(ar, br, 1, sign)
        im = _add(ai, bi, 1, sign) if ai is not None else None
        return Matrix._make(self.rows, self.cols, self.field, re, im, den)

    def __neg__(self) -> Matrix:
        return Matrix._make(self.rows, self.cols, self.field, self.re, self.im, -self.den)

    def __matmul__(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        den = self.den * other.den
        if self.im is None:
            return Matrix._make(self.rows, other.cols, self.field, _matmul(self.re, other.re, other.cols), None, den)
        rr = _matmul(self.re, other.re, other.cols)
        ii = _matmul(self.im, other.im, other.cols)
        ri = _matmul(self.re, other.im, other.cols)
        ir = _matmul(self.im, other.re, other.cols)
        return Matrix._make(self.rows, other.cols, self.field, _add(rr, ii, 1, -1), _add(ri, ir), den)

    def scale(self, c: object) -> Matrix:
        c = coerce(c, self.field)
        if self.field is Field.RAT:
            re = tuple(tuple(c.numerator * x for x in r) for r in self.re)
            return Matrix._make(self.rows, self.cols, self.field, re, None, self.den * c.denominator)
        den = lcm(c.re.denominator, c.im.denominator)
        a, b = c.re.numerator * (den // c.re.denominator), c.im.numerator * (den // c.im.denominator)
        re = _add(self.re, self.im, a, -b)
        im = _add(self.re, self.im, b, a)
        return Matrix._make(self.rows, self.cols, self.field, re, im, self.den * den)

    @property
    def T(self) -> Matrix:
        im = _transpose(self.im, self.cols) if self.im is not None else None
        return Matrix(self.cols, self.rows, self.field, _transpose(self.re, self.cols), im, self.den)

    @property
    def H(self) -> Matrix:
        """Conjugate transpose."""
        if self.im is None:
            return self.T
        im = tuple(tuple(-x for x in r) for r in _transpose(self.im, self.cols))
        return Matrix(self.cols, self.rows, self.field, _transpose(self.re, self.cols), im, self.den)

    def conj(self) -> Matrix:
        if self.im is None:
            return self
        return Matrix(self.rows, self.cols, self.field, self.re,
                      tuple(tuple(-x for x in r) for r in self.im), self.den)

    def hstack(self, other: Matrix) -> Matrix:
        self._check_field(other)
        if self.rows != other.rows:
            raise DimensionMismatchError(f"row counts {self.rows} vs {other.rows}")
        ar, ai, br, bi, den = self._lift(other)
        re = tuple(x + y for x, y in zip(ar, br))
        im = None if ai is None else tuple(x + y for x, y in zip(ai, bi))
        return Matrix._make(self.rows, self.cols + other.cols, self.field, re, im, den)

    def take_rows(self, k: int) -> Matrix:
        im = self.im[:k] if self.im is not None else None
        return Matrix._make(k, self.cols, self.field, self.re[:k], im, self.den)

    def select_columns(self, idx: Iterable[int]) -> Matrix:
        idx = list(idx)
        re = tuple(tuple(r[j] for j in idx) for r in self.re)
        im = tuple(tuple(r[j] for j in idx) for r in self.im) if self.im is not None else None
        return Matrix._make(self.rows, len(idx), self.field, re, im, self.den)

    def to_field(self, field: Field | str) -> Matrix:
        field = Field(field)
        if field is self.field:
            return self
        if field is Field.GAUSS:
            return Matrix(self.rows, self.cols, field, self.re, _zeros(self.rows, self.cols), self.den)
        if self.im is not None and any(any(r) for r in self.im):
            raise FieldMismatchError("matrix has non-real entries")
        return Matrix(self.rows, self.cols, field, self.re, None, self.den)


def identity(n: int, field: Field | str = Field.RAT) -> Matrix:
    return Matrix.identity(n, field)


def zeros(rows: int, cols: int, field: Field | str = Field.RAT) -> Matrix:
    return Matrix.zeros(rows, cols, field)
