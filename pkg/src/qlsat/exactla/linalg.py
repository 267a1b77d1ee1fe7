"""Row reduction, kernels and inverses for exact matrices."""

from __future__ import annotations

from math import gcd, lcm

from .matrix import DimensionMismatchError, Matrix
from .scalar import Field, Gauss


def _rref_int(grid: tuple[tuple[int, ...], ...], rows: int, cols: int) -> tuple[list[list[int]], list[int]]:
    # Fraction-free Gauss-Jordan; each row is kept primitive to bound growth.
    m = [list(r) for r in grid]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        g = gcd(*pr)
        if g > 1:
            pr = m[r] = [x // g for x in pr]
        a = pr[c]
        for i in range(rows):
            b = m[i][c]
            if i != r and b:
                row = [a * x - b * y for x, y in zip(m[i], pr)]
                g = gcd(*row)
                m[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
    return m, pivots


def _rref_gauss(M: Matrix) -> tuple[list[list[Gauss]], list[int]]:
    m = M.to_rows()
    rows, cols = M.rows, M.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = Gauss(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            b = m[i][c]
            if i != r and b:
                m[i] = [x - b * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rref_with_pivots(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row-echelon form and pivot columns. Pivots are 1, rank = len(pivots)."""
    if M.field is Field.GAUSS:
        rows, pivots = _rref_gauss(M)
        return Matrix.from_rows(rows, Field.GAUSS, cols=M.cols), tuple(pivots)
    m, pivots = _rref_int(M.re, M.rows, M.cols)
    den = lcm(1, *(abs(m[i][c]) for i, c in enumerate(pivots)))
    re = []
    for i, row in enumerate(m):
        if i < len(pivots):
            p = row[pivots[i]]
            f = den // p if p > 0 else -(den // -p)
            re.append(tuple(f * x for x in row))
        else:
            re.append((0,) * M.cols)
    return Matrix._make(M.rows, M.cols, Field.RAT, tuple(re), None, den), tuple(pivots)


def rref(M: Matrix) -> Matrix:
    """Reduced row-echelon form over the exact field of ``M``.

    >>> print(rref(Matrix.from_rows([[2, 4], [1, 2]])))
    [1, 2]
    [0, 0]
    """
    return rref_with_pivots(M)[0]


def rank(M: Matrix) -> int:
    return len(rref_with_pivots(M)[1])


def kernel(M: Matrix) -> Matrix:
    """Columns form a basis of {x : Mx = 0}; shape is cols x nullity."""
    R, pivots = rref_with_pivots(M)
    n = M.cols
    free = [j for j in range(n) if j not in pivots]
    entries = R.to_rows()
    zero = Gauss(0) if M.field is Field.GAUSS else 0
    one = Gauss(1) if M.field is Field.GAUSS else 1
    vectors = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -entries[i][f]
        vectors.append(v)
    return Matrix.from_columns(vectors, M.field, rows=n)


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise DimensionMismatchError(f"cannot invert a {M.rows}x{M.cols} matrix")
    n = M.rows
    R, pivots = rref_with_pivots(M.hstack(Matrix.identity(n, M.field)))
    if pivots != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R.select_columns(range(n, 2 * n))
