from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qlsat.exactla import (
    DimensionMismatchError,
    Field,
    FieldMismatchError,
    Gauss,
    Matrix,
    Projector,
    ProjectorError,
    Subspace,
    commutes,
    complement_projector,
    contains,
    format_scalar,
    inverse,
    kernel,
    orthocomplement,
    parse_scalar,
    projector_of,
    projector_violation,
    range_of,
    rank,
    rref,
    subspace_intersect,
    subspace_sum,
)

RAT, GAUSS = Field.RAT, Field.GAUSS
small = st.integers(-3, 3)


def rat_matrix(rows, cols):
    return st.lists(st.lists(st.fractions(-4, 4, max_denominator=3), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)


def vectors(d, max_count=3):
    return st.lists(st.lists(small, min_size=d, max_size=d), min_size=0, max_size=max_count)


def span(vecs, d, field=RAT):
    return Subspace.from_vectors(vecs, d, field)


def e(d, *ks):
    v = [0] * d
    for k in ks:
        v[k] = 1
    return v


def to_sympy(m: Matrix):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m.to_rows()])


def to_sympy_gauss(m: Matrix):
    return sympy.Matrix([[sympy.Rational(x.re.numerator, x.re.denominator)
                          + sympy.I * sympy.Rational(x.im.numerator, x.im.denominator) for x in row]
                         for row in m.to_rows()])


# --- scalars ----------------------------------------------------------------


@pytest.mark.parametrize("text, field, canon", [
    ("1/2", RAT, "1/2"),
    ("-4/6", RAT, "-2/3"),
    ("7", RAT, "7"),
    ("0/5", RAT, "0"),
    ("1/2+3/4i", GAUSS, "1/2+3/4i"),
    ("-1-1i", GAUSS, "-1-1i"),
    ("2", GAUSS, "2+0i"),
    ("i", GAUSS, "0+1i"),
    ("-i", GAUSS, "0-1i"),
    ("3i", GAUSS, "0+3i"),
])
def test_scalar_text_round_trip(text, field, canon):
    x = parse_scalar(text, field)
    assert format_scalar(x, field) == canon
    assert parse_scalar(canon, field) == x


@pytest.mark.parametrize("text, field", [("1.5", RAT), ("1/0", RAT), ("abc", RAT), ("1+i", RAT), ("1/2+", GAUSS)])
def test_scalar_parse_rejects(text, field):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_scalar(text, field)


@given(small, small, small, small)
def test_gauss_arithmetic_matches_complex(a, b, c, d):
    x, y = Gauss(a, b), Gauss(c, d)
    for got, want in [(x + y, complex(a, b) + complex(c, d)), (x - y, complex(a, b) - complex(c, d)),
                      (x * y, complex(a, b) * complex(c, d))]:
        assert complex(float(got.re), float(got.im)) == want
    if y:
        q = x / y
        assert q * y == x
    assert x.conjugate() == Gauss(a, -b)


# --- matrices ---------------------------------------------------------------


@given(rat_matrix(2, 3), rat_matrix(3, 2))
def test_matmul_and_add_match_sympy(a, b):
    A, B = Matrix.from_rows(a), Matrix.from_rows(b)
    assert to_sympy(A @ B) == to_sympy(A) * to_sympy(B)
    assert to_sympy(A + B.T) == to_sympy(A) + to_sympy(B).T
    assert to_sympy(A - A) == sympy.zeros(2, 3)


def test_matrix_basics():
    m = Matrix.from_rows([[1, 2], [3, 4]])
    assert m.shape == (2, 2) and m.entry(1, 0) == 3
    assert m.T.to_rows() == [[1, 3], [2, 4]]
    assert (m @ Matrix.identity(2)) == m
    assert Matrix.zeros(2, 0) @ Matrix.zeros(0, 3) == Matrix.zeros(2, 3)
    assert m.scale(Fraction(1, 2)).to_text_rows() == [["1/2", "1"], ["3/2", "2"]]
    with pytest.raises(DimensionMismatchError):
        m @ Matrix.zeros(3, 1)
    with pytest.raises(FieldMismatchError):
        m + Matrix.identity(2, GAUSS)


def test_equal_matrices_have_one_representation():
    a = Matrix.from_rows([[Fraction(2, 4), 1]])
    b = Matrix.from_rows([[Fraction(1, 2), Fraction(3, 3)]])
    assert a == b and hash(a) == hash(b)


def test_conjugate_transpose_gauss():
    m = Matrix.from_rows([[Gauss(1, 2), Gauss(0, 1)]], GAUSS)
    assert m.H.to_rows() == [[Gauss(1, -2)], [Gauss(0, -1)]]


# --- rref, kernel, inverse ----------------------------------------------------


def test_rref_examples():
    assert rref(Matrix.identity(3)) == Matrix.identity(3)
    assert rref(Matrix.from_rows([[2, 4], [1, 2]])).to_rows() == [[1, 2], [0, 0]]


@settings(max_examples=60)
@given(rat_matrix(4, 4))
def test_rref_matches_sympy(a):
    M = Matrix.from_rows(a)
    R_sym, _ = to_sympy(M).rref()
    assert to_sympy(rref(M)) == R_sym
    assert rank(M) == to_sympy(M).rank()


@settings(max_examples=40)
@given(st.lists(st.lists(st.tuples(small, small), min_size=3, max_size=3), min_size=3, max_size=3))
def test_gauss_rref_matches_sympy(a):
    M = Matrix.from_rows([[Gauss(x, y) for x, y in row] for row in a], GAUSS)
    R_sym, _ = to_sympy_gauss(M).rref(simplify=True)
    assert (to_sympy_gauss(rref(M)) - R_sym).applyfunc(sympy.nsimplify) == sympy.zeros(3, 3)


@given(rat_matrix(3, 4))
def test_kernel_is_annihilated_and_full(a):
    M = Matrix.from_rows(a)
    K = kernel(M)
    assert K.cols == 4 - rank(M)
    assert (M @ K).is_zero()
    assert rank(K) == K.cols


@given(rat_matrix(3, 3))
def test_inverse(a):
    M = Matrix.from_rows(a)
    if rank(M) < 3:
        with pytest.raises(ZeroDivisionError):
            inverse(M)
    else:
        assert M @ inverse(M) == Matrix.identity(3)


# --- subspaces ----------------------------------------------------------------


def test_lattice_examples_from_the_sep1_witness():
    d = 2
    P, Q, R = span([e(d, 0, 1)], d), span([e(d, 0)], d), span([e(d, 1)], d)
    assert subspace_sum(Q, R) == Subspace.full(d)
    assert subspace_intersect(P, Q).is_zero()
    assert subspace_intersect(P, subspace_sum(Q, R)) == P
    assert orthocomplement(subspace_sum(subspace_intersect(P, Q), subspace_intersect(P, R))) == Subspace.full(d)


def test_subspace_examples():
    A = span([[1, 2, 0]], 3)
    assert subspace_sum(A, Subspace.zero(3)) == A
    assert subspace_sum(A, A) == A
    assert subspace_intersect(A, Subspace.full(3)) == A
    assert orthocomplement(Subspace.zero(3)) == Subspace.full(3)
    assert orthocomplement(span([e(2, 0)], 2)) == span([e(2, 1)], 2)
    assert str(Subspace.zero(2)) == "{0}"
    assert str(span([[2, 2]], 2)) == "span((1, 1))"


@given(vectors(3), st.integers(1, 5))
def test_canonical_basis_is_unique(u, k):
    a = span(u, 3)
    assert span(list(reversed(u)) + u, 3) == a
    assert span([[k * x for x in v] for v in u], 3) == a
    assert a.dim == rank(Matrix.from_columns(u, rows=3))


@given(vectors(4), vectors(4))
def test_modular_dimension_law(u, v):
    a, b = span(u, 4), span(v, 4)
    assert subspace_sum(a, b).dim + subspace_intersect(a, b).dim == a.dim + b.dim
    assert contains(subspace_sum(a, b), a) and contains(a, subspace_intersect(a, b))


@given(vectors(4))
def test_orthocomplement_laws(u):
    a = span(u, 4)
    perp = orthocomplement(a)
    assert orthocomplement(perp) == a
    assert subspace_intersect(a, perp).is_zero()
    assert subspace_sum(a, perp) == Subspace.full(4)
    for x in a.vectors():
        for y in perp.vectors():
            assert sum(p * q for p, q in zip(x, y)) == 0


@given(vectors(3), vectors(3), vectors(3))
def test_orthomodular_law(u, v, w):
    # a <= b implies b = a + (b meet a-perp)
    a = span(u, 3)
    b = subspace_sum(a, span(v, 3))
    assert subspace_sum(a, subspace_intersect(b, orthocomplement(a))) == b


def test_lattice_is_not_distributive():
    P, Q, R = span([[1, 1]], 2), span([[1, 0]], 2), span([[0, 1]], 2)
    lhs = subspace_intersect(P, subspace_sum(Q, R))
    rhs = subspace_sum(subspace_intersect(P, Q), subspace_intersect(P, R))
    assert lhs != rhs


def test_gauss_orthocomplement_uses_hermitian_product():
    a = span([[Gauss(1), Gauss(0, 1)]], 2, GAUSS)
    perp = orthocomplement(a)
    assert perp == span([[Gauss(1), Gauss(0, -1)]], 2, GAUSS)
    assert orthocomplement(perp) == a


def test_ambient_mismatch():
    with pytest.raises(DimensionMismatchError):
        subspace_sum(Subspace.full(2), Subspace.full(3))


# --- projectors -----------------------------------------------------------------


def test_projector_examples():
    assert projector_of(span([e(2, 0)], 2)).matrix.to_rows() == [[1, 0], [0, 0]]
    half = Fraction(1, 2)
    assert projector_of(span([e(2, 0, 1)], 2)).matrix.to_rows() == [[half, half], [half, half]]
    assert projector_of(Subspace.full(3)).matrix == Matrix.identity(3)
    assert range_of(Matrix.from_rows([[1, 0], [0, 0]])) == span([e(2, 0)], 2)
    assert range_of(Matrix.from_rows([[half, half], [half, half]])) == span([e(2, 0, 1)], 2)
    assert range_of(Matrix.zeros(2, 2)).is_zero()


def test_commutation_examples():
    d10 = Projector(Matrix.from_rows([[1, 0], [0, 0]]))
    d01 = Projector(Matrix.from_rows([[0, 0], [0, 1]]))
    p = projector_of(span([[1, 1]], 2))
    assert commutes(d10, d01)
    assert not commutes(p, d10)
    assert commutes(p, complement_projector(p))


def test_projector_validation_names_the_invariant():
    assert projector_violation(Matrix.from_rows([[1, 1], [0, 0]])) == "not self-adjoint"
    assert projector_violation(Matrix.from_rows([[2, 0], [0, 0]])) == "not idempotent"
    assert projector_violation(Matrix.zeros(2, 3)).startswith("not square")
    with pytest.raises(ProjectorError):
        Projector(Matrix.from_rows([[2, 0], [0, 0]]))


@settings(max_examples=50)
@given(vectors(3))
def test_projector_range_bijection(u):
    a = span(u, 3)
    p = projector_of(a)
    assert projector_violation(p.matrix) is None
    assert range_of(p) == a
    assert range_of(complement_projector(p)) == orthocomplement(a)


@settings(max_examples=30)
@given(st.lists(st.lists(st.tuples(small, small), min_size=3, max_size=3), min_size=1, max_size=2))
def test_gauss_projectors(u):
    a = span([[Gauss(x, y) for x, y in v] for v in u], 3, GAUSS)
    p = projector_of(a)
    assert projector_violation(p.matrix) is None
    assert range_of(p) == a
