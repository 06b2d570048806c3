import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from kellermap.errors import DimensionError, NotNilpotentError, PreconditionError
from kellermap.matrix import (
    PolyMatrix,
    RationalMatrix,
    is_nilpotent,
    poly_det,
    poly_matmul,
    rational_kernel,
    rational_rank,
    same_span,
    unipotent_inverse,
)
from kellermap.poly import Polynomial
from kellermap.polymap import jacobian

from conftest import P, pmap, polynomials, small_rationals


def pm(rows, nvars=2):
    return PolyMatrix([[P(str(e), nvars) for e in row] for row in rows])


def leibniz(m):
    """Permutation-sum determinant, the independent oracle."""
    n = len(m.entries)
    total = Polynomial.zero(m[0, 0].nvars)
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = Polynomial.constant(m[0, 0].nvars, -1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term = term * m[i, j]
        total = total + term
    return total


@st.composite
def poly_matrices(draw, size=None, nvars=2, max_degree=2):
    n = size or draw(st.integers(1, 4))
    return PolyMatrix([[draw(polynomials(nvars, max_degree, 3)) for _ in range(n)] for _ in range(n)])


@st.composite
def rational_matrices(draw):
    rows, cols = draw(st.integers(1, 5)), draw(st.integers(1, 5))
    entries = st.one_of(st.just(Fraction(0)), small_rationals)
    return RationalMatrix([[draw(entries) for _ in range(cols)] for _ in range(rows)])


def strictly_upper(rng, n, nvars=2):
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j > i:
                terms = {(rng.randint(0, 2), rng.randint(0, 2)) + (0,) * (nvars - 2): Fraction(rng.randint(-3, 3), rng.randint(1, 2))}
                row.append(Polynomial(nvars, terms))
            else:
                row.append(Polynomial.zero(nvars))
        rows.append(row)
    return PolyMatrix(rows)


# poly_det

def test_det_examples():
    assert poly_det(PolyMatrix.identity(2, 2)) == 1
    assert poly_det(jacobian(pmap("x1 + x2^3", "x2"))) == 1
    assert poly_det(pm([["x1 + x2", "x2^2"], ["x1 + x2", "x2^2"]])).is_zero()


def test_det_non_square():
    with pytest.raises(DimensionError):
        poly_det(PolyMatrix([[P("x1", 1), P("1", 1)]]))


@settings(max_examples=30, deadline=None)
@given(poly_matrices())
def test_det_matches_leibniz(m):
    assert poly_det(m) == leibniz(m)


@settings(max_examples=15, deadline=None)
@given(poly_matrices(size=3))
def test_det_matches_sympy(m):
    x1, x2 = sympy.symbols("x1 x2")
    sm = sympy.Matrix([[sympy.sympify(str(p).replace("^", "**")) for p in row] for row in m.entries])
    expected = sympy.expand(sm.det(method="berkowitz"))
    got = sympy.expand(sympy.sympify(str(poly_det(m)).replace("^", "**")))
    assert sympy.expand(got - expected) == 0


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_det_multiplicative(data):
    n = data.draw(st.integers(1, 3))
    m = data.draw(poly_matrices(size=n))
    k = data.draw(poly_matrices(size=n))
    assert poly_det(m @ k) == poly_det(m) * poly_det(k)


def test_det_agrees_with_rational_det_on_constants():
    rng = random.Random(3)
    for _ in range(20):
        r = RationalMatrix([[rng.randint(-4, 4) for _ in range(4)] for _ in range(4)])
        assert poly_det(PolyMatrix.from_rational(r, 1)) == r.det()
        assert r.det() == Fraction(int(sympy.Matrix(r.entries).det()))


# poly_matmul

def test_matmul_examples():
    m = pm([["x1", "x2^2"], ["1", "x1*x2"]])
    assert poly_matmul(m, PolyMatrix.identity(2, 2)) == m
    n = pm([["0", "x1 + 3"], ["0", "0"]])
    assert poly_matmul(n, n).is_zero()
    diag = PolyMatrix.diagonal([P("x1", 2), P("x2 + 1", 2)])
    a = pm([["1", "2"], ["3", "4"]])
    prod = poly_matmul(diag, a)
    for i, j in itertools.product(range(2), repeat=2):
        assert prod[i, j] == diag[i, i] * a[i, j]


def test_matmul_shape_mismatch():
    with pytest.raises(DimensionError):
        poly_matmul(PolyMatrix.identity(2, 1), PolyMatrix.identity(3, 1))


# nilpotency

def test_nilpotent_examples():
    assert is_nilpotent(pm([["0", "3*x2^2"], ["0", "0"]])) == (True, 2)
    assert is_nilpotent(PolyMatrix.identity(3, 2)) == (False, None)
    assert is_nilpotent(PolyMatrix.zeros(3, 3, 2)) == (True, 1)


def test_nilpotent_witness_is_least_power():
    rng = random.Random(11)
    for _ in range(20):
        m = strictly_upper(rng, 4)
        ok, k = is_nilpotent(m)
        assert ok
        assert m.power(k).is_zero()
        assert k == 1 or not m.power(k - 1).is_zero()


def test_nilpotent_non_square():
    with pytest.raises(DimensionError):
        is_nilpotent(PolyMatrix([[P("x1", 1), P("1", 1)]]))


def test_nilpotent_not_triangular():
    # [[x1, -x1^2], [1, -x1]] squares to zero without being triangular
    m = PolyMatrix([[P("x1", 1), P("-x1^2", 1)], [P("1", 1), P("-x1", 1)]])
    assert is_nilpotent(m) == (True, 2)


def test_nilpotent_implies_unipotent_determinant():
    rng = random.Random(5)
    # t is an extra variable appended after the matrix variables
    for n in (2, 3, 4):
        m = strictly_upper(rng, n, nvars=3)
        perm = list(range(n))
        rng.shuffle(perm)
        m = PolyMatrix([[m[perm[i], perm[j]] for j in range(n)] for i in range(n)])
        assert is_nilpotent(m)[0]
        t = Polynomial.variable(3, 2)
        assert poly_det(PolyMatrix.identity(n, 3) + m.scale(t)) == 1


# unipotent inverse

def test_unipotent_examples():
    assert unipotent_inverse(PolyMatrix.identity(2, 2)) == PolyMatrix.identity(2, 2)
    assert unipotent_inverse(pm([["1", "3*x2^2"], ["0", "1"]])) == pm([["1", "-3*x2^2"], ["0", "1"]])


def test_unipotent_both_sides_random():
    rng = random.Random(9)
    for n in (1, 2, 3, 4, 5):
        for _ in range(5):
            m = PolyMatrix.identity(n, 2) + strictly_upper(rng, n)
            inv = unipotent_inverse(m)
            assert m @ inv == PolyMatrix.identity(n, 2)
            assert inv @ m == PolyMatrix.identity(n, 2)


def test_unipotent_rejects_non_nilpotent():
    with pytest.raises(NotNilpotentError):
        unipotent_inverse(pm([["2", "0"], ["0", "1"]]))


# rational kernel and rank

def test_kernel_examples():
    assert rational_kernel(RationalMatrix([[0, 1], [0, 0]])) == [(1, 0)]
    assert rational_kernel(RationalMatrix.identity(3)) == []
    assert rational_kernel(RationalMatrix.zeros(2, 2)) == [(1, 0), (0, 1)]


def test_rank_examples():
    assert rational_rank(RationalMatrix([[0, 1], [0, 0]])) == 1
    assert rational_rank(RationalMatrix.identity(4)) == 4
    assert rational_rank(RationalMatrix.zeros(3, 2)) == 0


@given(rational_matrices())
def test_rank_nullity(m):
    assert rational_rank(m) + len(rational_kernel(m)) == m.cols


@given(rational_matrices())
def test_kernel_vectors_are_annihilated_and_normalized(m):
    basis = rational_kernel(m)
    _, pivots = m.echelon()
    free = [j for j in range(m.cols) if j not in pivots]
    assert len(basis) == len(free)
    for v, j in zip(basis, free):
        assert not any(m.apply(v))
        assert v[j] == 1
        assert all(v[k] == 0 for k in free if k != j)


@settings(max_examples=30)
@given(rational_matrices())
def test_rank_matches_sympy(m):
    assert rational_rank(m) == sympy.Matrix(m.entries).rank()


@given(rational_matrices())
def test_kernel_reproducible(m):
    again = RationalMatrix.from_text(m.to_text())
    assert rational_kernel(again) == rational_kernel(m)


def test_same_span():
    assert same_span([(1, 1, 0)], [(2, 2, 0)])
    assert not same_span([(1, 0, 0)], [(0, 1, 0)])
    assert same_span([(1, 0), (0, 1)], [(1, 1), (1, -1)])
    assert same_span([], [])


def test_rational_inverse_and_det():
    m = RationalMatrix([[2, 1], [1, 1]])
    assert m @ m.inverse() == RationalMatrix.identity(2)
    with pytest.raises(PreconditionError):
        RationalMatrix([[1, 2], [2, 4]]).inverse()


def test_text_round_trip():
    m = RationalMatrix([[Fraction(1, 2), -3], [0, Fraction(-7, 4)]])
    assert RationalMatrix.from_text(m.to_text()) == m
