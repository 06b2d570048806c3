from fractions import Fraction

import pytest
from hypothesis import strategies as st

from kellermap.poly import Polynomial, parse_polynomial
from kellermap.polymap import PolyMap

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, nvars=3, max_degree=3, max_terms=5):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_degree)] * nvars).filter(lambda m: sum(m) <= max_degree),
        small_rationals, max_size=max_terms))
    return Polynomial(nvars, terms)


@st.composite
def homogeneous_polynomials(draw, nvars=3, degree=3, max_terms=4):
    p = draw(polynomials(nvars, degree, max_terms))
    return p.homogeneous_component(degree)


def P(text, nvars):
    return parse_polynomial(text, nvars)


def pmap(*components):
    n = len(components)
    return PolyMap([parse_polynomial(c, n) for c in components])


@pytest.fixture
def classic():
    """(x1 + x2^3, x2) and its inverse."""
    return pmap("x1 + x2^3", "x2"), pmap("x1 - x2^3", "x2")


@pytest.fixture
def tight3():
    return pmap("x1 + x2^3 + 3*x2^2*x3 + 3*x2*x3^2 + x3^3", "x2 + x3^3", "x3")


def frac_point(*vals):
    return tuple(Fraction(v) for v in vals)
