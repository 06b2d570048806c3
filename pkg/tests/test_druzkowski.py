import random
from fractions import Fraction

import pytest

from kellermap.druzkowski import (
    GENERATORS,
    DruzkowskiSpec,
    corpus,
    expand,
    gen_random_druzkowski,
    gen_triangular_druzkowski,
    gen_triangular_keller,
    homogeneous_slice,
    keller_facts_check,
    kernel_equality_check,
    linear_forms,
    structural_jacobian,
)
from kellermap.errors import ParseError, PreconditionError
from kellermap.matrix import PolyMatrix, RationalMatrix
from kellermap.poly import Polynomial
from kellermap.polymap import PolyMap, degree_bound_report, is_keller, jacobian

from conftest import P, pmap


def spec(rows, d):
    return DruzkowskiSpec(RationalMatrix(rows), d)


def test_expand_examples():
    assert expand(spec([[0, 1], [0, 0]], 3)) == pmap("x1 + x2^3", "x2")
    assert expand(spec([[0, 0], [0, 0]], 2)) == PolyMap.identity(2)
    x = Polynomial.variables(3)
    expected = PolyMap([x[0] + (x[1] + x[2]).pow(3), x[1] + x[2].pow(3), x[2]])
    assert expand(spec([[0, 1, 1], [0, 0, 1], [0, 0, 0]], 3)) == expected


def test_expand_components_are_powers_of_linear_forms():
    for s in range(20):
        sp = gen_random_druzkowski(3, 3, s)
        h = expand(sp).higher_part()
        for hi, form in zip(h, linear_forms(sp.matrix)):
            assert hi == form.pow(3)
            assert hi.is_zero() or hi.is_homogeneous()


def test_structural_jacobian_examples():
    assert structural_jacobian(spec([[0, 1], [0, 0]], 3)) == PolyMatrix(
        [[Polynomial.zero(2), P("3*x2^2", 2)], [Polynomial.zero(2), Polynomial.zero(2)]])
    assert structural_jacobian(spec([[0, 0], [0, 0]], 3)).is_zero()


def test_structural_jacobian_identity_on_random_specs():
    for s in range(60):
        n, d = 1 + s % 4, 2 + s % 3
        sp = gen_random_druzkowski(n, d, s)
        assert structural_jacobian(sp) + PolyMatrix.identity(n, n) == jacobian(expand(sp))


def test_kernel_equality_examples():
    assert kernel_equality_check(spec([[0, 1], [0, 0]], 3))
    assert kernel_equality_check(spec([[0, 0], [0, 0]], 3))
    assert kernel_equality_check(spec([[1, 0], [0, 1]], 2))


def test_kernel_equality_on_random_specs():
    rng = random.Random(0)
    for s in range(100):
        n, d = rng.randint(1, 4), rng.randint(2, 3)
        sp = gen_random_druzkowski(n, d, s) if s % 3 else gen_triangular_druzkowski(n, d, s)
        assert kernel_equality_check(sp)


def test_kernel_equality_with_rational_entries():
    sp = spec([[Fraction(1, 2), 1, 0], [1, 2, 0], [0, 0, Fraction(-3, 7)]], 3)
    assert kernel_equality_check(sp)


def test_keller_facts_examples():
    facts = keller_facts_check(spec([[0, 2, -1], [0, 0, 3], [0, 0, 0]], 3))
    assert facts.keller and facts.nilpotent and facts.det_a == 0 and facts.rank_a == 2

    facts = keller_facts_check(spec([[1, 0], [0, 1]], 2))
    assert not facts.keller and not facts.nilpotent and facts.det_a == 1
    assert is_keller(expand(spec([[1, 0], [0, 1]], 2)))[1] == P("4*x1*x2 + 2*x1 + 2*x2 + 1", 2)

    facts = keller_facts_check(spec([[0, 0], [0, 0]], 2))
    assert facts.keller and facts.nilpotent and facts.rank_a == 0


def test_keller_facts_report_text():
    text = keller_facts_check(spec([[0, 1], [0, 0]], 3)).to_text()
    assert text == "keller: true\nnilpotent: true\ndet_A: 0\nrank_A: 1\n"


def test_keller_facts_on_random_specs():
    for s in range(60):
        keller_facts_check(gen_random_druzkowski(1 + s % 4, 2 + s % 2, s))


def test_spec_preconditions():
    with pytest.raises(PreconditionError):
        spec([[0, 1], [0, 0]], 1)
    with pytest.raises(PreconditionError):
        spec([[0, 1]], 2)


def test_spec_text_round_trip():
    sp = spec([[0, Fraction(1, 2)], [0, 0]], 3)
    assert DruzkowskiSpec.from_text(sp.to_text()) == sp
    assert sp.to_text() == "d: 3\n0 1/2\n0 0\n"
    with pytest.raises(ParseError):
        DruzkowskiSpec.from_text("0 1\n0 0\n")
    with pytest.raises(ParseError):
        DruzkowskiSpec.from_text("d: x\n0\n")


def test_triangular_druzkowski_generator():
    for s in range(10):
        sp = gen_triangular_druzkowski(2, 3, s)
        a = sp.matrix[0, 1]
        assert sp.matrix == RationalMatrix([[0, a], [0, 0]])
        assert expand(sp) == PolyMap([P("x1", 2) + P("x2", 2).scale(a).pow(3), P("x2", 2)])
        assert -3 <= a <= 3
    assert expand(gen_triangular_druzkowski(1, 2, 5)) == PolyMap.identity(1)
    assert gen_triangular_druzkowski(4, 3, 17) == gen_triangular_druzkowski(4, 3, 17)


def test_triangular_keller_generator():
    assert gen_triangular_keller(1, 3, 9) == PolyMap.identity(1)
    assert gen_triangular_keller(3, 3, 9) == gen_triangular_keller(3, 3, 9)
    for s in range(30):
        n, d = 2 + s % 3, 2 + s % 2
        f = gen_triangular_keller(n, d, s)
        assert is_keller(f) == (True, Polynomial.constant(n, 1))
        for i, hi in enumerate(f.higher_part()):
            assert all(sum(m) >= 2 and sum(m) <= d for m in hi.terms)
            assert all(m[j] == 0 for m in hi.terms for j in range(i + 1))


def test_power_linear_degree_bound():
    for s in range(30):
        n, d = 2 + s % 3, 2 + s % 2
        sp = gen_triangular_druzkowski(n, d, s)
        rep = degree_bound_report(expand(sp))
        assert rep.actual_inverse_degree <= rep.d ** sp.matrix.rank()


def test_homogeneous_slice():
    f = pmap("x1 + x2^2 + x2^3", "x2")
    assert homogeneous_slice(f, 3) == pmap("x1 + x2^3", "x2")
    assert homogeneous_slice(f, 4) == PolyMap.identity(2)


def test_corpus():
    entries = corpus("triangular-keller", 3, 2, 4, 5)
    assert [e.seed for e in entries] == [4 * 1_000_003 + i for i in range(5)]
    assert all(e.expected_keller and e.generator == "triangular-keller" for e in entries)
    assert corpus("triangular-keller", 3, 2, 4, 5) == entries
    assert corpus(GENERATORS[1], 2, 2, 0, 0) == []
    with pytest.raises(PreconditionError):
        corpus("random", 2, 2, 0, 1)
    with pytest.raises(PreconditionError):
        corpus("triangular-keller", 0, 2, 0, 1)
