"""Power-linear (generalized Druzkowski) maps x + (Ax)^{*d} and corpus generators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from kellermap.errors import ParseError, PreconditionError, TheoremContradiction
from kellermap.matrix import PolyMatrix, RationalMatrix, is_nilpotent, same_span
from kellermap.poly import Polynomial
from kellermap.polymap import PolyMap, constant_kernel, is_keller, jacobian

DEFAULT_COEFF_RANGE = 3


@dataclass(frozen=True)
class DruzkowskiSpec:
    matrix: RationalMatrix
    d: int

    def __post_init__(self):
        if self.d < 2:
            raise PreconditionError("power-linear maps need d >= 2")
        if not self.matrix.is_square():
            raise PreconditionError("the matrix A must be square")

    @property
    def n(self) -> int:
        return self.matrix.rows

    def to_text(self) -> str:
        return f"d: {self.d}\n" + self.matrix.to_text()

    @classmethod
    def from_text(cls, text: str) -> DruzkowskiSpec:
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines or not lines[0].startswith("d:"):
            raise ParseError("spec file must start with 'd: <d>'")
        try:
            d = int(lines[0][2:])
        except ValueError:
            raise ParseError(f"bad degree line {lines[0]!r}") from None
        return cls(RationalMatrix.from_text("\n".join(lines[1:])), d)


def linear_forms(a: RationalMatrix) -> list[Polynomial]:
    """The rows A^i x as polynomials."""
    return list(PolyMap.linear(a))


def expand(spec: DruzkowskiSpec) -> PolyMap:
    """F_i = x_i + (A^i x)^d, fully expanded."""
    xs = Polynomial.variables(spec.n)
    return PolyMap([x + form.pow(spec.d) for x, form in zip(xs, linear_forms(spec.matrix))])


def structural_jacobian(spec: DruzkowskiSpec) -> PolyMatrix:
    """JH from the closed form d * diag((A^i x)^(d-1)) * A."""
    diag = PolyMatrix.diagonal([form.pow(spec.d - 1) for form in linear_forms(spec.matrix)])
    return (diag @ PolyMatrix.from_rational(spec.matrix, spec.n)).scale(spec.d)


def kernel_equality_check(spec: DruzkowskiSpec) -> bool:
    """Constant kernel of JH equals ker A, by mutual containment.

    Raises TheoremContradiction if it does not.
    """
    jh = structural_jacobian(spec)
    ker_jh = constant_kernel(jh)
    ker_a = spec.matrix.kernel()
    for v in ker_a:
        column = [Polynomial.constant(spec.n, c) for c in v]
        if any(not p.is_zero() for p in jh.apply(column)):
            raise TheoremContradiction(f"A v = 0 but JH v != 0 for v = {v}")
    for v in ker_jh:
        if any(spec.matrix.apply(v)):
            raise TheoremContradiction(f"JH v = 0 but A v != 0 for v = {v}")
    if not same_span(ker_a, ker_jh):
        raise TheoremContradiction("ker JH and ker A differ")
    return True


@dataclass(frozen=True)
class KellerFacts:
    keller: bool
    nilpotent: bool
    det_a: Fraction
    rank_a: int

    def to_text(self) -> str:
        return (f"keller: {str(self.keller).lower()}\nnilpotent: {str(self.nilpotent).lower()}\n"
                f"det_A: {self.det_a}\nrank_A: {self.rank_a}\n")


def keller_facts_check(spec: DruzkowskiSpec) -> KellerFacts:
    """Keller <=> JH nilpotent, and Keller => det A = 0, rank A <= n - 1."""
    f = expand(spec)
    keller, _ = is_keller(f)
    nilpotent, _ = is_nilpotent(jacobian(f.higher_part()))
    det_a = spec.matrix.det()
    rank_a = spec.matrix.rank()
    if keller and not nilpotent:
        raise TheoremContradiction("Keller power-linear map with non-nilpotent JH")
    if nilpotent and not keller:
        raise TheoremContradiction("nilpotent JH but det JF is not constant")
    if keller and (det_a != 0 or rank_a > spec.n - 1):
        raise TheoremContradiction(f"Keller power-linear map with det A = {det_a}, rank A = {rank_a}")
    return KellerFacts(keller, nilpotent, det_a, rank_a)


# corpus generators


@dataclass(frozen=True)
class CorpusEntry:
    map: PolyMap
    generator: str
    seed: int
    expected_keller: bool


def gen_triangular_druzkowski(n: int, d: int, seed: int,
                              coeff_range: int = DEFAULT_COEFF_RANGE) -> DruzkowskiSpec:
    """Strictly upper triangular A with integer entries in [-coeff_range, coeff_range]."""
    rng = random.Random(seed)
    rows = [[rng.randint(-coeff_range, coeff_range) if j > i else 0 for j in range(n)] for i in range(n)]
    return DruzkowskiSpec(RationalMatrix(rows), d)


def gen_random_druzkowski(n: int, d: int, seed: int,
                          coeff_range: int = DEFAULT_COEFF_RANGE) -> DruzkowskiSpec:
    """Unstructured A (usually not Keller); some rows are zeroed to vary the rank."""
    rng = random.Random(seed)
    rows = [[rng.randint(-coeff_range, coeff_range) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        if rng.random() < 0.3:
            rows[i] = [0] * n
    if n > 1 and rng.random() < 0.3:
        # a dependent row keeps the rank low without a zero row
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-2, 2)
        rows[i] = [k * v for v in rows[j]]
    return DruzkowskiSpec(RationalMatrix(rows), d)


def _random_monomial(rng: random.Random, n: int, variables: list[int], degree: int) -> tuple[int, ...]:
    mono = [0] * n
    for _ in range(degree):
        mono[rng.choice(variables)] += 1
    return tuple(mono)


def gen_triangular_keller(n: int, d: int, seed: int, terms_per_component: int = 2,
                          coeff_range: int = DEFAULT_COEFF_RANGE) -> PolyMap:
    """F_i = x_i + H_i with H_i of degree in [2, d] using only x_{i+1}, ..., x_n."""
    rng = random.Random(seed)
    comps = []
    for i in range(n):
        later = list(range(i + 1, n))
        terms: dict[tuple[int, ...], int] = {}
        if later:
            for _ in range(terms_per_component):
                mono = _random_monomial(rng, n, later, rng.randint(2, d))
                terms[mono] = terms.get(mono, 0) + rng.choice(
                    [c for c in range(-coeff_range, coeff_range + 1) if c])
        comps.append(Polynomial.variable(n, i) + Polynomial(n, terms))
    return PolyMap(comps)


def homogeneous_slice(f: PolyMap, k: int) -> PolyMap:
    """x + (degree-k part of H)."""
    h = f.higher_part()
    return PolyMap([x + c.homogeneous_component(k) for x, c in zip(Polynomial.variables(f.nvars), h)])


GENERATORS = ("triangular-keller", "triangular-druzkowski")


def corpus_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def corpus(kind: str, n: int, d: int, seed: int, count: int) -> list[CorpusEntry]:
    """``count`` deterministic entries of one generator family."""
    if kind not in GENERATORS:
        raise PreconditionError(f"unknown generator {kind!r}; choose from {', '.join(GENERATORS)}")
    if n < 1 or d < 2 or count < 0:
        raise PreconditionError("need n >= 1, d >= 2, count >= 0")
    out = []
    for i in range(count):
        s = corpus_seed(seed, i)
        if kind == "triangular-keller":
            f = gen_triangular_keller(n, d, s)
        else:
            f = expand(gen_triangular_druzkowski(n, d, s))
        out.append(CorpusEntry(f, kind, s, True))
    return out
