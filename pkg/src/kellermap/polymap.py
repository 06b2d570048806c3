"""Polynomial maps F = x + H and the operations built on them.

Covers Keller checks, the Euler factorization F = (I + JH/d) x for
homogeneous H, line-injectivity certificates, the kernel-normalizing
linear conjugation, and two inversion algorithms (plain fixed point and the
reduced r-variable scheme) with inverse-degree bound reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from kellermap.errors import (
    DimensionError,
    NoInverseError,
    ParseError,
    PreconditionError,
    TheoremContradiction,
)
from kellermap.matrix import PolyMatrix, RationalMatrix, Vector, is_nilpotent, poly_det, unipotent_inverse
from kellermap.poly import Polynomial, format_polynomial, format_rational, gcd_all, parse_polynomial, substitute


class PolyMap:
    """F = (F_1, ..., F_n) with every component in Q[x1, ..., xn]."""

    __slots__ = ("nvars", "components")

    def __init__(self, components: Sequence[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise DimensionError("a map needs at least one component")
        n = len(comps)
        if any(c.nvars != n for c in comps):
            raise DimensionError(f"every component of a map on Q^{n} must have {n} variables")
        self.nvars = n
        self.components = comps

    @classmethod
    def identity(cls, n: int) -> PolyMap:
        return cls(Polynomial.variables(n))

    @classmethod
    def zero(cls, n: int) -> PolyMap:
        return cls([Polynomial.zero(n)] * n)

    @classmethod
    def linear(cls, m: RationalMatrix) -> PolyMap:
        """The map x -> M x."""
        n = m.rows
        xs = Polynomial.variables(n)
        return cls([sum((x.scale(c) for x, c in zip(xs, row) if c), Polynomial.zero(n)) for row in m.entries])

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return self.nvars

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMap) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"PolyMap({[str(c) for c in self.components]})"

    def __add__(self, other: PolyMap) -> PolyMap:
        return PolyMap([a + b for a, b in zip(self, other)])

    def __sub__(self, other: PolyMap) -> PolyMap:
        return PolyMap([a - b for a, b in zip(self, other)])

    def degree(self) -> int:
        """Largest component degree (0 for the zero map)."""
        return max(max(c.degree() for c in self.components), 0)

    def is_identity(self) -> bool:
        return self == PolyMap.identity(self.nvars)

    def evaluate(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(c.evaluate(point) for c in self.components)

    def __call__(self, *point) -> tuple[Fraction, ...]:
        return self.evaluate(point)

    def higher_part(self) -> PolyMap:
        """F - x."""
        return self - PolyMap.identity(self.nvars)

    def to_text(self) -> str:
        lines = [f"nvars: {self.nvars}"]
        lines += [f"F{i + 1}: {format_polynomial(c)}" for i, c in enumerate(self.components)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> PolyMap:
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise ParseError("empty map file")
        key, _, value = lines[0].partition(":")
        if key.strip() != "nvars":
            raise ParseError("map file must start with 'nvars: <n>'")
        try:
            n = int(value)
        except ValueError:
            raise ParseError(f"bad nvars value {value.strip()!r}") from None
        if n < 1:
            raise ParseError("nvars must be positive")
        if len(lines) != n + 1:
            raise ParseError(f"expected {n} component lines, found {len(lines) - 1}")
        comps = []
        for i, line in enumerate(lines[1:]):
            label, sep, body = line.partition(":")
            if not sep or label.strip() != f"F{i + 1}":
                raise ParseError(f"expected 'F{i + 1}: ...', got {line!r}")
            comps.append(parse_polynomial(body, n))
        return cls(comps)


def compose(f: PolyMap, g: PolyMap, max_degree: int | None = None) -> PolyMap:
    """The map x -> F(G(x))."""
    if f.nvars != g.nvars:
        raise DimensionError("composition of maps with different dimensions")
    return PolyMap([substitute(c, g.components, max_degree) for c in f.components])


def jacobian(f: PolyMap) -> PolyMatrix:
    return PolyMatrix([[c.diff(j) for j in range(f.nvars)] for c in f.components])


def conjugate(f: PolyMap, t: RationalMatrix) -> PolyMap:
    """T^{-1} F(T x)."""
    t_inv = t.inverse()
    inner = compose(f, PolyMap.linear(t))
    return compose(PolyMap.linear(t_inv), inner)


@dataclass(frozen=True)
class MapDecomposition:
    linear_part: RationalMatrix
    translation: tuple[Fraction, ...]
    higher_part: PolyMap
    degree: int

    def is_normal_form(self) -> bool:
        n = len(self.translation)
        return self.linear_part == RationalMatrix.identity(n) and not any(self.translation)


def decompose(f: PolyMap) -> MapDecomposition:
    """Split F into translation + linear part + terms of degree >= 2.

    ``degree`` is deg H, or 0 when H vanishes.
    """
    n = f.nvars
    unit = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    translation = tuple(c.constant_term() for c in f.components)
    linear = RationalMatrix([[c.coefficient(unit[j]) for j in range(n)] for c in f.components])
    higher = PolyMap([Polynomial._raw(n, {m: v for m, v in c.terms.items() if sum(m) >= 2})
                      for c in f.components])
    return MapDecomposition(linear, translation, higher, higher.degree())


def normalize(f: PolyMap) -> PolyMap:
    """L^{-1} (F(x) - F(0)); raises PreconditionError when L is singular."""
    dec = decompose(f)
    try:
        l_inv = dec.linear_part.inverse()
    except PreconditionError:
        raise PreconditionError("linear part of the map is singular") from None
    shifted = PolyMap([c - t for c, t in zip(f.components, dec.translation)])
    return compose(PolyMap.linear(l_inv), shifted)


def _require_normal_form(f: PolyMap) -> MapDecomposition:
    dec = decompose(f)
    if not dec.is_normal_form():
        raise PreconditionError("map is not of the form x + H with ord(H) >= 2; normalize it first")
    return dec


def _homogeneous_degree(f: PolyMap) -> int:
    """d for F = x + H with H homogeneous of degree d >= 2; 1 when H = 0."""
    dec = _require_normal_form(f)
    h = dec.higher_part
    degrees = {sum(m) for c in h for m in c.terms}
    if not degrees:
        return 1
    if len(degrees) > 1:
        raise PreconditionError(f"H is not homogeneous (degrees {sorted(degrees)})")
    return degrees.pop()


def is_keller(f: PolyMap) -> tuple[bool, Polynomial]:
    """Whether det JF is a nonzero constant, together with det JF."""
    det = poly_det(jacobian(f))
    return (not det.is_zero() and det.is_constant()), det


def euler_decompose(f: PolyMap) -> PolyMatrix:
    """M = I + JH/d with M x = F, for F = x + H and H homogeneous of degree d."""
    d = _homogeneous_degree(f)
    n = f.nvars
    ident = PolyMatrix.identity(n, n)
    if d == 1:
        return ident
    m = ident + jacobian(f.higher_part()).scale(Fraction(1, d))
    if m.apply(Polynomial.variables(n)) != f.components:
        raise TheoremContradiction("Euler factorization M x = F failed")
    return m


def verify_ideal_remark(f: PolyMap) -> bool:
    """Check (I + JH/d)^{-1} F = x exactly, exhibiting each x_i in the ideal (F_1, ..., F_n)."""
    m = euler_decompose(f)
    inv = unipotent_inverse(m)
    return inv.apply(f.components) == tuple(Polynomial.variables(f.nvars))


@dataclass(frozen=True)
class LineInjectivityCertificate:
    point: tuple[Fraction, ...]
    degree: int
    nilpotency_witness: int | None
    det_identity_holds: bool
    gcd_root_check: bool
    line_gcd: Polynomial
    failure: str | None = None

    @property
    def valid(self) -> bool:
        return self.failure is None

    def to_text(self) -> str:
        return _report([
            ("certificate", "valid" if self.valid else "invalid"),
            ("point", ",".join(format_rational(v) for v in self.point)),
            ("degree", self.degree),
            ("nilpotency_witness", self.nilpotency_witness if self.nilpotency_witness is not None else "none"),
            ("det_identity_holds", _flag(self.det_identity_holds)),
            ("gcd_root_check", _flag(self.gcd_root_check)),
            ("line_gcd", format_polynomial(self.line_gcd).replace("x1", "t")),
            ("failure", self.failure or "none"),
        ])


def _flag(b: bool) -> str:
    return "true" if b else "false"


def _report(items) -> str:
    return "".join(f"{k}: {v}\n" for k, v in items)


def line_values(f: PolyMap, a: Sequence[Fraction]) -> list[Polynomial]:
    """p_i(t) = F_i(t a) - F_i(a) as polynomials in one variable t."""
    t = Polynomial.variable(1, 0)
    args = [t.scale(v) for v in a]
    return [substitute(c, args) - c.evaluate(a) for c in f.components]


def line_injectivity_certificate(f: PolyMap, a: Sequence) -> LineInjectivityCertificate:
    """Exact evidence that t -> F(t a) takes the value F(a) only at t = 1.

    Three clauses are checked: JH(a) is nilpotent; det(I + (1 + t + ... +
    t^{d-1}) JH(a) / d) equals 1 in Q[t]; and the gcd of the p_i(t) from
    :func:`line_values` is a power of (t - 1).
    """
    a = tuple(Fraction(v) for v in a)
    if len(a) != f.nvars:
        raise DimensionError(f"point must have {f.nvars} coordinates")
    if not any(a):
        raise PreconditionError("the point a must be nonzero")
    d = _homogeneous_degree(f)
    keller, det = is_keller(f)
    if not keller or det != 1:
        raise PreconditionError(f"det JF must be 1, got {det}")
    n = f.nvars

    n_at_a = jacobian(f.higher_part()).evaluate(a)
    nil_ok, witness = is_nilpotent(PolyMatrix.from_rational(n_at_a, 1))

    t = Polynomial.variable(1, 0)
    geometric = sum((t.pow(k) for k in range(d)), Polynomial.zero(1)).scale(Fraction(1, d))
    m = PolyMatrix.identity(n, 1) + PolyMatrix.from_rational(n_at_a, 1).scale(geometric)
    det_ok = poly_det(m) == 1

    g = gcd_all(p for p in line_values(f, a) if not p.is_zero())
    k = g.degree()
    gcd_ok = k >= 1 and g == (t - 1).pow(k)

    failure = None
    if not nil_ok:
        failure = "nilpotency"
    elif not det_ok:
        failure = "det_identity"
    elif not gcd_ok:
        failure = "gcd_root_check"
    return LineInjectivityCertificate(a, d, witness, det_ok, gcd_ok, g, failure)


def constant_kernel(jh: PolyMatrix) -> list[Vector]:
    """Basis of {v in Q^n : JH v = 0 identically}."""
    return _constant_kernel(jh)[0]


def _constant_kernel(jh: PolyMatrix) -> tuple[list[Vector], list[int]]:
    if not jh.is_square():
        raise DimensionError("constant kernel needs a square matrix")
    n = jh.cols
    monos = sorted({m for r in jh.entries for p in r for m in p.terms})
    rows = [[p.coefficient(m) for p in r] for m in monos for r in jh.entries]
    stack = RationalMatrix(rows) if rows else RationalMatrix.zeros(1, n)
    rref, pivots = stack.echelon()
    return stack.kernel(), pivots


@dataclass(frozen=True)
class Conjugation:
    transform: RationalMatrix
    conjugated: PolyMap
    rank: int

    def to_text(self) -> str:
        return (f"r: {self.rank}\nT:\n{self.transform.to_text()}G:\n{self.conjugated.to_text()}")


def conjugate_normalize(f: PolyMap) -> Conjugation:
    """Find T with G = T^{-1} F(T x) whose H-part only involves x_1, ..., x_r.

    The last n - r columns of T are the constant-kernel basis of JH; the
    first r are the unit vectors at the pivot columns of that elimination.
    """
    _require_normal_form(f)
    n = f.nvars
    basis, pivots = _constant_kernel(jacobian(f.higher_part()))
    r = len(pivots)
    units = [tuple(Fraction(int(i == p)) for i in range(n)) for p in pivots]
    t = RationalMatrix.from_columns(units + basis)
    g = conjugate(f, t)

    jg = jacobian(g.higher_part())
    expected = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(r, n)]
    if constant_kernel(jg) != expected or any(not p.is_zero() for row in jg.entries for p in row[r:]):
        raise TheoremContradiction("conjugated map does not have kernel {0}^r x Q^(n-r)")
    return Conjugation(t, g, r)


@dataclass(frozen=True)
class InverseResult:
    inverse_map: PolyMap
    correction: PolyMap
    iterations: int
    truncation_bound: int

    def to_text(self) -> str:
        return self.inverse_map.to_text()


def invert_fixed_point(f: PolyMap, max_degree: int) -> InverseResult:
    """Invert F = x + H by iterating G <- H(x - G) with truncation at ``max_degree``.

    The limit is confirmed by exact composition F(x - G) = x; stabilization
    alone proves nothing.
    """
    _require_normal_form(f)
    n = f.nvars
    xs = Polynomial.variables(n)
    h = f.higher_part()
    g = [Polynomial.zero(n)] * n
    for iteration in range(1, max_degree + 2):
        args = [x - gj for x, gj in zip(xs, g)]
        new = [substitute(hi, args, max_degree) for hi in h]
        if new == g:
            break
        g = new
    else:
        raise NoInverseError(f"no polynomial inverse of degree <= {max_degree}: iteration did not stabilize")
    correction = PolyMap(g)
    inverse = PolyMap(xs) - correction
    if not compose(f, inverse).is_identity():
        raise NoInverseError(f"no polynomial inverse of degree <= {max_degree}")
    return InverseResult(inverse, correction, iteration, max_degree)


@dataclass(frozen=True)
class BoundReport:
    n: int
    d: int
    r: int
    kernel_dim: int
    bound: int
    bcw_bound: int
    actual_inverse_degree: int

    def to_text(self) -> str:
        return _report([
            ("n", self.n), ("d", self.d), ("r", self.r), ("kernel_dim", self.kernel_dim),
            ("bound", self.bound), ("bcw_bound", self.bcw_bound),
            ("actual_inverse_degree", self.actual_inverse_degree),
        ])

    def check(self) -> None:
        """Raise TheoremContradiction if a proven degree bound fails."""
        if self.actual_inverse_degree > self.bound:
            raise TheoremContradiction(
                f"inverse degree {self.actual_inverse_degree} exceeds d^r = {self.bound}")
        if self.actual_inverse_degree > self.bcw_bound:
            raise TheoremContradiction(
                f"inverse degree {self.actual_inverse_degree} exceeds d^(n-1) = {self.bcw_bound}")
        if self.r <= self.n - 1 and self.bound > self.bcw_bound:
            raise TheoremContradiction("d^r exceeds d^(n-1) although r <= n-1")


@dataclass(frozen=True)
class ReducedInversion:
    result: InverseResult
    report: BoundReport
    conjugation: Conjugation = field(repr=False)


def invert_theorem3(f: PolyMap) -> tuple[InverseResult, BoundReport]:
    """Invert through the r-variable reduction.

    After conjugating so that H only involves x_1..x_r, the sub-map
    (F_1..F_r) is inverted with truncation d^(r-1); one exact substitution
    G_i = H_i(x - G) then gives every correction term, and the result is
    conjugated back and verified by exact composition.
    """
    out = _invert_reduced(f)
    return out.result, out.report


def _invert_reduced(f: PolyMap) -> ReducedInversion:
    _require_normal_form(f)
    n = f.nvars
    d = f.degree()
    conj = conjugate_normalize(f)
    r = conj.rank
    xs = Polynomial.variables(n)
    hg = conj.conjugated.higher_part()

    if r == 0:
        correction = hg
        iterations, sub_bound = 0, 0
    else:
        sub = PolyMap([hg[i].restrict(r) + Polynomial.variable(r, i) for i in range(r)])
        sub_bound = d ** (r - 1)
        sub_inv = invert_fixed_point(sub, sub_bound)
        iterations = sub_inv.iterations
        args = [p.extend(n) for p in sub_inv.inverse_map] + xs[r:]
        correction = PolyMap([substitute(hi, args) for hi in hg])

    g_inverse = PolyMap(xs) - correction
    t = conj.transform
    inverse = conjugate(g_inverse, t.inverse())
    if not compose(f, inverse).is_identity():
        raise TheoremContradiction("reduced inversion produced a map that does not invert F")

    report = BoundReport(n=n, d=d, r=r, kernel_dim=n - r, bound=d ** r, bcw_bound=d ** (n - 1),
                         actual_inverse_degree=inverse.degree())
    report.check()
    result = InverseResult(inverse, PolyMap(xs) - inverse, iterations, sub_bound)
    return ReducedInversion(result, report, conj)


def degree_bound_report(f: PolyMap) -> BoundReport:
    return invert_theorem3(f)[1]


def collides_on_line(f: PolyMap, a: Sequence, t: Fraction) -> bool:
    """Whether F(t a) == F(a)."""
    return f.evaluate([Fraction(t) * v for v in a]) == f.evaluate(a)
