"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` in ``nvars`` variables stores its terms as a dict
mapping exponent tuples (length ``nvars``) to nonzero ``Fraction``
coefficients.  Polynomials are immutable; every operation returns a new
value.  Variables are indexed from 0 in the Python API and printed as
``x1 .. xn``.

Canonical text form::

    -3/2*x2^2*x3 + x1 + 1

Terms are printed in descending graded-lexicographic order and the parser
accepts any expanded sum of terms in this grammar (no parentheses).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from kellermap import kernel
from kellermap.errors import DimensionError, ParseError

Monomial = tuple[int, ...]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def grlex_key(mono: Monomial):
    """Sort key for graded lexicographic order (ascending)."""
    return (sum(mono), mono)


class Polynomial:
    """Element of Q[x1, ..., xn]."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        if nvars < 1:
            raise DimensionError("a polynomial needs at least one variable")
        self.nvars = nvars
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(mono)
                if len(mono) != nvars or any(e < 0 for e in mono):
                    raise DimensionError(f"bad exponent vector {mono} for {nvars} variables")
                c = _as_fraction(c)
                if c:
                    clean[mono] = clean.get(mono, 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Monomial, Fraction]) -> Polynomial:
        # Trusted constructor: terms already canonical.
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # construction

    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value) -> Polynomial:
        c = _as_fraction(value)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> Polynomial:
        if not 0 <= index < nvars:
            raise DimensionError(f"variable index {index} out of range for {nvars} variables")
        mono = [0] * nvars
        mono[index] = 1
        return cls._raw(nvars, {tuple(mono): Fraction(1)})

    @classmethod
    def variables(cls, nvars: int) -> list[Polynomial]:
        return [cls.variable(nvars, i) for i in range(nvars)]

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term; -1 for the zero polynomial."""
        return min((sum(m) for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def variables_used(self) -> set[int]:
        return {j for m in self.terms for j, e in enumerate(m) if e}

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # arithmetic

    def _check(self, other: Polynomial) -> None:
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> Polynomial:
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {m: c * v for m, v in self.terms.items()})

    def mul(self, other: Polynomial, max_degree: int | None = None) -> Polynomial:
        """Product, optionally dropping every term of degree > ``max_degree``."""
        self._check(other)
        if max_degree is None:
            max_degree = -1
        elif max_degree < 0:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, kernel.mul_terms(self.terms, other.terms, self.nvars, max_degree))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Polynomial):
            return self.mul(other)
        return NotImplemented

    __rmul__ = __mul__

    def pow(self, k: int, max_degree: int | None = None) -> Polynomial:
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(self.nvars, 1).truncate(max_degree)
        base = self
        while k:
            if k & 1:
                result = result.mul(base, max_degree)
            k >>= 1
            if k:
                base = base.mul(base, max_degree)
        return result

    def __pow__(self, k: int) -> Polynomial:
        return self.pow(k)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(self.nvars, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # degree slicing

    def truncate(self, max_degree: int | None) -> Polynomial:
        """Drop all terms of total degree above ``max_degree``."""
        if max_degree is None:
            return self
        return Polynomial._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) <= max_degree})

    def homogeneous_component(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("degree must be non-negative")
        return Polynomial._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == k})

    # calculus and evaluation

    def diff(self, j: int) -> Polynomial:
        """Formal partial derivative with respect to variable ``j`` (0-based)."""
        if not 0 <= j < self.nvars:
            raise DimensionError(f"variable index {j} out of range for {self.nvars} variables")
        out = {}
        for m, c in self.terms.items():
            e = m[j]
            if e:
                out[m[:j] + (e - 1,) + m[j + 1:]] = c * e
        return Polynomial._raw(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionError(f"expected a point with {self.nvars} coordinates, got {len(point)}")
        point = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for v, e in zip(point, m):
                if e:
                    term *= v ** e
            total += term
        return total

    def __call__(self, *point) -> Fraction:
        return self.evaluate(point)

    def substitute(self, args: Sequence[Polynomial], max_degree: int | None = None) -> Polynomial:
        return substitute(self, args, max_degree)

    def restrict(self, nvars: int) -> Polynomial:
        """View as a polynomial in the first ``nvars`` variables (the rest must be unused)."""
        out = {}
        for m, c in self.terms.items():
            if any(m[nvars:]):
                raise DimensionError(f"polynomial uses variables beyond x{nvars}")
            out[m[:nvars]] = c
        return Polynomial._raw(nvars, out)

    def extend(self, nvars: int) -> Polynomial:
        """Embed into a ring with ``nvars >= self.nvars`` variables."""
        if nvars < self.nvars:
            raise DimensionError("cannot extend to fewer variables")
        pad = (0,) * (nvars - self.nvars)
        return Polynomial._raw(nvars, {m + pad: c for m, c in self.terms.items()})

    # text form

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {str(self)!r})"


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(mono: Monomial) -> str:
    return "*".join(f"x{j + 1}" if e == 1 else f"x{j + 1}^{e}" for j, e in enumerate(mono) if e)


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for i, (mono, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        body = _format_monomial(mono)
        if not body:
            text = format_rational(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{format_rational(mag)}*{body}"
        if i == 0:
            pieces.append(text if sign == "+" else f"-{text}")
        else:
            pieces.append(f" {sign} {text}")
    return "".join(pieces)


_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")
_NUMBER = re.compile(r"^(\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise ParseError(f"not a rational number: {text!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    """Parse the canonical expanded text form into a polynomial in ``nvars`` variables."""
    src = text.strip()
    if not src:
        raise ParseError("empty polynomial")
    if src[0] not in "+-":
        src = "+" + src
    parts = _TERM_SPLIT.split(src)
    # split yields ['', sign, term, sign, term, ...]
    if parts[0] != "" or len(parts) % 2 == 0:
        raise ParseError(f"malformed polynomial: {text!r}")
    terms: dict[Monomial, Fraction] = {}
    for sign, body in zip(parts[1::2], parts[2::2]):
        if not body:
            raise ParseError(f"dangling sign in {text!r}")
        coeff = Fraction(1)
        mono = [0] * nvars
        factors = [f.strip() for f in body.split("*")]
        for k, factor in enumerate(factors):
            num = _NUMBER.match(factor)
            if num and k == 0:
                if num.group(2) is not None and int(num.group(2)) == 0:
                    raise ParseError(f"zero denominator in {text!r}")
                coeff = Fraction(int(num.group(1)), int(num.group(2) or 1))
                continue
            var = _FACTOR.match(factor)
            if not var:
                raise ParseError(f"unexpected factor {factor!r} in {text!r}")
            j = int(var.group(1)) - 1
            if not 0 <= j < nvars:
                raise ParseError(f"variable x{j + 1} out of range for {nvars} variables")
            mono[j] += int(var.group(2) or 1)
        if sign == "-":
            coeff = -coeff
        key = tuple(mono)
        terms[key] = terms.get(key, 0) + coeff
    return Polynomial(nvars, terms)


def substitute(p: Polynomial, args: Sequence[Polynomial], max_degree: int | None = None) -> Polynomial:
    """Compose ``p(args[0], ..., args[n-1])``.

    With ``max_degree`` every intermediate product is truncated, which gives
    exactly the truncation of the full composition.
    """
    if len(args) != p.nvars:
        raise DimensionError(f"substitute needs {p.nvars} arguments, got {len(args)}")
    if not args:
        raise DimensionError("no arguments")
    m = args[0].nvars
    if any(a.nvars != m for a in args):
        raise DimensionError("substituted polynomials must share nvars")
    if not p.terms:
        return Polynomial.zero(m)
    orders = [a.order() for a in args]
    one = Polynomial.constant(m, 1)
    powers: list[dict[int, Polynomial]] = [{0: one, 1: a.truncate(max_degree)} for a in args]

    def power(j: int, e: int) -> Polynomial:
        cache = powers[j]
        if e not in cache:
            half = power(j, e // 2)
            sq = half.mul(half, max_degree)
            cache[e] = sq.mul(args[j], max_degree) if e % 2 else sq
        return cache[e]

    # monomials sharing an exponent prefix reuse the partial product
    prefix: dict[Monomial, Polynomial] = {(): one}

    def product(mono: Monomial) -> Polynomial:
        last = len(mono)
        while last and not mono[last - 1]:
            last -= 1
        key = mono[:last]
        got = prefix.get(key)
        if got is None:
            head = product(key[:-1])
            if head.is_zero():
                got = head
            else:
                got = head.mul(power(last - 1, key[-1]), max_degree)
            prefix[key] = got
        return got

    pieces = []
    for mono, c in p.terms.items():
        if any(e and o < 0 for e, o in zip(mono, orders)):
            continue  # a zero argument raised to a positive power
        if max_degree is not None and sum(e * o for e, o in zip(mono, orders)) > max_degree:
            continue
        pieces.append((c, product(mono).terms))
    return Polynomial._raw(m, kernel.lincomb_terms(pieces))


# univariate helpers over Q[t]; polynomials with nvars == 1

def _leading(p: Polynomial) -> tuple[int, Fraction]:
    deg = p.degree()
    return deg, p.terms[(deg,)]


def univariate_divmod(p: Polynomial, q: Polynomial) -> tuple[Polynomial, Polynomial]:
    if p.nvars != 1 or q.nvars != 1:
        raise DimensionError("univariate division needs one-variable polynomials")
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    dq, lq = _leading(q)
    quot: dict[Monomial, Fraction] = {}
    rem = p
    while not rem.is_zero() and rem.degree() >= dq:
        dr, lr = _leading(rem)
        c = lr / lq
        quot[(dr - dq,)] = c
        shift = Polynomial._raw(1, {(dr - dq,): c})
        rem = rem - shift * q
    return Polynomial._raw(1, quot), rem


def monic(p: Polynomial) -> Polynomial:
    if p.is_zero():
        return p
    return p.scale(1 / _leading(p)[1])


def univariate_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd over Q[t] by Euclid's algorithm; gcd(0, 0) = 0."""
    if p.nvars != 1 or q.nvars != 1:
        raise DimensionError("univariate gcd needs one-variable polynomials")
    while not q.is_zero():
        p, q = q, univariate_divmod(p, q)[1]
    return monic(p)


def gcd_all(polys: Iterable[Polynomial]) -> Polynomial:
    g = Polynomial.zero(1)
    for p in polys:
        g = univariate_gcd(g, p)
    return g
