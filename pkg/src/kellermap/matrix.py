"""Exact matrices over Q and over Q[x1, ..., xn].

``RationalMatrix`` carries the constant linear algebra (rank, right kernel,
inverse); ``PolyMatrix`` carries Jacobians and the unipotent-inverse
machinery.  Both are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from kellermap.errors import DimensionError, NotNilpotentError, ParseError, PreconditionError
from kellermap.poly import Polynomial, format_rational, parse_rational

Vector = tuple[Fraction, ...]


class RationalMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [tuple(Fraction(v) if not isinstance(v, str) else parse_rational(v) for v in row)
                for row in entries]
        if not rows or not rows[0]:
            raise DimensionError("matrix must have at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise DimensionError("ragged matrix")
        self.rows = len(rows)
        self.cols = len(rows[0])
        self.entries = tuple(rows)

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> RationalMatrix:
        return cls(list(zip(*columns)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"RationalMatrix({[[format_rational(v) for v in r] for r in self.entries]})"

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(list(zip(*self.entries)))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise DimensionError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = list(zip(*other.entries))
        return RationalMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols]
                               for r in self.entries])

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise DimensionError("vector length does not match matrix columns")
        return tuple(sum((a * Fraction(b) for a, b in zip(r, v)), Fraction(0)) for r in self.entries)

    def echelon(self) -> tuple[list[list[Fraction]], list[int]]:
        """Reduced row echelon form and the pivot columns."""
        m = [list(r) for r in self.entries]
        pivots = []
        prow = 0
        for c in range(self.cols):
            if prow == self.rows:
                break
            piv = next((i for i in range(prow, self.rows) if m[i][c]), None)
            if piv is None:
                continue
            m[prow], m[piv] = m[piv], m[prow]
            lead = m[prow][c]
            m[prow] = [v / lead for v in m[prow]]
            for i in range(self.rows):
                if i != prow and m[i][c]:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[prow])]
            pivots.append(c)
            prow += 1
        return m, pivots

    def rank(self) -> int:
        return len(self.echelon()[1])

    def kernel(self) -> list[Vector]:
        """Right-kernel basis: one vector per free column, ascending, with a 1 there."""
        rref, pivots = self.echelon()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for i, p in enumerate(pivots):
                v[p] = -rref[i][f]
            basis.append(tuple(v))
        return basis

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        m = [list(r) for r in self.entries]
        n = self.rows
        sign = 1
        result = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c]), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                sign = -sign
            result *= m[c][c]
            for i in range(c + 1, n):
                if m[i][c]:
                    f = m[i][c] / m[c][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return sign * result

    def inverse(self) -> RationalMatrix:
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = RationalMatrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.entries)])
        rref, pivots = aug.echelon()
        if pivots[:n] != list(range(n)):
            raise PreconditionError("matrix is singular")
        return RationalMatrix([row[n:] for row in rref])

    def to_text(self) -> str:
        return "\n".join(" ".join(format_rational(v) for v in r) for r in self.entries) + "\n"

    @classmethod
    def from_text(cls, text: str) -> RationalMatrix:
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty matrix")
        try:
            return cls([[parse_rational(tok) for tok in ln] for ln in lines])
        except DimensionError as exc:
            raise ParseError(str(exc)) from exc


def rational_kernel(m: RationalMatrix) -> list[Vector]:
    return m.kernel()


def rational_rank(m: RationalMatrix) -> int:
    return m.rank()


def same_span(u: Sequence[Sequence], v: Sequence[Sequence]) -> bool:
    """Whether two families of vectors span the same subspace."""
    def rank(vectors):
        return RationalMatrix(list(vectors)).rank() if vectors else 0
    ru, rv = rank(u), rank(v)
    return ru == rv == rank(list(u) + list(v))


class PolyMatrix:
    __slots__ = ("rows", "cols", "nvars", "entries")

    def __init__(self, entries: Sequence[Sequence[Polynomial]]):
        rows = [tuple(r) for r in entries]
        if not rows or not rows[0]:
            raise DimensionError("matrix must have at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise DimensionError("ragged matrix")
        nvars = rows[0][0].nvars
        if any(p.nvars != nvars for r in rows for p in r):
            raise DimensionError("all entries must share nvars")
        self.rows = len(rows)
        self.cols = len(rows[0])
        self.nvars = nvars
        self.entries = tuple(rows)

    @classmethod
    def identity(cls, n: int, nvars: int) -> PolyMatrix:
        return cls([[Polynomial.constant(nvars, int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, nvars: int) -> PolyMatrix:
        z = Polynomial.zero(nvars)
        return cls([[z] * cols for _ in range(rows)])

    @classmethod
    def from_rational(cls, m: RationalMatrix, nvars: int) -> PolyMatrix:
        return cls([[Polynomial.constant(nvars, v) for v in r] for r in m.entries])

    @classmethod
    def diagonal(cls, diag: Sequence[Polynomial]) -> PolyMatrix:
        nvars = diag[0].nvars
        z = Polynomial.zero(nvars)
        return cls([[d if i == j else z for j in range(len(diag))] for i, d in enumerate(diag)])

    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[Polynomial, ...]:
        return tuple(r[j] for r in self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"PolyMatrix({[[str(p) for p in r] for r in self.entries]})"

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.entries for p in r)

    def _same_shape(self, other: PolyMatrix) -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")

    def transpose(self) -> PolyMatrix:
        return PolyMatrix(list(zip(*self.entries)))

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        self._same_shape(other)
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        self._same_shape(other)
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> PolyMatrix:
        return PolyMatrix([[-a for a in r] for r in self.entries])

    def scale(self, c) -> PolyMatrix:
        if isinstance(c, Polynomial):
            return PolyMatrix([[a * c for a in r] for r in self.entries])
        return PolyMatrix([[a.scale(c) for a in r] for r in self.entries])

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        return poly_matmul(self, other)

    def apply(self, column: Sequence[Polynomial]) -> tuple[Polynomial, ...]:
        """Matrix times a column of polynomials."""
        if len(column) != self.cols:
            raise DimensionError("column length does not match matrix columns")
        z = Polynomial.zero(self.nvars)
        return tuple(sum((a * b for a, b in zip(r, column) if not a.is_zero() and not b.is_zero()), z)
                     for r in self.entries)

    def evaluate(self, point: Sequence) -> RationalMatrix:
        return RationalMatrix([[p.evaluate(point) for p in r] for r in self.entries])

    def power(self, k: int) -> PolyMatrix:
        if not self.is_square():
            raise DimensionError("power of a non-square matrix")
        result = PolyMatrix.identity(self.rows, self.nvars)
        for _ in range(k):
            result = result @ self
        return result

    def det(self) -> Polynomial:
        return poly_det(self)


def poly_matmul(m: PolyMatrix, n: PolyMatrix) -> PolyMatrix:
    if m.cols != n.rows:
        raise DimensionError(f"shape mismatch {m.rows}x{m.cols} @ {n.rows}x{n.cols}")
    if m.nvars != n.nvars:
        raise DimensionError("nvars mismatch")
    cols = [n.column(j) for j in range(n.cols)]
    return PolyMatrix([m.apply(c) for c in cols]).transpose()


def poly_det(m: PolyMatrix) -> Polynomial:
    """Determinant by Laplace expansion along rows, memoized on column subsets.

    Costs O(2^n * n) polynomial products; intended for n <= 6 or so.
    """
    if not m.is_square():
        raise DimensionError("determinant of a non-square matrix")
    n = m.rows
    zero = Polynomial.zero(m.nvars)
    memo: dict[int, Polynomial] = {0: Polynomial.constant(m.nvars, 1)}

    # det of rows (n - popcount(mask))..n-1 restricted to the columns in mask
    def minor(mask: int) -> Polynomial:
        if mask in memo:
            return memo[mask]
        row = n - bin(mask).count("1")
        total = zero
        sign = 1
        for c in range(n):
            if mask >> c & 1:
                a = m.entries[row][c]
                if not a.is_zero():
                    sub = minor(mask & ~(1 << c))
                    if not sub.is_zero():
                        total = total + (a * sub if sign > 0 else -(a * sub))
                sign = -sign
        memo[mask] = total
        return total

    return minor((1 << n) - 1)


def is_nilpotent(m: PolyMatrix) -> tuple[bool, int | None]:
    """``(True, k)`` with k the least power where M^k = 0, or ``(False, None)``.

    Over a commutative ring an n x n nilpotent matrix has M^n = 0, so n
    steps decide the question.
    """
    if not m.is_square():
        raise DimensionError("nilpotency of a non-square matrix")
    power = m
    for k in range(1, m.rows + 1):
        if power.is_zero():
            return True, k
        if k < m.rows:
            power = power @ m
    return False, None


def unipotent_inverse(m: PolyMatrix) -> PolyMatrix:
    """Inverse of I + N for nilpotent N, as the finite sum of (-N)^k."""
    if not m.is_square():
        raise DimensionError("inverse of a non-square matrix")
    n = m.rows
    ident = PolyMatrix.identity(n, m.nvars)
    nil = m - ident
    ok, k = is_nilpotent(nil)
    if not ok:
        raise NotNilpotentError("M - I is not nilpotent")
    result = ident
    term = ident
    neg = -nil
    for _ in range(1, k):
        term = term @ neg
        result = result + term
    return result
