"""Pure-Python sparse product kernel.

Exponent tuples are packed into a single integer (``bits`` bits per
variable) so that monomial multiplication is one integer addition, and
rational coefficients are brought over a common denominator so the inner
loop only touches Python ints.  This module is the fallback for the
compiled kernel in ``_ckernel`` and must return identical results.
"""

from bisect import bisect_right
from fractions import Fraction
from math import gcd, lcm

_new = object.__new__


def make_fraction(num, den):
    """Fraction(num, den) for den > 0, skipping the generic constructor."""
    g = gcd(num, den)
    f = _new(Fraction)
    f._numerator = num // g
    f._denominator = den // g
    return f


def _prepare(terms, nvars, bits):
    den = lcm(*(c.denominator for c in terms.values()))
    packed = []
    for mono, c in terms.items():
        key = 0
        for j in range(nvars - 1, -1, -1):
            key = (key << bits) | mono[j]
        packed.append((sum(mono), key, c.numerator * (den // c.denominator)))
    return packed, den


def choose_bits(a, b):
    """Bits per variable needed so packed exponent sums never carry."""
    ea = max(max(m, default=0) for m in a)
    eb = max(max(m, default=0) for m in b)
    return max((ea + eb).bit_length(), 1)


def mul_terms(a, b, nvars, max_degree=-1):
    """Product of two term dicts ``{exponent tuple: Fraction}``.

    Terms of total degree above ``max_degree`` are never formed; a negative
    ``max_degree`` means no truncation.
    """
    if not a or not b:
        return {}
    bits = choose_bits(a, b)
    pa, da = _prepare(a, nvars, bits)
    pb, db = _prepare(b, nvars, bits)
    pb.sort()
    degs_b = [t[0] for t in pb]
    acc = {}
    get = acc.get
    for deg_a, ka, ca in pa:
        if max_degree >= 0:
            stop = bisect_right(degs_b, max_degree - deg_a)
            if not stop:
                continue
            row = pb[:stop]
        else:
            row = pb
        for _, kb, cb in row:
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    return unpack(acc, nvars, bits, da * db)


def unpack(acc, nvars, bits, den):
    mask = (1 << bits) - 1
    out = {}
    for key, c in acc.items():
        if c:
            mono = []
            for _ in range(nvars):
                mono.append(key & mask)
                key >>= bits
            out[tuple(mono)] = make_fraction(c, den)
    return out


def lincomb_terms(pairs):
    """Sum of ``c * p`` over ``(Fraction c, term dict p)`` pairs, as a term dict."""
    pairs = [(c, p) for c, p in pairs if c and p]
    if not pairs:
        return {}
    dens = [lcm(*(v.denominator for v in p.values())) * c.denominator for c, p in pairs]
    den = lcm(*dens)
    acc = {}
    get = acc.get
    for (c, p), dp in zip(pairs, dens):
        scale = c.numerator * (den // dp)
        pden = dp // c.denominator
        for m, v in p.items():
            acc[m] = get(m, 0) + scale * v.numerator * (pden // v.denominator)
    return {m: make_fraction(v, den) for m, v in acc.items() if v}
