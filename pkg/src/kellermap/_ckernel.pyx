# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse product kernel (same contract as ``_pykernel.mul_terms``).

Packed monomial keys are ``uint64`` and coefficients, brought over a common
denominator, are multiplied and summed in ``__int128`` inside an
open-addressing hash table.  Whenever an input does not fit (keys wider
than 64 bits, numerators of 2**62 or more, or an accumulator overflow) the
call is delegated to the pure-Python kernel, so results never depend on
the backend.
"""

from math import lcm

from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF
from libc.stdlib cimport calloc, free, malloc
from libc.stdint cimport int64_t, uint64_t

from kellermap import _pykernel
from kellermap._pykernel import make_fraction

cdef extern from *:
    ctypedef long long int128 "__int128"
    bint add_overflow "__builtin_add_overflow"(int128 a, int128 b, int128 *res) nogil

cdef object _NATIVE_LIMIT = 1 << 62


cdef object _int128_to_py(int128 v):
    cdef int64_t hi = <int64_t> (v >> 64)
    cdef uint64_t lo = <uint64_t> v
    return (<object> hi << 64) + <object> lo


cdef inline uint64_t _mix(uint64_t k) nogil:
    k ^= k >> 33
    k *= 0xff51afd7ed558ccdULL
    k ^= k >> 33
    return k


cdef int _prepare(dict terms, int nvars, int bits, uint64_t *keys, int64_t *coeffs,
                  Py_ssize_t *degs, Py_ssize_t *maxexp, list den_out) except -1:
    """Fill key/coefficient/degree arrays; return 0, or 1 if a numerator is too large."""
    cdef Py_ssize_t idx = 0, deg, e
    cdef uint64_t key
    cdef int j
    cdef tuple mono
    den = lcm(*[c.denominator for c in terms.values()])
    den_out.append(den)
    for j in range(nvars):
        maxexp[j] = 0
    for mono, c in terms.items():
        num = c.numerator * (den // c.denominator)
        if not -_NATIVE_LIMIT < num < _NATIVE_LIMIT:
            return 1
        key = 0
        deg = 0
        for j in range(nvars - 1, -1, -1):
            e = mono[j]
            key = (key << bits) | <uint64_t> e
            deg += e
            if e > maxexp[j]:
                maxexp[j] = e
        keys[idx] = key
        coeffs[idx] = num
        degs[idx] = deg
        idx += 1
    return 0


cdef Py_ssize_t _max_exponent(dict terms):
    cdef Py_ssize_t best = 0, e
    cdef tuple mono
    for mono in terms:
        for x in mono:
            e = x
            if e > best:
                best = e
    return best


def mul_terms(dict a, dict b, int nvars, long max_degree=-1):
    if not a or not b:
        return {}
    cdef int bits = _max_exponent(a) + _max_exponent(b)
    bits = max(bits.bit_length(), 1)
    if bits * nvars > 64:
        return _pykernel.mul_terms(a, b, nvars, max_degree)

    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef Py_ssize_t i, j, slot, cap, bound
    cdef uint64_t key, mask_slot, emask
    cdef int128 prod
    cdef bint failed = False
    cdef list dens = []
    cdef uint64_t *ka = <uint64_t *> malloc(na * sizeof(uint64_t))
    cdef uint64_t *kb = <uint64_t *> malloc(nb * sizeof(uint64_t))
    cdef int64_t *xa = <int64_t *> malloc(na * sizeof(int64_t))
    cdef int64_t *xb = <int64_t *> malloc(nb * sizeof(int64_t))
    cdef Py_ssize_t *dga = <Py_ssize_t *> malloc(na * sizeof(Py_ssize_t))
    cdef Py_ssize_t *dgb = <Py_ssize_t *> malloc(nb * sizeof(Py_ssize_t))
    cdef Py_ssize_t *ea = <Py_ssize_t *> malloc(nvars * sizeof(Py_ssize_t))
    cdef Py_ssize_t *eb = <Py_ssize_t *> malloc(nvars * sizeof(Py_ssize_t))
    cdef uint64_t *tkeys = NULL
    cdef int128 *tacc = NULL
    cdef char *tused = NULL
    try:
        if not (ka and kb and xa and xb and dga and dgb and ea and eb):
            raise MemoryError()
        if _prepare(a, nvars, bits, ka, xa, dga, ea, dens) or _prepare(b, nvars, bits, kb, xb, dgb, eb, dens):
            return _pykernel.mul_terms(a, b, nvars, max_degree)

        # distinct product keys are bounded by both the pair count and the exponent box
        bound = na * nb
        cap = 1
        for j in range(nvars):
            cap *= ea[j] + eb[j] + 1
            if cap >= bound:
                break
        if cap < bound:
            bound = cap
        cap = 16
        while cap < 2 * bound:
            cap <<= 1
        mask_slot = <uint64_t> (cap - 1)
        tkeys = <uint64_t *> malloc(cap * sizeof(uint64_t))
        tacc = <int128 *> malloc(cap * sizeof(int128))
        tused = <char *> calloc(cap, sizeof(char))
        if not (tkeys and tacc and tused):
            raise MemoryError()

        with nogil:
            for i in range(na):
                for j in range(nb):
                    if max_degree >= 0 and dga[i] + dgb[j] > max_degree:
                        continue
                    key = ka[i] + kb[j]
                    prod = (<int128> xa[i]) * xb[j]
                    slot = <Py_ssize_t> (_mix(key) & mask_slot)
                    while tused[slot] and tkeys[slot] != key:
                        slot = (slot + 1) & <Py_ssize_t> mask_slot
                    if tused[slot]:
                        if add_overflow(tacc[slot], prod, &tacc[slot]):
                            failed = True
                            break
                    else:
                        tused[slot] = 1
                        tkeys[slot] = key
                        tacc[slot] = prod
                if failed:
                    break
        if failed:
            return _pykernel.mul_terms(a, b, nvars, max_degree)

        den = dens[0] * dens[1]
        emask = (<uint64_t> 1 << bits) - 1
        out = {}
        for slot in range(cap):
            if tused[slot] and tacc[slot] != 0:
                key = tkeys[slot]
                mono = PyTuple_New(nvars)
                for j in range(nvars):
                    e = <object> <Py_ssize_t> (key & emask)
                    Py_INCREF(e)
                    PyTuple_SET_ITEM(mono, j, e)
                    key >>= bits
                out[mono] = make_fraction(_int128_to_py(tacc[slot]), den)
        return out
    finally:
        free(ka); free(kb); free(xa); free(xb); free(dga); free(dgb); free(ea); free(eb)
        free(tkeys); free(tacc); free(tused)


def lincomb_terms(pairs):
    """Sum of ``c * p`` over ``(Fraction c, term dict p)`` pairs (see ``_pykernel``)."""
    cdef list live = []
    cdef list dens = []
    cdef dict p, acc = {}
    cdef tuple m
    for c, p in pairs:
        if c and p:
            live.append((c, p))
            dens.append(lcm(*[v.denominator for v in p.values()]) * c.denominator)
    if not live:
        return {}
    den = lcm(*dens)
    for (c, p), dp in zip(live, dens):
        scale = c.numerator * (den // dp)
        pden = dp // c.denominator
        if pden == 1:
            for m, v in p.items():
                t = acc.get(m)
                acc[m] = scale * v.numerator if t is None else t + scale * v.numerator
        else:
            for m, v in p.items():
                t = scale * v.numerator * (pden // v.denominator)
                u = acc.get(m)
                acc[m] = t if u is None else u + t
    return {m: make_fraction(v, den) for m, v in acc.items() if v}
