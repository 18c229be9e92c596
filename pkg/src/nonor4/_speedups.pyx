# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``."""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


def arf_ones(diag, rows, int n):
    if n > 62:
        raise ValueError("dimension too large")
    cdef uint64_t d = diag
    cdef uint64_t *r = <uint64_t *> malloc(max(n, 1) * sizeof(uint64_t))
    cdef int i, k
    cdef uint64_t x = 0, s, total
    cdef uint64_t q = 0, ones = 0, delta
    for i in range(n):
        r[i] = rows[i]
    total = (<uint64_t> 1) << n
    with nogil:
        s = 1
        while s < total:
            k = __builtin_ctzll(s)
            delta = ((d >> k) & 1) ^ (__builtin_popcountll(r[k] & x) & 1)
            q ^= delta
            x ^= (<uint64_t> 1) << k
            ones += q
            s += 1
    free(r)
    return ones


def residue_counts(weights, moduli, long modulus):
    cdef int k = len(weights)
    cdef long i, j, v, t, m
    counts = [0] * modulus
    if k == 0:
        counts[0] = 1
        return counts
    cdef int64_t *acc = <int64_t *> malloc(modulus * sizeof(int64_t))
    cdef int64_t *nxt = <int64_t *> malloc(modulus * sizeof(int64_t))
    cdef int64_t *tmp
    cdef long w
    for v in range(modulus):
        acc[v] = 0
    acc[0] = 1
    try:
        for i in range(k):
            w = weights[i] % modulus
            m = moduli[i]
            for v in range(modulus):
                nxt[v] = 0
            for v in range(modulus):
                if acc[v] == 0:
                    continue
                for j in range(m):
                    t = (v + (w * ((j * j) % modulus)) % modulus) % modulus
                    nxt[t] += acc[v]
            tmp = acc
            acc = nxt
            nxt = tmp
        for v in range(modulus):
            counts[v] = acc[v]
    finally:
        free(acc)
        free(nxt)
    return counts


def coset_min(int64_t a, int64_t b, int64_t c, int rx, int ry, int64_t box):
    cdef int64_t x, y, x0, y0, v, cx, bx
    cdef int64_t best = 0
    cdef bint found = False
    x0 = -box if ((-box - rx) % 2 + 2) % 2 == 0 else -box + 1
    y0 = -box if ((-box - ry) % 2 + 2) % 2 == 0 else -box + 1
    with nogil:
        x = x0
        while x <= box:
            cx = c * x * x
            bx = 2 * b * x
            y = y0
            while y <= box:
                v = cx - bx * y + a * y * y
                if not found or v < best:
                    best = v
                    found = True
                y += 2
            x += 2
    return best
