# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled walk kernel. Same draw schedule as ``_pykernel.walk``."""

import numpy as np
from libc.stdint cimport uint64_t, int64_t

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TO_UNIT = 1.0 / 9007199254740992.0


cdef inline double draw(uint64_t seed, uint64_t k) nogil:
    cdef uint64_t z = seed + (k + 1) * GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    z = z ^ (z >> 31)
    return <double>(z >> 11) * TO_UNIT


cdef inline Py_ssize_t search(const double[::1] row, double u) nogil:
    # first index with row[i] > u (bisect_right)
    cdef Py_ssize_t lo = 0, hi = row.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if u < row[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def walk(const double[:, ::1] cum_p, const double[:, ::1] cum_t,
         const double[::1] alpha, const double[::1] start_cdf,
         long long start, object seed, long long steps, long long burn_in):
    cdef Py_ssize_t n = alpha.shape[0]
    cdef uint64_t s = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    counts_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef Py_ssize_t node
    cdef long long t
    with nogil:
        if start < 0:
            node = search(start_cdf, draw(s, 0))
        else:
            node = start
        if burn_in == 0:
            counts[node] += 1
        for t in range(1, steps):
            if draw(s, 2 * t - 1) < alpha[node]:
                node = search(cum_p[node], draw(s, 2 * t))
            else:
                node = search(cum_t[node], draw(s, 2 * t))
            if t >= burn_in:
                counts[node] += 1
    return counts_arr
