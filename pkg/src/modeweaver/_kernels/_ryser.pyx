# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Ryser permanent with Gray-code subset updates."""

import numpy as np
cimport numpy as cnp


def permanent_ryser(matrix):
    """Permanent of a square complex matrix, O(2^n * n)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a = np.ascontiguousarray(
        matrix, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] row_sums = np.zeros(
        n, dtype=np.complex128)
    cdef double complex total = 0
    cdef double complex prod
    cdef unsigned long long k, g, gray = 0, bit, tmp
    cdef Py_ssize_t i, j, pop
    cdef unsigned long long limit = 1ULL << n
    for k in range(1, limit):
        g = k ^ (k >> 1)
        bit = g ^ gray
        j = 0
        tmp = bit
        while tmp > 1:
            tmp >>= 1
            j += 1
        if g & bit:
            for i in range(n):
                row_sums[i] = row_sums[i] + a[i, j]
        else:
            for i in range(n):
                row_sums[i] = row_sums[i] - a[i, j]
        gray = g
        prod = 1
        for i in range(n):
            prod = prod * row_sums[i]
        pop = 0
        tmp = g
        while tmp:
            tmp &= tmp - 1
            pop += 1
        if (n - pop) & 1:
            total = total - prod
        else:
            total = total + prod
    return complex(total)
