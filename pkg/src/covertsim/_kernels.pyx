# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte-Carlo kernels.

Each kernel consumes uniforms from a numpy bit generator in a documented
order (trial-major) and transforms them to standard exponentials by inverse
CDF, exactly like the pure-numpy backend in ``_backend``. The two backends
therefore draw identical variates from the same seeded stream; only the
floating-point summation order differs.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport log1p

from numpy.random cimport bitgen_t

import numpy as np


cdef inline double _std_exp(bitgen_t *bg) noexcept nogil:
    # next_double is U[0, 1); 1-u is (0, 1] so the log never sees zero
    return -log1p(-bg.next_double(bg.state))


cdef bitgen_t *_get_bitgen(object bit_generator):
    capsule = bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def detector_stat_fill(object bit_generator, Py_ssize_t k,
                       double jam_scale, double alice_scale, double noise,
                       double[::1] out_h0, double[::1] out_h1):
    """Energy-detector statistics: per trial, k interferer gains then one
    covert-link gain. out_h0 gets the interference-plus-noise statistic,
    out_h1 adds the covert signal term."""
    cdef bitgen_t *bg = _get_bitgen(bit_generator)
    cdef Py_ssize_t n = out_h0.shape[0]
    cdef Py_ssize_t i, j
    cdef double s
    with bit_generator.lock, nogil:
        for i in range(n):
            s = 0.0
            for j in range(k):
                s += _std_exp(bg)
            out_h0[i] = jam_scale * s + noise
            out_h1[i] = out_h0[i] + alice_scale * _std_exp(bg)


cdef void _select_smallest(double *a, Py_ssize_t n, Py_ssize_t k) noexcept nogil:
    """Hoare partition so a[0..k-1] hold the k smallest entries (unordered)."""
    cdef Py_ssize_t lo = 0, hi = n - 1, i, j, mid
    cdef double pivot, tmp
    while hi > lo:
        mid = lo + (hi - lo) // 2
        # median-of-three pivot; guards against degenerate splits
        if a[mid] < a[lo]:
            tmp = a[lo]; a[lo] = a[mid]; a[mid] = tmp
        if a[hi] < a[lo]:
            tmp = a[lo]; a[lo] = a[hi]; a[hi] = tmp
        if a[hi] < a[mid]:
            tmp = a[mid]; a[mid] = a[hi]; a[hi] = tmp
        pivot = a[mid]
        i = lo
        j = hi
        while i <= j:
            while a[i] < pivot:
                i += 1
            while a[j] > pivot:
                j -= 1
            if i <= j:
                tmp = a[i]; a[i] = a[j]; a[j] = tmp
                i += 1
                j -= 1
        if k - 1 <= j:
            hi = j
        elif k - 1 >= i:
            lo = i
        else:
            return


def sum_k_smallest_fill(object bit_generator, Py_ssize_t m, Py_ssize_t k,
                        double[::1] out):
    """Per trial: draw m standard exponentials, sum the k smallest."""
    cdef bitgen_t *bg = _get_bitgen(bit_generator)
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t i, j
    cdef double s
    buf_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] buf = buf_arr
    with bit_generator.lock, nogil:
        for i in range(n):
            if k == m:
                s = 0.0
                for j in range(m):
                    s += _std_exp(bg)
            else:
                for j in range(m):
                    buf[j] = _std_exp(bg)
                _select_smallest(&buf[0], m, k)
                s = 0.0
                for j in range(k):
                    s += buf[j]
            out[i] = s


def weighted_exp_sum_fill(object bit_generator, const double[::1] weights,
                          double[::1] out):
    """Per trial: sum of len(weights) standard exponentials scaled by weights."""
    cdef bitgen_t *bg = _get_bitgen(bit_generator)
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t kk = weights.shape[0]
    cdef Py_ssize_t i, j
    cdef double s
    with bit_generator.lock, nogil:
        for i in range(n):
            s = 0.0
            for j in range(kk):
                s += weights[j] * _std_exp(bg)
            out[i] = s
