# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernels for the weighted-shift hot loops.

Semantics match gabor_amalgam._kernels._np_kernels exactly; the benchmark
in benchmarks/bench_kernels.py compares the two.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def apply_shift_terms(const long long[::1] shifts,
                      const double complex[:, ::1] mults,
                      const double complex[::1] f):
    cdef Py_ssize_t nterms = shifts.shape[0]
    cdef Py_ssize_t n = f.shape[0]
    out_arr = np.zeros(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, l
    cdef Py_ssize_t a
    for i in range(nterms):
        a = <Py_ssize_t> shifts[i]
        # split the cyclic index so the inner loops stay branch-free
        for l in range(a):
            out[l] = out[l] + mults[i, l] * f[l - a + n]
        for l in range(a, n):
            out[l] = out[l] + mults[i, l] * f[l - a]
    return out_arr


def compose_shift_terms(const long long[::1] shifts_a,
                        const double complex[:, ::1] mults_a,
                        const long long[::1] shifts_b,
                        const double complex[:, ::1] mults_b,
                        const long long[::1] out_shifts,
                        const long long[::1] out_rows):
    cdef Py_ssize_t na = shifts_a.shape[0]
    cdef Py_ssize_t nb = shifts_b.shape[0]
    cdef Py_ssize_t n = mults_a.shape[1]
    out_arr = np.zeros((out_shifts.shape[0], n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, l, r
    cdef Py_ssize_t a
    for i in range(na):
        a = <Py_ssize_t> shifts_a[i]
        for j in range(nb):
            r = <Py_ssize_t> out_rows[(a + <Py_ssize_t> shifts_b[j]) % n]
            for l in range(a):
                out[r, l] = out[r, l] + mults_a[i, l] * mults_b[j, l - a + n]
            for l in range(a, n):
                out[r, l] = out[r, l] + mults_a[i, l] * mults_b[j, l - a]
    return out_arr
