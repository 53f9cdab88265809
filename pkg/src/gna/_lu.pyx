# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched LU with partial pivoting.

Each sample along axis 0 is factored independently; there is no
communication between samples. Mirrors ``gna._lu_py`` operation for
operation so that both backends pick the same pivots.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

ctypedef fused scalar_t:
    double
    double complex


cdef inline double _mag(scalar_t x) nogil:
    if scalar_t is double:
        return fabs(x)
    else:
        return sqrt(x.real * x.real + x.imag * x.imag)


cdef int _factor(scalar_t[:, ::1] a, Py_ssize_t[::1] perm, int* sign) noexcept nogil:
    """In-place LU of one n x n block; returns 1 if a zero pivot was met."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, c, p
    cdef double best, m
    cdef scalar_t t, piv, f
    cdef int singular = 0
    sign[0] = 1
    for i in range(n):
        perm[i] = i
    for c in range(n):
        p = c
        best = _mag(a[c, c])
        for i in range(c + 1, n):
            m = _mag(a[i, c])
            if m > best:
                best = m
                p = i
        if best == 0.0:
            singular = 1
            continue
        if p != c:
            for j in range(n):
                t = a[c, j]
                a[c, j] = a[p, j]
                a[p, j] = t
            i = perm[c]
            perm[c] = perm[p]
            perm[p] = i
            sign[0] = -sign[0]
        piv = a[c, c]
        for i in range(c + 1, n):
            f = a[i, c] / piv
            a[i, c] = f
            for j in range(c + 1, n):
                a[i, j] = a[i, j] - f * a[c, j]
    return singular


def batched_det(const scalar_t[:, :, :] a_in):
    """Determinants of a stack (K, n, n); returns (det, singular_flags)."""
    cdef Py_ssize_t K = a_in.shape[0], n = a_in.shape[1]
    cdef Py_ssize_t s, i
    cdef int sign = 1
    a_np = np.array(a_in, copy=True, order="C")
    cdef scalar_t[:, :, ::1] a = a_np
    out_np = np.empty(K, dtype=a_np.dtype)
    cdef scalar_t[::1] out = out_np
    flags_np = np.zeros(K, dtype=np.uint8)
    cdef unsigned char[::1] flags = flags_np
    cdef Py_ssize_t[::1] perm = np.empty(n, dtype=np.intp)
    cdef scalar_t d
    with nogil:
        for s in range(K):
            if _factor(a[s], perm, &sign):
                flags[s] = 1
                out[s] = 0
                continue
            d = sign
            for i in range(n):
                d = d * a[s, i, i]
            out[s] = d
    return out_np, flags_np.astype(bool)


def batched_solve(const scalar_t[:, :, :] a_in, const scalar_t[:, :, :] b_in):
    """Solve A_s X_s = B_s for a stack; B has shape (K, n, r).

    Singular samples get X_s = 0 and are flagged.
    """
    cdef Py_ssize_t K = a_in.shape[0], n = a_in.shape[1], r = b_in.shape[2]
    cdef Py_ssize_t s, i, j, c
    cdef int sign = 1
    a_np = np.array(a_in, copy=True, order="C")
    cdef scalar_t[:, :, ::1] a = a_np
    x_np = np.zeros((K, n, r), dtype=a_np.dtype)
    cdef scalar_t[:, :, ::1] x = x_np
    cdef const scalar_t[:, :, :] b = b_in
    flags_np = np.zeros(K, dtype=np.uint8)
    cdef unsigned char[::1] flags = flags_np
    cdef Py_ssize_t[::1] perm = np.empty(n, dtype=np.intp)
    cdef scalar_t acc
    with nogil:
        for s in range(K):
            if _factor(a[s], perm, &sign):
                flags[s] = 1
                continue
            for c in range(r):
                for i in range(n):
                    acc = b[s, perm[i], c]
                    for j in range(i):
                        acc = acc - a[s, i, j] * x[s, j, c]
                    x[s, i, c] = acc
                for i in range(n - 1, -1, -1):
                    acc = x[s, i, c]
                    for j in range(i + 1, n):
                        acc = acc - a[s, i, j] * x[s, j, c]
                    x[s, i, c] = acc / a[s, i, i]
    return x_np, flags_np.astype(bool)
