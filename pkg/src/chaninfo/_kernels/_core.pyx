# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the `_pure` kernels.

Same golden-section trajectory and the same cell-exclusion rules as the
numpy backend, written as per-row scalar loops: no temporaries, and the
objective is evaluated on the compacted common-support cells only.
"""
from libc.math cimport ceil, exp, log

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double INVPHI = (5.0 ** 0.5 - 1.0) / 2.0
cdef double INVPHI2 = (3.0 - 5.0 ** 0.5) / 2.0


cdef inline double _objective(double* coef, double* base, Py_ssize_t k,
                              double alpha) nogil:
    cdef double s = 0.0
    cdef Py_ssize_t j
    for j in range(k):
        s += exp(base[j] + alpha * coef[j])
    return log(s)


def chernoff_batch(double[:, ::1] p1, double[:, ::1] p2, double tol=1e-10):
    """Rowwise Chernoff information; see `_pure.chernoff_batch`."""
    cdef Py_ssize_t n = p1.shape[0]
    cdef Py_ssize_t m = p1.shape[1]
    cdef cnp.ndarray[double, ndim=1] values = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] alphas = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] coef_buf = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] base_buf = np.empty(m, dtype=np.float64)
    cdef double* coef = <double*> cnp.PyArray_DATA(coef_buf)
    cdef double* base = <double*> cnp.PyArray_DATA(base_buf)
    cdef int iters = 0
    if tol < 1.0:
        iters = <int> ceil(log(tol) / log(INVPHI))
    cdef Py_ssize_t i, j, k
    cdef bint equal
    cdef double a, b, lo, hi, c, d, fc, fd, xc, xd, fnew, xm, best, f0, f1, alpha
    for i in range(n):
        k = 0
        equal = True
        for j in range(m):
            a = p1[i, j]
            b = p2[i, j]
            if a != b:
                equal = False
            if a > 0.0 and b > 0.0:
                base[k] = log(b)
                coef[k] = log(a) - base[k]
                k += 1
        if equal:
            values[i] = 0.0
            alphas[i] = 0.5
            continue
        if k == 0:
            values[i] = np.inf
            alphas[i] = np.nan
            continue
        lo = 0.0
        hi = 1.0
        c = lo + INVPHI2 * (hi - lo)
        d = lo + INVPHI * (hi - lo)
        fc = _objective(coef, base, k, c)
        fd = _objective(coef, base, k, d)
        for j in range(iters):
            if fc < fd:
                hi = d
                xc = lo + INVPHI2 * (hi - lo)
                d = c
                fd = fc
                c = xc
                fc = _objective(coef, base, k, c)
            else:
                lo = c
                xd = lo + INVPHI * (hi - lo)
                c = d
                fc = fd
                d = xd
                fd = _objective(coef, base, k, d)
        xm = 0.5 * (lo + hi)
        best = _objective(coef, base, k, xm)
        alpha = xm
        f0 = _objective(coef, base, k, 0.0)
        f1 = _objective(coef, base, k, 1.0)
        if f0 <= best:
            alpha = 0.0
            best = f0
        if f1 < best:
            alpha = 1.0
            best = f1
        values[i] = -best if best != 0.0 else 0.0
        alphas[i] = alpha
    return values, alphas


def bin_means(double[::1] z, cnp.int64_t[::1] order, cnp.int64_t[::1] edges):
    """Segment means of z under a permutation; see `_pure.bin_means`."""
    cdef Py_ssize_t nbins = edges.shape[0] - 1
    cdef cnp.ndarray[double, ndim=1] out = np.empty(nbins, dtype=np.float64)
    cdef Py_ssize_t b, j
    cdef double s
    for b in range(nbins):
        s = 0.0
        for j in range(edges[b], edges[b + 1]):
            s += z[order[j]]
        out[b] = s / (edges[b + 1] - edges[b])
    return out
