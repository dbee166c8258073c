# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport acos, exp, log, sqrt

cnp.import_array()


cdef inline double _clip(double c) noexcept nogil:
    if c > 1.0:
        return 1.0
    if c < -1.0:
        return -1.0
    return c


cdef double _max_dot(const double[:, ::1] X) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0], i, j
    cdef double best = -2.0, d
    for i in range(n):
        for j in range(i + 1, n):
            d = X[i, 0] * X[j, 0] + X[i, 1] * X[j, 1] + X[i, 2] * X[j, 2]
            if d > best:
                best = d
    return best


def min_separation(X):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef double d
    with nogil:
        d = _max_dot(x)
    return acos(_clip(d))


def min_separation_batch(F):
    cdef const double[:, :, ::1] f = np.ascontiguousarray(F, dtype=np.float64)
    cdef Py_ssize_t k = f.shape[0], a
    out = np.empty(k, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for a in range(k):
            o[a] = acos(_clip(_max_dot(f[a])))
    return out


def softmin_grad(X, double beta):
    cdef const double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], i, j, p, a
    cdef Py_ssize_t npairs = n * (n - 1) // 2
    cdef double[::1] th = np.empty(npairs)
    cdef double[::1] cs = np.empty(npairs)
    g_arr = np.zeros((n, 3))
    cdef double[:, ::1] g = g_arr
    cdef double c, m = 10.0, s = 0.0, w, k, val
    with nogil:
        p = 0
        for i in range(n):
            for j in range(i + 1, n):
                c = _clip(x[i, 0] * x[j, 0] + x[i, 1] * x[j, 1] + x[i, 2] * x[j, 2])
                cs[p] = c
                th[p] = acos(c)
                if th[p] < m:
                    m = th[p]
                p += 1
        for p in range(npairs):
            s += exp(-beta * (th[p] - m))
        val = m - log(s) / beta
        p = 0
        for i in range(n):
            for j in range(i + 1, n):
                c = cs[p]
                w = exp(-beta * (th[p] - m)) / s
                k = 1.0 - c * c
                k = w / (sqrt(k) if k > 1e-24 else 1e-12)
                for a in range(3):
                    g[i, a] -= k * (x[j, a] - c * x[i, a])
                    g[j, a] -= k * (x[i, a] - c * x[j, a])
                p += 1
    return val, g_arr
