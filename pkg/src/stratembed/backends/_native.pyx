# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: fused loops for the optimizer, distance computations and
the Ward agglomeration. Contracts match ``stratembed.backends.python``."""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, pow, sqrt

cnp.import_array()

NAME = "native"


def adam_step(double[::1] param, double[::1] grad, double[::1] m, double[::1] v,
              long step, double lr, double beta1, double beta2, double eps):
    cdef Py_ssize_t i, n = param.shape[0]
    cdef double c1 = 1.0 - pow(beta1, step)
    cdef double c2 = 1.0 - pow(beta2, step)
    cdef double g
    for i in range(n):
        g = grad[i]
        m[i] = beta1 * m[i] + (1.0 - beta1) * g
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g
        param[i] -= lr * (m[i] / c1) / (sqrt(v[i] / c2) + eps)


def pairwise_sqdist(double[:, ::1] x, double[:, ::1] c):
    cdef Py_ssize_t n = x.shape[0], k = c.shape[0], d = x.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, k), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, t
    cdef double acc, diff
    for i in range(n):
        for j in range(k):
            acc = 0.0
            for t in range(d):
                diff = x[i, t] - c[j, t]
                acc += diff * diff
            o[i, j] = acc
    return out


def soft_assign(double[:, ::1] z, double[:, ::1] centroids, double alpha):
    cdef Py_ssize_t n = z.shape[0], k = centroids.shape[0], d = z.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, k), dtype=np.float64)
    cdef double[:, ::1] q = out
    cdef Py_ssize_t i, j, t
    cdef double acc, diff, rowsum
    cdef double expo = -(alpha + 1.0) / 2.0
    for i in range(n):
        rowsum = 0.0
        for j in range(k):
            acc = 0.0
            for t in range(d):
                diff = z[i, t] - centroids[j, t]
                acc += diff * diff
            q[i, j] = pow(1.0 + acc / alpha, expo)
            rowsum += q[i, j]
        for j in range(k):
            q[i, j] /= rowsum
    return out


def ward_linkage(points):
    """Lance-Williams Ward merges; see the python backend for the contract."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef cnp.ndarray[double, ndim=2] dm = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] d = dm
    cdef double[:, ::1] x = pts
    cdef cnp.ndarray[long, ndim=2] merges = np.empty((n - 1, 3), dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] dists = np.empty(n - 1, dtype=np.float64)
    cdef long[:, ::1] mg = merges
    cdef double[::1] dv = dists
    cdef long[::1] ids = np.arange(n, dtype=np.int64)
    cdef long[::1] sizes = np.ones(n, dtype=np.int64)
    cdef Py_ssize_t a = n, step, i, j, p, q, t, last
    cdef Py_ssize_t dim = pts.shape[1]
    cdef double acc, diff, mval, nr
    cdef long li, lj, cl, cr, si, sj, sk

    for p in range(n):
        d[p, p] = INFINITY
        for q in range(p + 1, n):
            acc = 0.0
            for t in range(dim):
                diff = x[p, t] - x[q, t]
                acc += diff * diff
            d[p, q] = 0.5 * acc
            d[q, p] = d[p, q]

    for step in range(n - 1):
        # lexicographic minimum of (cost, left_id, right_id)
        mval = INFINITY
        i = 0
        j = 1
        li = -1
        lj = -1
        for p in range(a):
            for q in range(p + 1, a):
                if d[p, q] > mval:
                    continue
                if ids[p] < ids[q]:
                    cl = ids[p]
                    cr = ids[q]
                else:
                    cl = ids[q]
                    cr = ids[p]
                if d[p, q] < mval or cl < li or (cl == li and cr < lj):
                    mval = d[p, q]
                    i = p
                    j = q
                    li = cl
                    lj = cr

        mg[step, 0] = li
        mg[step, 1] = lj
        mg[step, 2] = n + step
        dv[step] = mval

        si = sizes[i]
        sj = sizes[j]
        for p in range(a):
            if p == i or p == j:
                continue
            sk = sizes[p]
            nr = ((si + sk) * d[i, p] + (sj + sk) * d[j, p] - sk * mval) / (si + sj + sk)
            d[i, p] = nr
            d[p, i] = nr
        ids[i] = n + step
        sizes[i] = si + sj

        last = a - 1
        if j != last:
            for p in range(a):
                d[j, p] = d[last, p]
                d[p, j] = d[p, last]
            d[j, j] = INFINITY
            ids[j] = ids[last]
            sizes[j] = sizes[last]
        a -= 1

    return merges, dists
