# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled inner loops for the clustering iterations.

Mirrors the semantics of ``pcmkit.kernels._pure`` exactly; the pure
backend is the reference implementation.  Reductions run in fixed index
order, so results are deterministic.
"""

from libc.math cimport exp, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double EXP_FLUSH = -700.0


cdef inline double _flush_exp(double exponent) nogil:
    if exponent < EXP_FLUSH:
        return 0.0
    return exp(exponent)


def distance_matrix(double[:, ::1] points, double[:, ::1] theta):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef Py_ssize_t m = theta.shape[0]
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] dist = out
    cdef Py_ssize_t i, j, k
    cdef double acc, diff
    with nogil:
        for i in range(n):
            for j in range(m):
                acc = 0.0
                for k in range(d):
                    diff = points[i, k] - theta[j, k]
                    acc += diff * diff
                dist[i, j] = sqrt(acc)
    return out


def pcm_membership(double[:, ::1] dist, double[::1] gamma):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t m = dist.shape[1]
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] u = out
    cdef Py_ssize_t i, j
    cdef double d
    with nogil:
        for i in range(n):
            for j in range(m):
                d = dist[i, j]
                u[i, j] = _flush_exp(-(d * d) / gamma[j])
    return out


def marginal_membership_matrix(double[:, ::1] dist, double[::1] eta, double sigma_v):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t m = dist.shape[1]
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] u = out
    cdef Py_ssize_t i, j
    cdef double d, root, gamma
    if sigma_v == 0.0:
        with nogil:
            for i in range(n):
                for j in range(m):
                    d = dist[i, j]
                    u[i, j] = _flush_exp(-(d * d) / (eta[j] * eta[j]))
        return out
    with nogil:
        for i in range(n):
            for j in range(m):
                d = dist[i, j]
                if d == 0.0:
                    u[i, j] = 1.0
                    continue
                root = 0.5 * eta[j] + 0.5 * sqrt(eta[j] * eta[j] + 4.0 * sigma_v * d)
                gamma = root * root
                u[i, j] = _flush_exp(-(d * d) / gamma)
    return out


def cut_weighted_means(double[:, ::1] points, double[:, ::1] memberships,
                       double[:, ::1] theta_old, double threshold):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef Py_ssize_t m = memberships.shape[1]
    theta_arr = np.empty((m, d), dtype=np.float64)
    updated_arr = np.zeros(m, dtype=np.bool_)
    num_arr = np.zeros(d, dtype=np.float64)
    cdef double[:, ::1] theta_new = theta_arr
    cdef cnp.uint8_t[::1] updated = updated_arr.view(np.uint8)
    cdef double[::1] num = num_arr
    cdef Py_ssize_t i, j, k
    cdef double den, w
    for j in range(m):
        den = 0.0
        for k in range(d):
            num[k] = 0.0
        with nogil:
            for i in range(n):
                w = memberships[i, j]
                if w >= threshold:
                    den += w
                    for k in range(d):
                        num[k] += w * points[i, k]
        if den > 0.0:
            for k in range(d):
                theta_new[j, k] = num[k] / den
            updated[j] = 1
        else:
            for k in range(d):
                theta_new[j, k] = theta_old[j, k]
    return theta_arr, updated_arr


def label_mean_abs_dev(double[:, ::1] points, cnp.int64_t[::1] labels,
                       double[:, ::1] theta, Py_ssize_t m):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    eta_arr = np.zeros(m, dtype=np.float64)
    counts_arr = np.zeros(m, dtype=np.int64)
    cdef double[::1] sums = eta_arr
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef Py_ssize_t i, k, j
    cdef double acc, diff
    with nogil:
        for i in range(n):
            j = <Py_ssize_t> labels[i]
            acc = 0.0
            for k in range(d):
                diff = points[i, k] - theta[j, k]
                acc += diff * diff
            sums[j] += sqrt(acc)
            counts[j] += 1
    for j in range(m):
        if counts[j] > 0:
            sums[j] = sums[j] / counts[j]
        else:
            sums[j] = 0.0
    return eta_arr, counts_arr
