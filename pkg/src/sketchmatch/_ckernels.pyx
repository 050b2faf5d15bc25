# cython: language_level=3
"""Compiled inner loops: distances from one query to a subset of stored rows,
and the argmax-increment scan shared by every greedy variant."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "cython"


def row_distances(const double[:, ::1] points, const double[::1] q,
                  const cnp.int64_t[::1] cand, double[::1] out):
    cdef Py_ssize_t k, j, r
    cdef Py_ssize_t m = points.shape[1]
    cdef double acc, diff
    if q.shape[0] != m:
        raise ValueError("query length does not match row length")
    with nogil:
        for k in range(cand.shape[0]):
            r = cand[k]
            acc = 0.0
            for j in range(m):
                diff = points[r, j] - q[j]
                acc = acc + diff * diff
            out[k] = sqrt(acc)
    return np.asarray(out[:cand.shape[0]])


def argmax_increment(const double[::1] dists, const double[::1] w,
                     const cnp.int64_t[::1] cand):
    cdef Py_ssize_t k
    cdef Py_ssize_t best = -1
    cdef double inc, best_inc = 0.0
    for k in range(cand.shape[0]):
        inc = dists[k] - w[cand[k]]
        if best == -1 or inc > best_inc:
            best = k
            best_inc = inc
    return best, best_inc
