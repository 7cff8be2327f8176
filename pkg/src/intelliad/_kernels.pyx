# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for k-means and co-occurrence counting.

Behaviour mirrors intelliad._kernels_py exactly; see that module for the
contracts.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def assign_labels(X, C):
    cdef double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[:, ::1] c = np.ascontiguousarray(C, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], k = c.shape[0], d = x.shape[1]
    labels_arr = np.empty(n, dtype=np.int64)
    dist_arr = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef double[::1] dist = dist_arr
    cdef Py_ssize_t i, j, t, best
    cdef double acc, diff, best_d
    for i in range(n):
        best = 0
        best_d = 0.0
        for j in range(k):
            acc = 0.0
            for t in range(d):
                diff = x[i, t] - c[j, t]
                acc += diff * diff
            if j == 0 or acc < best_d:
                best_d = acc
                best = j
        labels[i] = best
        dist[i] = best_d
    return labels_arr, dist_arr


def update_centroids(X, labels_in, Py_ssize_t k):
    cdef double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef cnp.int64_t[::1] labels = np.ascontiguousarray(labels_in, dtype=np.int64)
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1]
    sums_arr = np.zeros((k, d), dtype=np.float64)
    counts_arr = np.zeros(k, dtype=np.int64)
    cdef double[:, ::1] sums = sums_arr
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef Py_ssize_t i, j, t
    for i in range(n):
        j = labels[i]
        counts[j] += 1
        for t in range(d):
            sums[j, t] += x[i, t]
    for j in range(k):
        if counts[j] > 0:
            for t in range(d):
                sums[j, t] /= counts[j]
    return sums_arr, counts_arr


def cooccurrence_counts(tokens_in, offsets_in, Py_ssize_t vocab_size, Py_ssize_t window):
    cdef cnp.int64_t[::1] tokens = np.ascontiguousarray(tokens_in, dtype=np.int64)
    cdef cnp.int64_t[::1] offsets = np.ascontiguousarray(offsets_in, dtype=np.int64)
    counts_arr = np.zeros((vocab_size, vocab_size), dtype=np.float64)
    cdef double[:, ::1] counts = counts_arr
    cdef Py_ssize_t doc, start, end, i, s, a, b
    for doc in range(offsets.shape[0] - 1):
        start = offsets[doc]
        end = offsets[doc + 1]
        for i in range(start, end):
            a = tokens[i]
            for s in range(1, window + 1):
                if i + s >= end:
                    break
                b = tokens[i + s]
                counts[a, b] += 1.0
                counts[b, a] += 1.0
    return counts_arr
