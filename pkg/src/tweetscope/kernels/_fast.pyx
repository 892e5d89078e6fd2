# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels. Semantics match tweetscope.kernels._ref exactly;
the n-gram hash is bit-identical, float reductions are naive left-to-right."""

import numpy as np

from libc.stdint cimport int64_t, uint64_t

cdef uint64_t FNV_OFFSET = 0xCBF29CE484222325UL
cdef uint64_t FNV_PRIME = 0x100000001B3UL


cdef inline uint64_t mix64(uint64_t x) noexcept nogil:
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9UL
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBUL
    return x ^ (x >> 31)


def hashed_ngram_counts(list texts, int dim, seed):
    """Signed bucket counts of char 3/4/5-grams per UTF-8 byte string."""
    cdef uint64_t basis = FNV_OFFSET ^ mix64(<uint64_t> (seed & 0xFFFFFFFFFFFFFFFF))
    out_arr = np.zeros((len(texts), dim), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef const unsigned char[::1] buf
    cdef Py_ssize_t row, i, j, m
    cdef int n
    cdef uint64_t h
    cdef uint64_t udim = <uint64_t> dim
    for row in range(len(texts)):
        data = texts[row]
        buf = data
        m = buf.shape[0]
        for n in range(3, 6):
            for i in range(m - n + 1):
                h = basis
                for j in range(n):
                    h = (h ^ <uint64_t> buf[i + j]) * FNV_PRIME
                h = mix64(h)
                if (h >> 63) == 0:
                    out[row, <Py_ssize_t> (h % udim)] += 1.0
                else:
                    out[row, <Py_ssize_t> (h % udim)] -= 1.0
    return out_arr


def sqdist_argmin(double[:, ::1] points, double[:, ::1] centroids):
    """Nearest centroid per point; ties resolve to the lowest index."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t k = centroids.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    labels_arr = np.empty(n, dtype=np.int64)
    dists_arr = np.empty(n, dtype=np.float64)
    cdef int64_t[::1] labels = labels_arr
    cdef double[::1] dists = dists_arr
    cdef Py_ssize_t i, j, c
    cdef double best, acc, diff
    cdef int64_t best_j
    with nogil:
        for i in range(n):
            best = -1.0
            best_j = 0
            for j in range(k):
                acc = 0.0
                for c in range(d):
                    diff = points[i, c] - centroids[j, c]
                    acc += diff * diff
                if best < 0.0 or acc < best:
                    best = acc
                    best_j = j
            labels[i] = best_j
            dists[i] = best
    return labels_arr, dists_arr


def group_sums(double[:, ::1] points, int64_t[::1] labels, int k):
    """Per-label row sums and counts, accumulated in row order."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    sums_arr = np.zeros((k, d), dtype=np.float64)
    counts_arr = np.zeros(k, dtype=np.int64)
    cdef double[:, ::1] sums = sums_arr
    cdef int64_t[::1] counts = counts_arr
    cdef Py_ssize_t i, c
    cdef int64_t lab
    with nogil:
        for i in range(n):
            lab = labels[i]
            for c in range(d):
                sums[lab, c] += points[i, c]
            counts[lab] += 1
    return sums_arr, counts_arr


def dot_products(double[:, ::1] matrix, double[::1] query):
    """matrix @ query with naive per-row accumulation."""
    cdef Py_ssize_t n = matrix.shape[0]
    cdef Py_ssize_t d = matrix.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, c
    cdef double acc
    with nogil:
        for i in range(n):
            acc = 0.0
            for c in range(d):
                acc += matrix[i, c] * query[c]
            out[i] = acc
    return out_arr
