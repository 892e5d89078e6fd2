"""Pure NumPy/Python reference implementations of the hot kernels.

Semantics here are the contract; the Cython module `_fast` mirrors them.
The n-gram hash is bit-identical across backends (integer arithmetic).
Float reductions (distances, dot products) may differ from the compiled
backend by normal summation-order noise, never more.
"""

import numpy as np

from tweetscope.prng import MASK64, mix64

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _gram_hash(gram: bytes, basis: int) -> int:
    h = basis
    for b in gram:
        h = ((h ^ b) * _FNV_PRIME) & MASK64
    return mix64(h)


def hashed_ngram_counts(texts, dim, seed):
    """Signed bucket counts of char 3/4/5-grams for each UTF-8 byte string.

    Returns an (n, dim) float64 array of +-1 accumulations (unnormalized).
    """
    basis = (_FNV_OFFSET ^ mix64(seed)) & MASK64
    out = np.zeros((len(texts), dim), dtype=np.float64)
    cache = {}
    for row, data in enumerate(texts):
        m = len(data)
        for n in (3, 4, 5):
            for i in range(m - n + 1):
                gram = data[i : i + n]
                hit = cache.get(gram)
                if hit is None:
                    h = _gram_hash(gram, basis)
                    hit = (h % dim, 1.0 if (h >> 63) == 0 else -1.0)
                    cache[gram] = hit
                out[row, hit[0]] += hit[1]
    return out


def sqdist_argmin(points, centroids):
    """Index of the nearest centroid per point (squared Euclidean).

    Ties resolve to the lowest centroid index. Returns (labels, min_dists).
    """
    n = points.shape[0]
    k = centroids.shape[0]
    dists = np.empty((n, k), dtype=np.float64)
    for j in range(k):
        diff = points - centroids[j]
        dists[:, j] = np.einsum("ij,ij->i", diff, diff)
    labels = np.argmin(dists, axis=1)
    return labels.astype(np.int64), dists[np.arange(n), labels]


def group_sums(points, labels, k):
    """Per-label row sums and counts, accumulated in row order."""
    sums = np.zeros((k, points.shape[1]), dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    np.add.at(sums, labels, points)
    np.add.at(counts, labels, 1)
    return sums, counts


def dot_products(matrix, query):
    """matrix @ query as float64."""
    return matrix @ query
