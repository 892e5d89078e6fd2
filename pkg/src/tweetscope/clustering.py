"""Seeded, reproducible K-means over reduced embeddings.

Initialization is k-means++ driven by the in-house splitmix64 stream, so
runs reproduce across platforms and library versions. Lloyd iterations use
a fixed accumulation order (see kernels) which makes fits bit-deterministic
for a fixed (data order, k, seed, backend).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from tweetscope import kernels
from tweetscope.errors import ConfigError, DataError, ShapeError
from tweetscope.prng import SplitMix64

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 300


@dataclass
class ClusterModel:
    k: int
    latent_dim: int
    centroids: np.ndarray  # (k, latent_dim)
    ids: list
    labels: np.ndarray  # int64 per row
    seed: int
    inertia: float
    iterations_run: int
    inertia_trace: list = field(default_factory=list)
    parent_cluster: Optional[int] = None

    @property
    def assignments(self) -> dict:
        return {doc_id: int(lab) for doc_id, lab in zip(self.ids, self.labels)}

    def members(self, cluster_id: int) -> list:
        return [doc_id for doc_id, lab in zip(self.ids, self.labels) if lab == cluster_id]

    def sizes(self) -> list:
        counts = np.bincount(self.labels, minlength=self.k)
        return [int(c) for c in counts]


def _plus_plus_init(data: np.ndarray, k: int, rng: SplitMix64) -> np.ndarray:
    n = data.shape[0]
    chosen = [rng.randrange(n)]
    diff = data - data[chosen[0]]
    d2 = np.einsum("ij,ij->i", diff, diff)
    while len(chosen) < k:
        total = float(d2.sum())
        if total <= 0.0:
            # all remaining mass on already-chosen coordinates; take the
            # first point not currently at distance 0 duplicate-safe
            candidates = np.nonzero(d2 > 0.0)[0]
            idx = int(candidates[0]) if len(candidates) else int(rng.randrange(n))
        else:
            r = rng.uniform() * total
            idx = int(min(np.searchsorted(np.cumsum(d2), r, side="right"), n - 1))
        chosen.append(idx)
        diff = data - data[idx]
        d2 = np.minimum(d2, np.einsum("ij,ij->i", diff, diff))
    return data[chosen].copy()


def _repair_empty(data, labels, min_dists, counts, centroids):
    """Reseed each empty cluster's centroid to the point farthest from its
    assigned centroid, reassigning that point (distance drops to 0, so the
    repair never increases inertia). The distinct-rows precondition
    guarantees a positive-distance donor exists while any hole remains."""
    repaired = False
    while True:
        empties = np.nonzero(counts == 0)[0]
        if len(empties) == 0:
            return repaired
        j = int(empties[0])
        far = int(np.argmax(min_dists))
        counts[labels[far]] -= 1
        counts[j] += 1
        labels[far] = j
        min_dists[far] = 0.0
        centroids[j] = data[far]
        repaired = True


def kmeans_fit(
    data: np.ndarray,
    k: int,
    seed: int,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    ids=None,
) -> ClusterModel:
    """k-means++ initialized Lloyd iterations, deterministic for fixed
    (data order, k, seed). Empty clusters are repaired by reseeding the
    centroid to the point farthest from its assigned centroid."""
    data = np.ascontiguousarray(np.asarray(data, dtype=np.float64))
    if data.ndim != 2:
        raise ShapeError("data must be a 2-D matrix")
    n = data.shape[0]
    if k <= 0:
        raise ConfigError("k must be positive")
    if tol <= 0:
        raise ConfigError("tol must be positive")
    if max_iter < 1:
        raise ConfigError("max_iter must be >= 1")
    distinct = np.unique(data, axis=0).shape[0] if n else 0
    if k > distinct:
        raise DataError(f"k={k} exceeds {distinct} distinct rows")
    if ids is None:
        ids = [str(i) for i in range(n)]
    elif len(ids) != n:
        raise DataError("ids length mismatch")

    rng = SplitMix64(seed)
    centroids = _plus_plus_init(data, k, rng)
    trace = []
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        labels, min_dists = kernels.sqdist_argmin(data, centroids)
        counts = np.bincount(labels, minlength=k)
        _repair_empty(data, labels, min_dists, counts, centroids)
        trace.append(float(min_dists.sum()))
        sums, counts = kernels.group_sums(data, labels, k)
        new_centroids = sums / counts[:, None]
        delta = new_centroids - centroids
        shift = float(np.sqrt(np.einsum("ij,ij->i", delta, delta)).max())
        centroids = new_centroids
        if shift < tol:
            break

    # final assignment against the converged centroids; repairs here are
    # pathological (duplicate centroids) but keep the no-empty invariant
    for _ in range(k + 1):
        labels, min_dists = kernels.sqdist_argmin(data, centroids)
        counts = np.bincount(labels, minlength=k)
        if not _repair_empty(data, labels, min_dists, counts, centroids):
            break
    inertia = float(min_dists.sum())
    trace.append(inertia)

    return ClusterModel(
        k=k,
        latent_dim=data.shape[1],
        centroids=centroids,
        ids=list(ids),
        labels=labels,
        seed=seed,
        inertia=inertia,
        iterations_run=iterations,
        inertia_trace=trace,
    )


def assign(model: ClusterModel, v: np.ndarray) -> int:
    """Nearest centroid for an out-of-sample vector; ties go to the lowest
    cluster id."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (model.latent_dim,):
        raise ShapeError(f"expected dim {model.latent_dim}, got {v.shape}")
    labels, _ = kernels.sqdist_argmin(
        np.ascontiguousarray(v[None, :]), np.ascontiguousarray(model.centroids)
    )
    return int(labels[0])


def subcluster(
    parent: ClusterModel,
    cluster_id: int,
    data: np.ndarray,
    k2: int,
    seed: int,
    ids=None,
) -> ClusterModel:
    """Independent K-means over one parent cluster's member rows; the
    result is tagged with the parent cluster id."""
    if cluster_id < 0 or cluster_id >= parent.k:
        raise ConfigError(f"cluster id {cluster_id} outside [0, {parent.k})")
    data = np.asarray(data, dtype=np.float64)
    if data.shape[0] == 0:
        raise DataError("cannot subcluster an empty cluster")
    model = kmeans_fit(data, k2, seed, ids=ids)
    model.parent_cluster = cluster_id
    return model
