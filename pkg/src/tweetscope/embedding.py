"""Per-tweet semantic vectors: pluggable providers, an optimal linear
autoencoder reduction, and cosine nearest-neighbor search.

The built-in provider hashes character 3-5-grams of the lowercased text
into signed buckets with a seeded 64-bit hash (FNV-1a + splitmix64
avalanche; bucket = hash mod dim, sign from the top bit) and L2-normalizes
the result. It is a deterministic stand-in for transformer sentence
encoders: not semantically comparable, but it preserves lexical
similarity, which is what the desk-scale fixtures exercise.

The reducer is the closed-form global optimum of the linear-autoencoder
reconstruction objective: mean-center, project on the top principal
directions of the covariance. train_mse is the mean squared L2
reconstruction error over rows, which equals the sum of the discarded
covariance eigenvalues (population scaling).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from tweetscope import kernels
from tweetscope.errors import ConfigError, CoverageError, DataError, ShapeError

DEFAULT_FALLBACK_DIM = 256
DEFAULT_LATENT_DIM = 32
MIN_HASH_DIM = 8


@dataclass
class EmbeddingMatrix:
    ids: list
    rows: np.ndarray  # (n, dim) float64

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2 or len(self.ids) != self.rows.shape[0]:
            raise ShapeError("ids/rows mismatch")
        if len(set(self.ids)) != len(self.ids):
            raise DataError("duplicate ids in embedding matrix")
        if not np.all(np.isfinite(self.rows)):
            raise DataError("non-finite embedding values")

    @property
    def dim(self):
        return self.rows.shape[1]

    def __len__(self):
        return self.rows.shape[0]


@dataclass
class ReducerModel:
    input_dim: int
    latent_dim: int
    mean: np.ndarray
    encoder: np.ndarray  # (latent_dim, input_dim), orthonormal rows
    decoder: np.ndarray  # (input_dim, latent_dim) = encoder.T
    train_mse: float


@dataclass
class NnIndex:
    ids: list
    rows: np.ndarray  # unit-normalized float64 copies
    cluster_ids: Optional[np.ndarray] = None  # int64 tag per row
    excluded_ids: list = field(default_factory=list)  # zero-vector ids left out

    @property
    def dim(self):
        return self.rows.shape[1]


def hashed_ngram_embed(text: str, dim: int = DEFAULT_FALLBACK_DIM, seed: int = 0) -> np.ndarray:
    """Deterministic hashed n-gram embedding of one text (L2-normalized;
    empty/too-short text yields the zero vector)."""
    return hashed_ngram_embed_batch([text], dim, seed)[0]


def hashed_ngram_embed_batch(texts, dim: int = DEFAULT_FALLBACK_DIM, seed: int = 0) -> np.ndarray:
    if dim < MIN_HASH_DIM:
        raise ConfigError(f"embedding dim must be >= {MIN_HASH_DIM}")
    payload = [t.lower().encode("utf-8") for t in texts]
    counts = kernels.hashed_ngram_counts(payload, dim, seed)
    norms = np.sqrt(np.einsum("ij,ij->i", counts, counts))
    safe = np.where(norms > 0.0, norms, 1.0)
    return counts / safe[:, None]


class HashedNgramProvider:
    """Total fallback provider over normalized tweet text."""

    name = "hashed"

    def __init__(self, dim: int = DEFAULT_FALLBACK_DIM, seed: int = 0):
        if dim < MIN_HASH_DIM:
            raise ConfigError(f"embedding dim must be >= {MIN_HASH_DIM}")
        self.dim = dim
        self.seed = seed

    def vectors_for(self, tweets) -> np.ndarray:
        return hashed_ngram_embed_batch([t.norm_text for t in tweets], self.dim, self.seed)

    def embed_text(self, text: str) -> np.ndarray:
        return hashed_ngram_embed(text, self.dim, self.seed)


class PrecomputedProvider:
    """Vectors loaded from a file; must cover every requested tweet id."""

    name = "precomputed"

    def __init__(self, vectors: dict, dim: int):
        self.vectors = vectors
        self.dim = dim

    def vectors_for(self, tweets) -> np.ndarray:
        missing = [t.id for t in tweets if t.id not in self.vectors]
        if missing:
            shown = ", ".join(missing[:10])
            raise CoverageError(
                f"precomputed vectors missing {len(missing)} ids: {shown}", missing
            )
        out = np.empty((len(tweets), self.dim), dtype=np.float64)
        for i, t in enumerate(tweets):
            out[i] = self.vectors[t.id]
        return out


def embed_corpus(tweets, provider) -> EmbeddingMatrix:
    """One vector per tweet, in input order."""
    tweets = list(tweets)
    rows = provider.vectors_for(tweets)
    return EmbeddingMatrix(ids=[t.id for t in tweets], rows=rows)


def fit_reducer(matrix: EmbeddingMatrix, latent_dim: int = DEFAULT_LATENT_DIM) -> ReducerModel:
    """Closed-form linear-autoencoder fit (principal subspace).

    Deterministic up to the documented sign convention: each direction is
    flipped so its largest-magnitude coordinate is positive.
    """
    rows = matrix.rows
    n, dim = rows.shape
    if latent_dim < 1 or latent_dim > dim:
        raise ConfigError(f"latent_dim must be in [1, {dim}], got {latent_dim}")
    if n < 2:
        raise DataError("need at least 2 rows to fit the reducer")

    mean = rows.mean(axis=0)
    centered = rows - mean
    cov = (centered.T @ centered) / n
    eigvals, eigvecs = np.linalg.eigh(cov)  # ascending
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    components = eigvecs[:, order].T  # rows are directions, descending variance

    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0

    encoder = np.ascontiguousarray(components[:latent_dim])
    train_mse = float(eigvals[latent_dim:].sum())
    return ReducerModel(
        input_dim=dim,
        latent_dim=latent_dim,
        mean=mean,
        encoder=encoder,
        decoder=np.ascontiguousarray(encoder.T),
        train_mse=train_mse,
    )


def encode(model: ReducerModel, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape[-1] != model.input_dim:
        raise ShapeError(f"expected input dim {model.input_dim}, got {v.shape[-1]}")
    return (v - model.mean) @ model.encoder.T


def decode(model: ReducerModel, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.shape[-1] != model.latent_dim:
        raise ShapeError(f"expected latent dim {model.latent_dim}, got {z.shape[-1]}")
    return z @ model.decoder.T + model.mean


def build_index(matrix: EmbeddingMatrix, cluster_assignments: Optional[dict] = None) -> NnIndex:
    """Unit-normalize rows into a search index; zero rows are excluded and
    reported via excluded_ids."""
    norms = np.sqrt(np.einsum("ij,ij->i", matrix.rows, matrix.rows))
    keep = norms > 0.0
    excluded = [matrix.ids[i] for i in np.nonzero(~keep)[0]]
    rows = matrix.rows[keep] / norms[keep][:, None]
    ids = [matrix.ids[i] for i in np.nonzero(keep)[0]]
    cluster_ids = None
    if cluster_assignments is not None:
        cluster_ids = np.array(
            [cluster_assignments.get(doc_id, -1) for doc_id in ids], dtype=np.int64
        )
    return NnIndex(
        ids=ids,
        rows=np.ascontiguousarray(rows),
        cluster_ids=cluster_ids,
        excluded_ids=excluded,
    )


def nn_search(index: NnIndex, query: np.ndarray, k: int, cluster_filter=None):
    """Top-k rows by cosine similarity, descending; ties break on ascending
    id. cluster_filter restricts candidates to one cluster tag."""
    if k < 1:
        raise ConfigError("k must be >= 1")
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (index.dim,):
        raise ShapeError(f"query dim {query.shape} != index dim {index.dim}")
    norm = float(np.sqrt(query @ query))
    if norm == 0.0:
        raise DataError("zero query vector has undefined cosine similarity")
    sims = kernels.dot_products(index.rows, query / norm)

    if cluster_filter is not None:
        if index.cluster_ids is None:
            raise ConfigError("index has no cluster tags to filter on")
        candidates = np.nonzero(index.cluster_ids == cluster_filter)[0]
    else:
        candidates = range(len(index.ids))

    ranked = sorted(((-sims[i], index.ids[i]) for i in candidates))
    return [(doc_id, -neg) for neg, doc_id in ranked[:k]]
