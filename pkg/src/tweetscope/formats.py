"""Versioned binary artifact formats.

All vector payloads are little-endian float32. The embedding container is
the wire format: [magic "EMB1"][u32 dim][records: u16 id-length, id bytes
(UTF-8), dim float32]. Reducer and cluster models get the same treatment
with their own magics; loaders verify magic and version and fail loudly.
"""

import struct

import numpy as np

from tweetscope.clustering import ClusterModel
from tweetscope.embedding import EmbeddingMatrix, ReducerModel
from tweetscope.errors import DataError

EMB_MAGIC = b"EMB1"
REDUCER_MAGIC = b"RED1"
KMEANS_MAGIC = b"KMN1"
FORMAT_VERSION = 1


def _write_id(fh, doc_id: str):
    raw = doc_id.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise DataError(f"id too long for format: {doc_id[:32]}...")
    fh.write(struct.pack("<H", len(raw)))
    fh.write(raw)


def _read_exact(fh, n, what):
    data = fh.read(n)
    if len(data) != n:
        raise DataError(f"truncated file while reading {what}")
    return data


def _read_id(fh) -> str:
    (length,) = struct.unpack("<H", _read_exact(fh, 2, "id length"))
    return _read_exact(fh, length, "id bytes").decode("utf-8")


def write_embeddings(matrix: EmbeddingMatrix, path):
    rows32 = matrix.rows.astype(np.float32)
    with open(path, "wb") as fh:
        fh.write(EMB_MAGIC)
        fh.write(struct.pack("<I", matrix.dim))
        for doc_id, row in zip(matrix.ids, rows32):
            _write_id(fh, doc_id)
            fh.write(row.tobytes())
    return path


def read_embeddings(path) -> EmbeddingMatrix:
    with open(path, "rb") as fh:
        magic = _read_exact(fh, 4, "magic")
        if magic != EMB_MAGIC:
            raise DataError(f"bad magic in {path}: {magic!r}")
        (dim,) = struct.unpack("<I", _read_exact(fh, 4, "dim"))
        ids = []
        rows = []
        row_bytes = 4 * dim
        while True:
            head = fh.read(2)
            if not head:
                break
            if len(head) != 2:
                raise DataError("truncated file while reading id length")
            (length,) = struct.unpack("<H", head)
            ids.append(_read_exact(fh, length, "id bytes").decode("utf-8"))
            rows.append(np.frombuffer(_read_exact(fh, row_bytes, "vector"), dtype="<f4"))
    data = np.array(rows, dtype=np.float64) if rows else np.zeros((0, dim))
    return EmbeddingMatrix(ids=ids, rows=data)


def read_embeddings_tsv(path) -> EmbeddingMatrix:
    """TSV fallback: id<TAB>comma-separated floats, one record per line."""
    ids = []
    rows = []
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                doc_id, payload = line.split("\t", 1)
                vec = np.array([float(x) for x in payload.split(",")], dtype=np.float64)
            except ValueError as exc:
                raise DataError(f"{path}:{line_no}: bad record ({exc})") from exc
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise DataError(f"{path}:{line_no}: dim {len(vec)} != {dim}")
            ids.append(doc_id)
            rows.append(vec)
    if dim is None:
        raise DataError(f"empty embedding file: {path}")
    return EmbeddingMatrix(ids=ids, rows=np.array(rows))


def write_reducer(model: ReducerModel, path):
    with open(path, "wb") as fh:
        fh.write(REDUCER_MAGIC)
        fh.write(struct.pack("<III", FORMAT_VERSION, model.input_dim, model.latent_dim))
        fh.write(struct.pack("<d", model.train_mse))
        fh.write(model.mean.astype(np.float32).tobytes())
        fh.write(model.encoder.astype(np.float32).tobytes())
        fh.write(model.decoder.astype(np.float32).tobytes())
    return path


def read_reducer(path) -> ReducerModel:
    with open(path, "rb") as fh:
        magic = _read_exact(fh, 4, "magic")
        if magic != REDUCER_MAGIC:
            raise DataError(f"bad magic in {path}: {magic!r}")
        version, input_dim, latent_dim = struct.unpack("<III", _read_exact(fh, 12, "header"))
        if version != FORMAT_VERSION:
            raise DataError(f"unsupported reducer version {version}")
        (train_mse,) = struct.unpack("<d", _read_exact(fh, 8, "train_mse"))
        mean = np.frombuffer(_read_exact(fh, 4 * input_dim, "mean"), dtype="<f4").astype(np.float64)
        enc = np.frombuffer(
            _read_exact(fh, 4 * latent_dim * input_dim, "encoder"), dtype="<f4"
        ).astype(np.float64)
        dec = np.frombuffer(
            _read_exact(fh, 4 * input_dim * latent_dim, "decoder"), dtype="<f4"
        ).astype(np.float64)
    return ReducerModel(
        input_dim=input_dim,
        latent_dim=latent_dim,
        mean=mean,
        encoder=enc.reshape(latent_dim, input_dim),
        decoder=dec.reshape(input_dim, latent_dim),
        train_mse=train_mse,
    )


def write_kmeans(model: ClusterModel, path):
    with open(path, "wb") as fh:
        fh.write(KMEANS_MAGIC)
        fh.write(struct.pack("<III", FORMAT_VERSION, model.k, model.latent_dim))
        fh.write(struct.pack("<qdI", model.seed, model.inertia, model.iterations_run))
        parent = -1 if model.parent_cluster is None else model.parent_cluster
        fh.write(struct.pack("<i", parent))
        fh.write(model.centroids.astype(np.float32).tobytes())
        fh.write(struct.pack("<I", len(model.ids)))
        for doc_id, label in zip(model.ids, model.labels):
            _write_id(fh, doc_id)
            fh.write(struct.pack("<I", int(label)))
    return path


def read_kmeans(path) -> ClusterModel:
    with open(path, "rb") as fh:
        magic = _read_exact(fh, 4, "magic")
        if magic != KMEANS_MAGIC:
            raise DataError(f"bad magic in {path}: {magic!r}")
        version, k, latent_dim = struct.unpack("<III", _read_exact(fh, 12, "header"))
        if version != FORMAT_VERSION:
            raise DataError(f"unsupported kmeans version {version}")
        seed, inertia, iterations_run = struct.unpack("<qdI", _read_exact(fh, 20, "fit stats"))
        (parent,) = struct.unpack("<i", _read_exact(fh, 4, "parent cluster"))
        centroids = np.frombuffer(
            _read_exact(fh, 4 * k * latent_dim, "centroids"), dtype="<f4"
        ).astype(np.float64)
        (n,) = struct.unpack("<I", _read_exact(fh, 4, "assignment count"))
        ids = []
        labels = np.empty(n, dtype=np.int64)
        for i in range(n):
            ids.append(_read_id(fh))
            (labels[i],) = struct.unpack("<I", _read_exact(fh, 4, "label"))
    return ClusterModel(
        k=k,
        latent_dim=latent_dim,
        centroids=centroids.reshape(k, latent_dim),
        ids=ids,
        labels=labels,
        seed=seed,
        inertia=inertia,
        iterations_run=iterations_run,
        parent_cluster=None if parent < 0 else parent,
    )
