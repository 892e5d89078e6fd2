import math
import random

import numpy as np
import pytest

from tweetscope import embedding
from tweetscope.errors import ConfigError, CoverageError, DataError, ShapeError
from util import clean_tweet

# --- reference implementation of the documented n-gram hash ----------------
# kept deliberately separate from the package code: this is the oracle.

_M64 = (1 << 64) - 1


def _ref_mix(x):
    x &= _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def ref_embed(text, dim, seed):
    basis = (0xCBF29CE484222325 ^ _ref_mix(seed)) & _M64
    out = [0.0] * dim
    data = text.lower().encode("utf-8")
    for n in (3, 4, 5):
        for i in range(len(data) - n + 1):
            h = basis
            for b in data[i : i + n]:
                h = ((h ^ b) * 0x100000001B3) & _M64
            h = _ref_mix(h)
            out[h % dim] += 1.0 if (h >> 63) == 0 else -1.0
    norm = math.sqrt(sum(v * v for v in out))
    return [v / norm for v in out] if norm else out


class TestHashedEmbed:
    def test_matches_reference_implementation(self):
        for text in ("crypto pump signal", "hello", "ab", "naïve 日本語"):
            got = embedding.hashed_ngram_embed(text, 64, 7)
            assert np.array_equal(got, np.array(ref_embed(text, 64, 7)))

    def test_empty_text_gives_flagged_zero_vector(self):
        v = embedding.hashed_ngram_embed("", 64, 7)
        assert not v.any()

    def test_deterministic(self):
        a = embedding.hashed_ngram_embed("same text", 128, 3)
        b = embedding.hashed_ngram_embed("same text", 128, 3)
        assert np.array_equal(a, b)

    def test_seed_changes_vector(self):
        a = embedding.hashed_ngram_embed("same text", 128, 3)
        b = embedding.hashed_ngram_embed("same text", 128, 4)
        assert not np.array_equal(a, b)

    def test_near_duplicate_scores_higher_than_unrelated(self):
        # both similarities computed from the reference implementation too
        a = ref_embed("crypto pump signal", 256, 0)
        b = ref_embed("crypto pump signals", 256, 0)
        c = ref_embed("national power outage", 256, 0)
        ref_close = sum(x * y for x, y in zip(a, b))
        ref_far = sum(x * y for x, y in zip(a, c))
        assert ref_close > ref_far

        va = embedding.hashed_ngram_embed("crypto pump signal", 256, 0)
        vb = embedding.hashed_ngram_embed("crypto pump signals", 256, 0)
        vc = embedding.hashed_ngram_embed("national power outage", 256, 0)
        assert float(va @ vb) == pytest.approx(ref_close)
        assert float(va @ vc) == pytest.approx(ref_far)
        assert float(va @ vb) > float(va @ vc)

    def test_unit_norm(self):
        v = embedding.hashed_ngram_embed("some text here", 64, 1)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)

    def test_dim_floor(self):
        with pytest.raises(ConfigError):
            embedding.hashed_ngram_embed("x", 4, 0)


class TestEmbedCorpus:
    def test_shape_contract(self):
        tweets = [clean_tweet(f"t{i}", f"text number {i}") for i in range(3)]
        m = embedding.embed_corpus(tweets, embedding.HashedNgramProvider(dim=64, seed=0))
        assert (len(m), m.dim) == (3, 64)
        assert m.ids == ["t0", "t1", "t2"]

    def test_precomputed_coverage_error_names_missing(self):
        tweets = [clean_tweet(f"t{i}") for i in range(3)]
        provider = embedding.PrecomputedProvider(
            {"t0": np.ones(4), "t2": np.ones(4)}, dim=4
        )
        with pytest.raises(CoverageError) as err:
            embedding.embed_corpus(tweets, provider)
        assert err.value.missing_ids == ["t1"]

    def test_identical_texts_identical_rows(self):
        tweets = [clean_tweet("a", "same words"), clean_tweet("b", "same words")]
        m = embedding.embed_corpus(tweets, embedding.HashedNgramProvider(dim=64, seed=0))
        assert np.array_equal(m.rows[0], m.rows[1])


def _svd_oracle(rows):
    """Population-covariance eigenvalues and principal directions via SVD
    of the centered data (independent of the engine's eigh-on-covariance)."""
    centered = rows - rows.mean(axis=0)
    _, s, vt = np.linalg.svd(centered, full_matrices=True)
    eigvals = np.zeros(rows.shape[1])
    eigvals[: len(s)] = (s * s) / rows.shape[0]
    return eigvals, vt


class TestFitReducer:
    def test_lossless_when_latent_equals_input(self):
        rng = np.random.default_rng(0)
        m = embedding.EmbeddingMatrix([f"t{i}" for i in range(40)], rng.normal(size=(40, 8)))
        model = embedding.fit_reducer(m, 8)
        assert model.train_mse <= 1e-10

    def test_exact_rank_three(self):
        rng = np.random.default_rng(1)
        rows = rng.normal(size=(50, 3)) @ rng.normal(size=(3, 10))
        m = embedding.EmbeddingMatrix([f"t{i}" for i in range(50)], rows)
        model = embedding.fit_reducer(m, 3)
        assert model.train_mse <= 1e-8

    def test_train_mse_matches_eigen_oracle(self):
        rng = np.random.default_rng(2)
        rows = rng.normal(size=(200, 16)) * rng.uniform(0.1, 3.0, size=16)
        m = embedding.EmbeddingMatrix([f"t{i}" for i in range(200)], rows)
        eigvals, _ = _svd_oracle(rows)
        for latent in (1, 4, 9, 16):
            model = embedding.fit_reducer(m, latent)
            expected = float(eigvals[latent:].sum())
            assert model.train_mse == pytest.approx(expected, rel=1e-6, abs=1e-12)
            # and against the definition itself: mean squared recon error
            recon = embedding.decode(model, embedding.encode(model, rows))
            direct = float(np.mean(np.sum((rows - recon) ** 2, axis=1)))
            assert model.train_mse == pytest.approx(direct, rel=1e-6, abs=1e-12)

    def test_monotone_in_latent_dim(self):
        rng = np.random.default_rng(3)
        m = embedding.EmbeddingMatrix([f"t{i}" for i in range(60)], rng.normal(size=(60, 12)))
        losses = [embedding.fit_reducer(m, L).train_mse for L in range(1, 13)]
        assert all(a >= b - 1e-12 for a, b in zip(losses, losses[1:]))

    def test_encoder_orthonormal(self):
        rng = np.random.default_rng(4)
        m = embedding.EmbeddingMatrix([f"t{i}" for i in range(80)], rng.normal(size=(80, 10)))
        model = embedding.fit_reducer(m, 6)
        gram = model.encoder @ model.encoder.T
        assert np.abs(gram - np.eye(6)).max() <= 1e-8
        assert np.array_equal(model.decoder, model.encoder.T)

    def test_sign_convention_pins_directions(self):
        rng = np.random.default_rng(5)
        m = embedding.EmbeddingMatrix([f"t{i}" for i in range(50)], rng.normal(size=(50, 6)))
        model = embedding.fit_reducer(m, 6)
        for row in model.encoder:
            assert row[np.argmax(np.abs(row))] > 0

    def test_rank_deficient_input_handled(self):
        rows = np.zeros((10, 5))
        rows[:, 0] = np.arange(10.0)
        m = embedding.EmbeddingMatrix([f"t{i}" for i in range(10)], rows)
        model = embedding.fit_reducer(m, 5)
        assert model.train_mse <= 1e-10

    def test_latent_too_large_rejected(self):
        m = embedding.EmbeddingMatrix(["a", "b"], np.eye(2))
        with pytest.raises(ConfigError):
            embedding.fit_reducer(m, 3)


class TestEncodeDecode:
    def _model(self, seed=6, n=60, dim=10, latent=4):
        rng = np.random.default_rng(seed)
        rows = rng.normal(size=(n, dim))
        m = embedding.EmbeddingMatrix([f"t{i}" for i in range(n)], rows)
        return embedding.fit_reducer(m, latent), rows

    def test_encode_of_mean_is_zero(self):
        model, _ = self._model()
        assert np.abs(embedding.encode(model, model.mean)).max() <= 1e-12

    def test_lossless_round_trip(self):
        model, rows = self._model(latent=10)
        v = rows[3]
        back = embedding.decode(model, embedding.encode(model, v))
        assert np.abs(back - v).max() <= 1e-8

    def test_vector_in_top_k_span_round_trips(self):
        model, rows = self._model(seed=7, latent=4)
        _, vt = _svd_oracle(rows)
        v = model.mean + 2.0 * vt[0] - 1.5 * vt[2]  # inside the top-4 span
        back = embedding.decode(model, embedding.encode(model, v))
        assert np.abs(back - v).max() <= 1e-8

    def test_dimension_mismatch(self):
        model, _ = self._model()
        with pytest.raises(ShapeError):
            embedding.encode(model, np.zeros(3))
        with pytest.raises(ShapeError):
            embedding.decode(model, np.zeros(9))


class TestNnSearch:
    def _index(self, n=500, dim=16, seed=8, clusters=False):
        rng = np.random.default_rng(seed)
        rows = rng.normal(size=(n, dim))
        ids = [f"t{i:04d}" for i in range(n)]
        m = embedding.EmbeddingMatrix(ids, rows)
        tags = {doc_id: i % 3 for i, doc_id in enumerate(ids)} if clusters else None
        return embedding.build_index(m, cluster_assignments=tags), rows

    def test_self_match_first(self):
        index, rows = self._index()
        hits = embedding.nn_search(index, rows[42], k=5)
        assert hits[0][0] == "t0042"
        assert hits[0][1] == pytest.approx(1.0, abs=1e-9)

    def test_k_saturation_returns_all_sorted(self):
        index, rows = self._index(n=10)
        hits = embedding.nn_search(index, rows[0], k=99)
        assert len(hits) == 10
        sims = [s for _, s in hits]
        assert sims == sorted(sims, reverse=True)

    def test_matches_exhaustive_oracle(self):
        index, rows = self._index()
        rng = np.random.default_rng(9)
        for _ in range(20):
            q = rng.normal(size=16)
            qn = q / np.linalg.norm(q)
            # oracle: plain python loop over rows
            sims = {}
            for i, doc_id in enumerate(index.ids):
                r = index.rows[i]
                sims[doc_id] = float(np.dot(r, qn))
            expected = sorted(sims.items(), key=lambda kv: (-kv[1], kv[0]))[:7]
            got = embedding.nn_search(index, q, k=7)
            assert [doc_id for doc_id, _ in got] == [doc_id for doc_id, _ in expected]
            got_sims = np.array([s for _, s in got])
            exp_sims = np.array([s for _, s in expected])
            assert np.allclose(got_sims, exp_sims, atol=1e-12)

    def test_tie_break_by_ascending_id(self):
        rows = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        m = embedding.EmbeddingMatrix(["b", "a", "c"], rows)
        index = embedding.build_index(m)
        hits = embedding.nn_search(index, np.array([1.0, 0.0]), k=2)
        assert [doc_id for doc_id, _ in hits] == ["a", "b"]

    def test_cluster_filter_restricts_candidates(self):
        index, rows = self._index(clusters=True)
        hits = embedding.nn_search(index, rows[1], k=50, cluster_filter=1)
        assert all(int(doc_id[1:]) % 3 == 1 for doc_id, _ in hits)

    def test_zero_query_rejected(self):
        index, _ = self._index(n=10)
        with pytest.raises(DataError):
            embedding.nn_search(index, np.zeros(16), k=1)

    def test_zero_rows_excluded_and_reported(self):
        rows = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
        m = embedding.EmbeddingMatrix(["a", "z", "b"], rows)
        index = embedding.build_index(m)
        assert index.excluded_ids == ["z"]
        assert len(index.ids) == 2

    def test_cosine_symmetry(self):
        rng = np.random.default_rng(10)
        from tweetscope import kernels

        for _ in range(50):
            a = rng.normal(size=8)
            b = rng.normal(size=8)
            a /= np.linalg.norm(a)
            b /= np.linalg.norm(b)
            ab = float(kernels.dot_products(np.ascontiguousarray(a[None, :]), np.ascontiguousarray(b))[0])
            ba = float(kernels.dot_products(np.ascontiguousarray(b[None, :]), np.ascontiguousarray(a))[0])
            assert abs(ab - ba) <= 1e-12
