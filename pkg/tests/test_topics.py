import math
import random

import pytest

from tweetscope import topics
from tweetscope.errors import DataError
from util import tfidf_oracle, top_terms_oracle

# the 20-document hand-oracle corpus: small enough to check every weight
ORACLE_DOCS = [
    "crypto market pump pump",
    "crypto wallet security breach",
    "market dip buy buy buy",
    "wallet keys cold storage",
    "security audit smart contract",
    "pump signal group join",
    "exchange halted withdrawals today",
    "crypto exchange proof reserves",
    "smart contract exploit found",
    "breach exposed user keys",
    "buy signal market momentum",
    "cold wallet best practice",
    "audit report released today",
    "withdrawals resumed after audit",
    "momentum fading pump over",
    "reserves verified proof published",
    "user funds safe exchange",
    "storage costs keys management",
    "exploit patched contract redeployed",
    "group celebrates successful signal",
]


def _tokens(doc):
    return doc.split()


class TestTokenize:
    def test_basic(self):
        assert topics.tokenize("user check http") == ["user", "check", "http"]

    def test_digit_tokens_survive(self):
        assert topics.tokenize("Price: 000!!!") == ["price", "000"]
        assert topics.tokenize("up 10 percent 5") == ["up", "10", "percent", "5"]

    def test_single_letters_dropped(self):
        assert topics.tokenize("a I x yz") == ["yz"]

    def test_idempotent_on_rejoined_tokens(self):
        rng = random.Random(11)
        alphabet = "abc XYZ 0189 @#:.!? \t\n é日"
        for _ in range(1000):
            s = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
            toks = topics.tokenize(s)
            assert topics.tokenize(" ".join(toks)) == toks


class TestFitTfidf:
    def test_single_doc_idf_is_one(self):
        model = topics.fit_tfidf([["alpha", "beta", "alpha"]])
        assert all(v == pytest.approx(1.0) for v in model.idf)

    def test_term_in_every_doc_has_idf_one(self):
        docs = [["common", f"unique{i}"] for i in range(5)]
        model = topics.fit_tfidf(docs)
        assert model.idf[model.vocabulary["common"]] == pytest.approx(1.0)
        expected = math.log(6 / 2) + 1
        assert model.idf[model.vocabulary["unique3"]] == pytest.approx(expected)

    def test_twenty_doc_corpus_matches_oracle(self):
        docs = [_tokens(d) for d in ORACLE_DOCS]
        model = topics.fit_tfidf(docs)
        oracle_idf, oracle_weights = tfidf_oracle(docs)
        for term, col in model.vocabulary.items():
            assert model.idf[col] == pytest.approx(oracle_idf[term], abs=1e-9)
        terms = model.terms
        for d in range(len(docs)):
            got = {terms[col]: w for col, w in model.doc_weights[d].items()}
            assert set(got) == set(oracle_weights[d])
            for term, w in oracle_weights[d].items():
                assert got[term] == pytest.approx(w, abs=1e-9)

    def test_doc_vectors_unit_norm(self):
        docs = [_tokens(d) for d in ORACLE_DOCS]
        model = topics.fit_tfidf(docs)
        for w in model.doc_weights:
            norm = math.sqrt(sum(v * v for v in w.values()))
            assert norm == pytest.approx(1.0, abs=1e-9)

    def test_all_empty_corpus_rejected(self):
        with pytest.raises(DataError):
            topics.fit_tfidf([[], []])


class TestTopTerms:
    def test_single_doc_single_term(self):
        model = topics.fit_tfidf([["only"]])
        assert topics.top_terms(model, [0], 3)[0][0] == "only"

    def test_n_beyond_vocabulary_returns_whole_vocabulary(self):
        docs = [_tokens(d) for d in ORACLE_DOCS[:5]]
        model = topics.fit_tfidf(docs)
        ranked = topics.top_terms(model, [0, 1], 10_000)
        assert len(ranked) == len(model.vocabulary)

    def test_matches_oracle_ranking(self):
        docs = [_tokens(d) for d in ORACLE_DOCS]
        model = topics.fit_tfidf(docs)
        _, oracle_weights = tfidf_oracle(docs)
        for subset in ([0, 1, 2], [5, 6, 7, 8], list(range(20))):
            expected = top_terms_oracle(oracle_weights, subset, 5)
            got = topics.top_terms(model, subset, 5)
            assert [t for t, _ in got] == [t for t, _ in expected]
            for (_, gs), (_, es) in zip(got, expected):
                assert gs == pytest.approx(es, abs=1e-9)

    def test_empty_subset_rejected(self):
        model = topics.fit_tfidf([["x", "y"]])
        with pytest.raises(DataError):
            topics.top_terms(model, [], 5)


def _assignment_fixture():
    """3 clusters; 'shared' and ten filler terms dominate the corpus (they
    own the overall top-10), each cluster has a private marker term."""
    docs = []
    ids = []
    assignments = {}
    markers = ["marka", "markb", "markc"]
    rng = random.Random(5)
    fillers = [f"fill{i:02d}" for i in range(10)]
    for c in range(3):
        for i in range(12):
            doc_id = f"d{c}_{i}"
            words = ["shared", "shared"] + rng.sample(fillers, 6) + [markers[c]]
            words += [f"c{c}w{rng.randrange(6)}" for _ in range(3)]
            docs.append(words)
            ids.append(doc_id)
            assignments[doc_id] = c
    return docs, ids, assignments, markers


class TestClusterKeywords:
    def test_overall_top_term_excluded_from_clusters(self):
        docs, ids, assignments, _ = _assignment_fixture()
        model = topics.fit_tfidf(docs, ids=ids)
        overall, per_cluster = topics.cluster_keywords(model, assignments, n=10)
        assert overall.ranked_terms[0][0] == "shared"
        for report in per_cluster.values():
            terms = [t for t, _ in report.ranked_terms]
            assert "shared" not in terms
            assert "shared" in report.excluded_terms

    def test_single_cluster_report_is_overall_tail(self):
        docs, ids, _ = (
            [_tokens(d) for d in ORACLE_DOCS],
            [f"d{i}" for i in range(20)],
            None,
        )
        model = topics.fit_tfidf(docs, ids=ids)
        assignments = {doc_id: 0 for doc_id in ids}
        overall_full = topics.top_terms(model, range(20), len(model.vocabulary))
        _, per_cluster = topics.cluster_keywords(model, assignments, n=5)
        expected_tail = [t for t, _ in overall_full[10:15]]
        assert [t for t, _ in per_cluster[0].ranked_terms] == expected_tail

    def test_planted_markers_in_own_cluster_only(self):
        docs, ids, assignments, markers = _assignment_fixture()
        model = topics.fit_tfidf(docs, ids=ids)
        _, per_cluster = topics.cluster_keywords(model, assignments, n=10)
        for c, marker in enumerate(markers):
            for other, report in per_cluster.items():
                terms = [t for t, _ in report.ranked_terms]
                assert (marker in terms) == (other == c)

    def test_exclusion_soundness(self):
        docs, ids, assignments, _ = _assignment_fixture()
        model = topics.fit_tfidf(docs, ids=ids)
        overall, per_cluster = topics.cluster_keywords(model, assignments, n=10)
        overall_top10 = {t for t, _ in overall.ranked_terms[:10]}
        for report in per_cluster.values():
            assert overall_top10.isdisjoint({t for t, _ in report.ranked_terms})


class TestSentimentKeywords:
    def test_all_positive_single_cluster_is_tail_ranking(self):
        docs = [_tokens(d) for d in ORACLE_DOCS]
        ids = [f"d{i}" for i in range(20)]
        model = topics.fit_tfidf(docs, ids=ids)
        assignments = {doc_id: 0 for doc_id in ids}
        labels = {doc_id: "positive" for doc_id in ids}
        per_label, reports = topics.sentiment_keywords(model, assignments, labels, n=5)
        full = topics.top_terms(model, range(20), len(model.vocabulary))
        assert [t for t, _ in reports[(0, "positive")].ranked_terms] == [t for t, _ in full[10:15]]
        assert per_label["negative"].empty

    def test_cluster_without_label_flagged_empty(self):
        docs, ids, assignments, _ = _assignment_fixture()
        model = topics.fit_tfidf(docs, ids=ids)
        labels = {doc_id: ("negative" if assignments[doc_id] == 1 else "positive") for doc_id in ids}
        _, reports = topics.sentiment_keywords(model, assignments, labels, n=5)
        assert reports[(0, "negative")].empty
        assert not reports[(1, "negative")].empty

    def test_planted_positive_only_term(self):
        docs, ids, assignments, _ = _assignment_fixture()
        labels = {}
        rng = random.Random(9)
        for doc_id in ids:
            labels[doc_id] = "positive" if rng.random() < 0.5 else "negative"
        # plant a term in a few of cluster 2's positive docs: rare enough to
        # stay out of the dataset-level positive top-10 exclusion list,
        # specific enough to rank inside the cluster
        planted = "sunnyword"
        planted_in = 0
        for doc, doc_id in zip(docs, ids):
            if assignments[doc_id] == 2 and labels[doc_id] == "positive" and planted_in < 3:
                doc.append(planted)
                planted_in += 1
        assert planted_in == 3
        model = topics.fit_tfidf(docs, ids=ids)
        _, reports = topics.sentiment_keywords(model, assignments, labels, n=10)
        for (cluster_id, label), report in reports.items():
            terms = [t for t, _ in report.ranked_terms]
            if (cluster_id, label) == (2, "positive"):
                assert planted in terms
            else:
                assert planted not in terms

    def test_missing_labels_rejected(self):
        docs, ids, assignments, _ = _assignment_fixture()
        model = topics.fit_tfidf(docs, ids=ids)
        with pytest.raises(DataError):
            topics.sentiment_keywords(model, assignments, {ids[0]: "positive"}, n=5)
