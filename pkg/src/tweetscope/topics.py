"""TF-IDF keyword extraction with overall-top-10 exclusion and
sentiment-stratified per-cluster reports.

Variant is fixed: smoothed idf ln((1+N)/(1+df)) + 1, document vectors
tf*idf with L2 normalization. Ranking aggregates the normalized weights
by sum over the scoped documents; ties break lexicographically.
"""

import io
import json
import math
import re
from dataclasses import dataclass, field

from tweetscope.errors import DataError

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

TFIDF_VARIANT = "smooth-idf+l2norm"
OVERALL_EXCLUDE_N = 10
SENTIMENT_LABELS = ("positive", "neutral", "negative")


def tokenize(text: str) -> list:
    """Lowercase tokens split on non-alphanumeric boundaries.

    Tokens shorter than 2 chars are dropped unless they are pure digits,
    so numeric terms like "10" or "000" survive.
    """
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2 or t.isdigit()]


@dataclass
class TfIdfModel:
    vocabulary: dict  # term -> dense column index
    idf: list  # per-index idf value
    doc_count: int
    variant: str
    doc_weights: list  # per doc: {column index -> normalized tf-idf weight}
    doc_ids: list = None

    def __post_init__(self):
        self._id_index = (
            {doc_id: i for i, doc_id in enumerate(self.doc_ids)} if self.doc_ids else {}
        )

    def index_of(self, doc_id):
        if doc_id not in self._id_index:
            raise DataError(f"document id not in model: {doc_id}")
        return self._id_index[doc_id]

    @property
    def terms(self):
        ordered = [None] * len(self.vocabulary)
        for term, col in self.vocabulary.items():
            ordered[col] = term
        return ordered


@dataclass
class KeywordReport:
    scope: str  # "overall", "cluster:3", "sentiment:positive", "cluster:3:positive"
    ranked_terms: list  # ordered (term, score)
    excluded_terms: list = field(default_factory=list)
    empty: bool = False


def fit_tfidf(docs, ids=None) -> TfIdfModel:
    """Fit the fixed-variant TF-IDF model over tokenized documents."""
    docs = [list(d) for d in docs]
    if not any(docs):
        raise DataError("cannot fit TF-IDF on an all-empty corpus")
    if ids is not None and len(ids) != len(docs):
        raise DataError("ids/docs length mismatch")

    df = {}
    for doc in docs:
        for term in set(doc):
            df[term] = df.get(term, 0) + 1
    vocabulary = {term: i for i, term in enumerate(sorted(df))}
    n = len(docs)
    idf = [0.0] * len(vocabulary)
    for term, col in vocabulary.items():
        idf[col] = math.log((1.0 + n) / (1.0 + df[term])) + 1.0

    doc_weights = []
    for doc in docs:
        tf = {}
        for term in doc:
            col = vocabulary[term]
            tf[col] = tf.get(col, 0) + 1
        weights = {col: count * idf[col] for col, count in tf.items()}
        norm = math.sqrt(sum(w * w for w in weights.values()))
        if norm > 0:
            weights = {col: w / norm for col, w in weights.items()}
        doc_weights.append(weights)

    return TfIdfModel(
        vocabulary=vocabulary,
        idf=idf,
        doc_count=n,
        variant=TFIDF_VARIANT,
        doc_weights=doc_weights,
        doc_ids=list(ids) if ids is not None else None,
    )


def _scores(model, doc_indices):
    acc = {}
    for i in doc_indices:
        for col, w in model.doc_weights[i].items():
            acc[col] = acc.get(col, 0.0) + w
    return acc


def top_terms(model: TfIdfModel, doc_indices, n: int, exclude=()):
    """Top-n terms over a document subset by summed normalized weight.

    Ties break lexicographically ascending. If n reaches the vocabulary
    size, every vocabulary term is ranked (zero scores included).
    """
    doc_indices = list(doc_indices)
    if not doc_indices:
        raise DataError("top_terms over an empty document subset")
    terms = model.terms
    acc = _scores(model, doc_indices)
    scored = [(terms[col], s) for col, s in acc.items() if terms[col] not in exclude]
    if n >= len(model.vocabulary):
        present = {t for t, _ in scored}
        scored.extend(
            (term, 0.0) for term in terms if term not in present and term not in exclude
        )
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:n]


def cluster_keywords(model: TfIdfModel, assignments: dict, n: int = 10):
    """Overall report plus per-cluster reports; the overall top-10 terms
    are excluded from every cluster ranking so cluster-specific terms
    surface instead of corpus-wide ones.

    Returns (overall_report, {cluster_id: report}).
    """
    indices = {doc_id: model.index_of(doc_id) for doc_id in assignments}
    all_indices = sorted(indices.values())
    overall_ranked = top_terms(model, all_indices, n)
    exclusion = [t for t, _ in top_terms(model, all_indices, OVERALL_EXCLUDE_N)]
    overall = KeywordReport(scope="overall", ranked_terms=overall_ranked)

    members = {}
    for doc_id, cluster_id in assignments.items():
        members.setdefault(cluster_id, []).append(indices[doc_id])

    reports = {}
    for cluster_id in sorted(members):
        rows = sorted(members[cluster_id])
        if not rows:
            reports[cluster_id] = KeywordReport(
                scope=f"cluster:{cluster_id}", ranked_terms=[], excluded_terms=list(exclusion), empty=True
            )
            continue
        ranked = top_terms(model, rows, n, exclude=set(exclusion))
        reports[cluster_id] = KeywordReport(
            scope=f"cluster:{cluster_id}", ranked_terms=ranked, excluded_terms=list(exclusion)
        )
    return overall, reports


def sentiment_keywords(model: TfIdfModel, assignments: dict, labels: dict, n: int = 10):
    """Per-sentiment keyword reports: for each label, the dataset-level
    top-10 of that label is excluded from each cluster's label ranking.

    Returns (per_label_overall, {(cluster_id, label): report}). Clusters
    with no documents of a label get an empty, flagged report.
    """
    missing = [doc_id for doc_id in assignments if doc_id not in labels]
    if missing:
        raise DataError(f"labels missing for {len(missing)} scored docs (e.g. {missing[0]})")

    by_label = {lab: [] for lab in SENTIMENT_LABELS}
    by_cluster_label = {}
    clusters = set()
    for doc_id, cluster_id in assignments.items():
        lab = labels[doc_id]
        idx = model.index_of(doc_id)
        by_label[lab].append(idx)
        by_cluster_label.setdefault((cluster_id, lab), []).append(idx)
        clusters.add(cluster_id)

    per_label_overall = {}
    exclusions = {}
    for lab in SENTIMENT_LABELS:
        rows = sorted(by_label[lab])
        if not rows:
            per_label_overall[lab] = KeywordReport(
                scope=f"sentiment:{lab}", ranked_terms=[], empty=True
            )
            exclusions[lab] = []
            continue
        ranked = top_terms(model, rows, n)
        per_label_overall[lab] = KeywordReport(scope=f"sentiment:{lab}", ranked_terms=ranked)
        exclusions[lab] = [t for t, _ in top_terms(model, rows, OVERALL_EXCLUDE_N)]

    reports = {}
    for cluster_id in sorted(clusters):
        for lab in SENTIMENT_LABELS:
            scope = f"cluster:{cluster_id}:{lab}"
            rows = sorted(by_cluster_label.get((cluster_id, lab), []))
            if not rows:
                reports[(cluster_id, lab)] = KeywordReport(
                    scope=scope, ranked_terms=[], excluded_terms=list(exclusions[lab]), empty=True
                )
                continue
            ranked = top_terms(model, rows, n, exclude=set(exclusions[lab]))
            reports[(cluster_id, lab)] = KeywordReport(
                scope=scope, ranked_terms=ranked, excluded_terms=list(exclusions[lab])
            )
    return per_label_overall, reports


def write_reports_csv(reports, path):
    """CSV rows (scope,rank,term,score) for an iterable of KeywordReports."""
    with io.open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("scope,rank,term,score\n")
        for report in reports:
            for rank, (term, score) in enumerate(report.ranked_terms, start=1):
                fh.write(f"{report.scope},{rank},{term},{score!r}\n")


def report_payload(report: KeywordReport) -> dict:
    return {
        "scope": report.scope,
        "empty": report.empty,
        "ranked_terms": [{"term": t, "score": s} for t, s in report.ranked_terms],
        "excluded_terms": list(report.excluded_terms),
    }


def write_reports_json(reports, path):
    payload = [report_payload(r) for r in reports]
    with io.open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_vocabulary_tsv(model: TfIdfModel, path):
    terms = model.terms
    with io.open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("term\tindex\tidf\n")
        for col, term in enumerate(terms):
            fh.write(f"{term}\t{col}\t{model.idf[col]!r}\n")
