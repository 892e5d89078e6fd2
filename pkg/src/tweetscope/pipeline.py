"""Pipeline orchestration: configuration, staged execution over persisted
artifacts, and the run manifest.

Stages run in a fixed order (ingest, embed, reduce, cluster, topics,
sentiment, graphs, report); each stage reads only persisted artifacts of
its upstream stages, so any suffix of the pipeline can be re-run against
an existing output directory. All artifacts are plain files; identical
inputs and config reproduce them byte-for-byte (the manifest's digests
prove it — the manifest itself also records wall-clock durations, which
are the one non-reproducible output).
"""

import csv
import hashlib
import json
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from tweetscope import __version__, clustering, embedding, formats, graphs, ingest, kernels, sentiment, topics
from tweetscope.errors import ConfigError, DataError, DependencyError
from tweetscope.ingest import CleanTweet

STAGES = ("ingest", "embed", "reduce", "cluster", "topics", "sentiment", "graphs", "report")

STAGE_DEPS = {
    "ingest": (),
    "embed": ("ingest",),
    "reduce": ("embed",),
    "cluster": ("reduce",),
    "topics": ("ingest", "cluster"),
    "sentiment": ("ingest",),
    "graphs": ("ingest", "sentiment"),
    "report": ("ingest", "cluster", "topics", "sentiment", "graphs"),
}

SCHEMA_VERSION = 1


@dataclass
class PipelineConfig:
    tweets_path: str
    keywords_path: str
    spam_templates_path: str
    out_dir: str
    vectors_path: Optional[str] = None
    sentiment_path: Optional[str] = None
    embedding_provider: str = "hashed"  # "hashed" or "file"
    embedding_dim: int = embedding.DEFAULT_FALLBACK_DIM
    embedding_seed: int = 0
    latent_dim: int = embedding.DEFAULT_LATENT_DIM
    cluster_in_raw_space: bool = False
    k: int = 6
    cluster_seed: int = 0
    tol: float = clustering.DEFAULT_TOL
    max_iter: int = clustering.DEFAULT_MAX_ITER
    subcluster_k: Optional[int] = None
    keyword_report_n: int = 10
    keyword_match_mode: str = "token"
    bin_width_ms: int = 43_200_000
    sentiment_on_raw_text: bool = False
    strict_ingest: bool = False
    graph_top_components: int = 20
    curve_top: int = 5
    bot_thresholds: graphs.BotThresholds = field(default_factory=graphs.BotThresholds)

    def validate(self):
        for name in ("tweets_path", "keywords_path", "spam_templates_path"):
            path = getattr(self, name)
            if not Path(path).exists():
                raise ConfigError(f"{name} does not exist: {path}")
        if self.embedding_provider not in ("hashed", "file"):
            raise ConfigError(f"unknown embedding provider: {self.embedding_provider}")
        if self.embedding_provider == "file":
            if not self.vectors_path or not Path(self.vectors_path).exists():
                raise ConfigError(f"vectors_path does not exist: {self.vectors_path}")
        if self.sentiment_path and not Path(self.sentiment_path).exists():
            raise ConfigError(f"sentiment_path does not exist: {self.sentiment_path}")
        if self.embedding_dim < embedding.MIN_HASH_DIM:
            raise ConfigError("embedding_dim too small")
        if self.latent_dim < 1:
            raise ConfigError("latent_dim must be >= 1")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.keyword_report_n < 1:
            raise ConfigError("keyword_report_n must be >= 1")
        if self.bin_width_ms <= 0:
            raise ConfigError("bin_width_ms must be > 0")
        if self.tol <= 0 or self.max_iter < 1:
            raise ConfigError("bad clustering tolerances")
        return self

    def snapshot(self) -> dict:
        return asdict(self)


def load_config(path, out_dir=None, seed=None) -> PipelineConfig:
    """Read a JSON config file. CLI overrides: out_dir, seed (clustering)."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc

    known = {f.name for f in fields(PipelineConfig)}
    kwargs = {}
    emb = raw.pop("embedding", {})
    if emb:
        kwargs["embedding_provider"] = emb.get("provider", "hashed")
        kwargs["embedding_dim"] = int(emb.get("dim", embedding.DEFAULT_FALLBACK_DIM))
        kwargs["embedding_seed"] = int(emb.get("seed", 0))
    clu = raw.pop("clustering", {})
    if clu:
        kwargs["k"] = int(clu.get("k", 6))
        kwargs["cluster_seed"] = int(clu.get("seed", 0))
        kwargs["tol"] = float(clu.get("tol", clustering.DEFAULT_TOL))
        kwargs["max_iter"] = int(clu.get("max_iter", clustering.DEFAULT_MAX_ITER))
        if clu.get("subcluster_k") is not None:
            kwargs["subcluster_k"] = int(clu["subcluster_k"])
    bot = raw.pop("bot_thresholds", {})
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(f"unknown config key: {key}")
        kwargs[key] = value
    if bot:
        try:
            kwargs["bot_thresholds"] = graphs.BotThresholds(**bot)
        except TypeError as exc:
            raise ConfigError(f"bad bot_thresholds: {exc}") from exc
    try:
        config = PipelineConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"incomplete config: {exc}") from exc
    if out_dir is not None:
        config.out_dir = str(out_dir)
    if seed is not None:
        config.cluster_seed = int(seed)
    return config.validate()


# --- artifact layout ----------------------------------------------------

GRAPH_TYPES = graphs.GRAPH_TYPES


class Artifacts:
    """Resolves artifact paths under the output directory."""

    def __init__(self, out_dir):
        self.root = Path(out_dir)

    def path(self, rel) -> Path:
        return self.root / rel

    manifest = property(lambda self: self.path("manifest.json"))
    clean_tweets = property(lambda self: self.path("ingest/clean_tweets.jsonl"))
    ingest_report = property(lambda self: self.path("ingest/report.json"))
    volume_prespam = property(lambda self: self.path("ingest/volume_prespam.csv"))
    volume = property(lambda self: self.path("ingest/volume.csv"))
    embeddings = property(lambda self: self.path("embed/embeddings.emb"))
    embed_report = property(lambda self: self.path("embed/report.json"))
    reducer = property(lambda self: self.path("reduce/reducer.bin"))
    latent = property(lambda self: self.path("reduce/latent.emb"))
    cluster_model = property(lambda self: self.path("cluster/model.bin"))
    assignments = property(lambda self: self.path("cluster/assignments.csv"))
    sentiment_labels = property(lambda self: self.path("sentiment/labels.csv"))
    keywords_overall_json = property(lambda self: self.path("topics/keywords_overall.json"))
    keywords_clusters_json = property(lambda self: self.path("topics/keywords_clusters.json"))
    keywords_csv = property(lambda self: self.path("topics/keywords.csv"))
    vocabulary = property(lambda self: self.path("topics/vocabulary.tsv"))
    keywords_sentiment_json = property(lambda self: self.path("report/keywords_sentiment.json"))
    keywords_sentiment_csv = property(lambda self: self.path("report/keywords_sentiment.csv"))
    summary = property(lambda self: self.path("report/summary.json"))

    def timeline(self, scope) -> Path:
        return self.path(f"report/timeline_{scope}.csv")

    def graph_dir(self, graph_type) -> Path:
        return self.path(f"graphs/{graph_type}")

    def graph_stats(self, graph_type) -> Path:
        return self.graph_dir(graph_type) / "stats.json"

    def graph_components(self, graph_type, kind) -> Path:
        return self.graph_dir(graph_type) / f"components_{kind}.json"

    def graph_components_csv(self, graph_type, kind) -> Path:
        return self.graph_dir(graph_type) / f"components_{kind}.csv"

    def graph_curve(self, graph_type, kind, rank) -> Path:
        return self.graph_dir(graph_type) / "curves" / f"{kind}_{rank}.csv"

    def graph_export(self, graph_type) -> Path:
        return self.graph_dir(graph_type) / "largest_wcc.graphml"


def _require(stage, *paths):
    missing = [str(p) for p in paths if not Path(p).exists()]
    if missing:
        raise DependencyError(
            f"stage '{stage}' is missing upstream artifacts: {', '.join(missing)}"
        )


def _write_json(payload, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _tweet_payload(t: CleanTweet) -> dict:
    return {
        "id": t.id,
        "timestamp_ms": t.timestamp_ms,
        "user_id": t.user_id,
        "full_text": t.full_text,
        "norm_text": t.norm_text,
        "quote_count": t.quote_count,
        "reply_count": t.reply_count,
        "retweet_count": t.retweet_count,
        "favorite_count": t.favorite_count,
        "user_friends_count": t.user_friends_count,
        "user_followers_count": t.user_followers_count,
        "quoted_status_id": t.quoted_status_id,
        "quoted_status_user_id": t.quoted_status_user_id,
        "in_reply_to_status_id": t.in_reply_to_status_id,
        "in_reply_to_user_id": t.in_reply_to_user_id,
        "is_retweet": t.is_retweet,
    }


def write_clean_tweets(tweets, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for t in tweets:
            fh.write(json.dumps(_tweet_payload(t), sort_keys=True) + "\n")
    return path


def load_clean_tweets(path) -> list:
    tweets = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            norm = rec.pop("norm_text")
            tweets.append(
                CleanTweet(norm_text=norm, tokens=topics.tokenize(norm), **rec)
            )
    return tweets


# --- stages ---------------------------------------------------------------


def stage_ingest(config: PipelineConfig, art: Artifacts):
    tweets, report = ingest.load_tweets(config.tweets_path, strict=config.strict_ingest)
    keywords = ingest.load_keyword_list(config.keywords_path)
    templates = ingest.load_spam_templates(config.spam_templates_path)

    keyword_kept = ingest.filter_by_keywords(tweets, keywords, mode=config.keyword_match_mode)
    cleaned = ingest.clean(keyword_kept)
    final, removed, spam_counts = ingest.filter_spam(cleaned, templates)

    write_clean_tweets(final, art.clean_tweets)
    ingest.write_volume_csv(ingest.volume_histogram(cleaned, config.bin_width_ms), art.volume_prespam)
    ingest.write_volume_csv(ingest.volume_histogram(final, config.bin_width_ms), art.volume)
    _write_json(
        {
            "schema_version": SCHEMA_VERSION,
            "counts": {
                "raw": report.loaded,
                "keyword_kept": len(keyword_kept),
                "spam_removed": len(removed),
                "final": len(final),
            },
            "load": {
                "total_lines": report.total_lines,
                "malformed": report.malformed,
                "duplicates": report.duplicates,
                "pair_violations": report.pair_violations,
                "malformed_lines": report.malformed_lines[:20],
            },
            "spam_per_template": spam_counts,
        },
        art.ingest_report,
    )


def _make_provider(config: PipelineConfig):
    if config.embedding_provider == "hashed":
        return embedding.HashedNgramProvider(config.embedding_dim, config.embedding_seed)
    path = config.vectors_path
    matrix = (
        formats.read_embeddings_tsv(path)
        if str(path).endswith(".tsv")
        else formats.read_embeddings(path)
    )
    vectors = {doc_id: row for doc_id, row in zip(matrix.ids, matrix.rows)}
    return embedding.PrecomputedProvider(vectors, matrix.dim)


def stage_embed(config: PipelineConfig, art: Artifacts):
    _require("embed", art.clean_tweets)
    tweets = load_clean_tweets(art.clean_tweets)
    provider = _make_provider(config)
    matrix = embedding.embed_corpus(tweets, provider)
    formats.write_embeddings(matrix, _ensure_parent(art.embeddings))
    zero_rows = [matrix.ids[i] for i in np.nonzero(~np.any(matrix.rows != 0.0, axis=1))[0]]
    _write_json(
        {
            "schema_version": SCHEMA_VERSION,
            "provider": provider.name,
            "dim": matrix.dim,
            "rows": len(matrix),
            "zero_vector_ids": zero_rows,
        },
        art.embed_report,
    )


def stage_reduce(config: PipelineConfig, art: Artifacts):
    _require("reduce", art.embeddings)
    matrix = formats.read_embeddings(art.embeddings)
    model = embedding.fit_reducer(matrix, config.latent_dim)
    formats.write_reducer(model, _ensure_parent(art.reducer))
    latent = embedding.EmbeddingMatrix(ids=matrix.ids, rows=embedding.encode(model, matrix.rows))
    formats.write_embeddings(latent, art.latent)


def stage_cluster(config: PipelineConfig, art: Artifacts):
    source = art.embeddings if config.cluster_in_raw_space else art.latent
    _require("cluster", source)
    matrix = formats.read_embeddings(source)
    model = clustering.kmeans_fit(
        matrix.rows,
        config.k,
        config.cluster_seed,
        tol=config.tol,
        max_iter=config.max_iter,
        ids=matrix.ids,
    )
    formats.write_kmeans(model, _ensure_parent(art.cluster_model))

    sub_labels = {}
    if config.subcluster_k:
        for cluster_id in range(model.k):
            rows = np.nonzero(model.labels == cluster_id)[0]
            member_ids = [model.ids[i] for i in rows]
            distinct = np.unique(matrix.rows[rows], axis=0).shape[0]
            k2 = min(config.subcluster_k, distinct)
            sub = clustering.subcluster(
                model, cluster_id, matrix.rows[rows], k2, config.cluster_seed, ids=member_ids
            )
            sub_labels.update(sub.assignments)

    with open(art.assignments, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tweet_id", "cluster_id", "subcluster_id"])
        for doc_id, label in zip(model.ids, model.labels):
            writer.writerow([doc_id, int(label), sub_labels.get(doc_id, "")])


def _load_assignments(art: Artifacts) -> dict:
    assignments = {}
    with open(art.assignments, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for doc_id, label, _ in reader:
            assignments[doc_id] = int(label)
    return assignments


def stage_topics(config: PipelineConfig, art: Artifacts):
    _require("topics", art.clean_tweets, art.assignments)
    tweets = load_clean_tweets(art.clean_tweets)
    assignments = _load_assignments(art)
    model = topics.fit_tfidf([t.tokens for t in tweets], ids=[t.id for t in tweets])
    overall, per_cluster = topics.cluster_keywords(model, assignments, n=config.keyword_report_n)

    _write_json(topics.report_payload(overall), art.keywords_overall_json)
    _write_json(
        {str(cid): topics.report_payload(rep) for cid, rep in per_cluster.items()},
        art.keywords_clusters_json,
    )
    topics.write_reports_csv([overall] + [per_cluster[c] for c in sorted(per_cluster)], _ensure_parent(art.keywords_csv))
    topics.write_vocabulary_tsv(model, art.vocabulary)


def stage_sentiment(config: PipelineConfig, art: Artifacts):
    _require("sentiment", art.clean_tweets)
    tweets = load_clean_tweets(art.clean_tweets)
    if config.sentiment_path:
        provider = sentiment.load_sentiment_csv(config.sentiment_path)
    else:
        provider = sentiment.LexiconSentiment(use_raw_text=config.sentiment_on_raw_text)
    labels = sentiment.score_corpus(provider, tweets)
    sentiment.write_sentiment_csv(labels, _ensure_parent(art.sentiment_labels), ids=[t.id for t in tweets])


def _build_graphs(tweets, labels):
    out = {}
    for graph_type in GRAPH_TYPES:
        node_kind, edge_kind = graph_type.split("-")
        out[graph_type] = graphs.build_graph(tweets, node_kind, edge_kind, sentiments=labels)
    return out


def _stat_triple_payload(st: graphs.StatTriple) -> dict:
    return {"mean": st.mean, "std": st.std, "median": st.median, "max": st.max}


def _ff_payload(st: graphs.FriendFollowerStats) -> dict:
    return {
        "n_nodes": st.n_nodes,
        "n_missing": st.n_missing,
        "mean_friends": st.mean_friends,
        "median_friends": st.median_friends,
        "mean_followers": st.mean_followers,
        "median_followers": st.median_followers,
    }


def profile_payload(p: graphs.ComponentProfile, members_preview=50) -> dict:
    return {
        "kind": p.component.kind,
        "rank": p.component.rank,
        "size": p.component.size,
        "within": _ff_payload(p.within_stats),
        "reachable": _ff_payload(p.reachable_stats),
        "reachable_set_size": p.reachable_set_size,
        "n_interactions": p.n_interactions,
        "linearity_score": p.linearity_score,
        "linearity_degenerate": p.linearity_degenerate,
        "bot_flags": p.bot_flags,
        "members_preview": p.component.nodes[:members_preview],
    }


def stage_graphs(config: PipelineConfig, art: Artifacts):
    _require("graphs", art.clean_tweets, art.sentiment_labels)
    tweets = load_clean_tweets(art.clean_tweets)
    labels = sentiment.load_sentiment_csv(art.sentiment_labels).labels

    for graph_type, g in _build_graphs(tweets, labels).items():
        stats = graphs.degree_stats(g)
        _write_json(
            {
                "schema_version": SCHEMA_VERSION,
                "graph_type": graph_type,
                "n_nodes": stats.n_nodes,
                "n_edges": stats.n_edges,
                "degree": _stat_triple_payload(stats.degree),
                "in_degree": _stat_triple_payload(stats.in_degree),
                "out_degree": _stat_triple_payload(stats.out_degree),
                "empty": stats.empty,
                "skipped_refs": g.skipped_refs,
            },
            art.graph_stats(graph_type),
        )
        components = {
            "wcc": graphs.weakly_connected_components(g),
            "scc": graphs.strongly_connected_components(g),
        }
        for kind, comps in components.items():
            top = comps[: config.graph_top_components]
            profiles = [
                graphs.profile_component(g, c, config.bot_thresholds) for c in top
            ]
            _write_json([profile_payload(p) for p in profiles], art.graph_components(graph_type, kind))
            _write_components_csv(profiles, art.graph_components_csv(graph_type, kind))
            for p in profiles[: config.curve_top]:
                curve_path = art.graph_curve(graph_type, kind, p.component.rank)
                curve_path.parent.mkdir(parents=True, exist_ok=True)
                with open(curve_path, "w", encoding="utf-8", newline="") as fh:
                    fh.write("timestamp_ms,cumulative_count\n")
                    for ts, count in p.temporal_curve:
                        fh.write(f"{ts},{count}\n")
        if components["wcc"]:
            graphs.export_graph(g, art.graph_export(graph_type), "graphml", component=components["wcc"][0])


def _write_components_csv(profiles, path):
    columns = (
        "kind,rank,size,reachable_set_size,n_interactions,"
        "within_mean_friends,within_median_friends,within_mean_followers,within_median_followers,"
        "reach_mean_friends,reach_median_friends,reach_mean_followers,reach_median_followers,"
        "linearity_score,bot_flags"
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(columns + "\n")
        for p in profiles:
            w, r = p.within_stats, p.reachable_stats
            def cell(v):
                return "" if v is None else (repr(v) if isinstance(v, float) else str(v))
            row = [
                p.component.kind, p.component.rank, p.component.size,
                p.reachable_set_size, p.n_interactions,
                w.mean_friends, w.median_friends, w.mean_followers, w.median_followers,
                r.mean_friends, r.median_friends, r.mean_followers, r.median_followers,
                p.linearity_score, "|".join(p.bot_flags),
            ]
            fh.write(",".join(cell(v) for v in row) + "\n")


def stage_report(config: PipelineConfig, art: Artifacts):
    _require(
        "report",
        art.clean_tweets,
        art.assignments,
        art.keywords_clusters_json,
        art.sentiment_labels,
        art.graph_stats(GRAPH_TYPES[0]),
    )
    tweets = load_clean_tweets(art.clean_tweets)
    assignments = _load_assignments(art)
    labels = sentiment.load_sentiment_csv(art.sentiment_labels).labels

    scopes = {"overall": None}
    for cluster_id in sorted(set(assignments.values())):
        scopes[f"cluster_{cluster_id}"] = {
            doc_id for doc_id, c in assignments.items() if c == cluster_id
        }
    timelines = sentiment.timeline(tweets, labels, config.bin_width_ms, scopes)
    for scope, tl in timelines.items():
        sentiment.write_timeline_csv(tl, _ensure_parent(art.timeline(scope)))

    model = topics.fit_tfidf([t.tokens for t in tweets], ids=[t.id for t in tweets])
    label_map = {doc_id: labels[doc_id].label for doc_id in assignments}
    per_label, per_cluster_label = topics.sentiment_keywords(
        model, assignments, label_map, n=config.keyword_report_n
    )
    payload = {
        "overall": {lab: topics.report_payload(rep) for lab, rep in per_label.items()},
        "clusters": {
            f"{cid}:{lab}": topics.report_payload(rep)
            for (cid, lab), rep in per_cluster_label.items()
        },
    }
    _write_json(payload, art.keywords_sentiment_json)
    ordered_reports = [per_label[lab] for lab in sentiment.LABELS] + [
        per_cluster_label[key] for key in sorted(per_cluster_label)
    ]
    topics.write_reports_csv(ordered_reports, _ensure_parent(art.keywords_sentiment_csv))

    cluster_sizes = {}
    for doc_id, cid in assignments.items():
        cluster_sizes[cid] = cluster_sizes.get(cid, 0) + 1
    ingest_report = json.loads(art.ingest_report.read_text(encoding="utf-8"))
    summary = {
        "schema_version": SCHEMA_VERSION,
        "engine_version": __version__,
        "counts": ingest_report["counts"],
        "clusters": {str(cid): cluster_sizes[cid] for cid in sorted(cluster_sizes)},
        "bin_width_ms": config.bin_width_ms,
        "graph_types": list(GRAPH_TYPES),
    }
    _write_json(summary, art.summary)


def _ensure_parent(path: Path) -> Path:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return path


STAGE_FUNCS = {
    "ingest": stage_ingest,
    "embed": stage_embed,
    "reduce": stage_reduce,
    "cluster": stage_cluster,
    "topics": stage_topics,
    "sentiment": stage_sentiment,
    "graphs": stage_graphs,
    "report": stage_report,
}


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _stage_artifacts(stage, config: PipelineConfig, art: Artifacts) -> list:
    if stage == "ingest":
        return [art.clean_tweets, art.ingest_report, art.volume_prespam, art.volume]
    if stage == "embed":
        return [art.embeddings, art.embed_report]
    if stage == "reduce":
        return [art.reducer, art.latent]
    if stage == "cluster":
        return [art.cluster_model, art.assignments]
    if stage == "topics":
        return [art.keywords_overall_json, art.keywords_clusters_json, art.keywords_csv, art.vocabulary]
    if stage == "sentiment":
        return [art.sentiment_labels]
    if stage == "graphs":
        out = []
        for graph_type in GRAPH_TYPES:
            out.append(art.graph_stats(graph_type))
            for kind in ("wcc", "scc"):
                out.append(art.graph_components(graph_type, kind))
                out.append(art.graph_components_csv(graph_type, kind))
            export = art.graph_export(graph_type)
            if export.exists():
                out.append(export)
            curves_dir = art.graph_dir(graph_type) / "curves"
            if curves_dir.exists():
                out.extend(sorted(curves_dir.iterdir()))
        return out
    if stage == "report":
        out = [art.keywords_sentiment_json, art.keywords_sentiment_csv, art.summary]
        report_dir = art.path("report")
        out.extend(sorted(p for p in report_dir.glob("timeline_*.csv")))
        return out
    raise ConfigError(f"unknown stage: {stage}")


def run_pipeline(config: PipelineConfig, stages=None) -> dict:
    """Execute the requested stages in canonical order, persist artifacts,
    and return the updated manifest."""
    config.validate()
    if stages is None:
        requested = list(STAGES)
    else:
        unknown = set(stages) - set(STAGES)
        if unknown:
            raise ConfigError(f"unknown stages: {sorted(unknown)}")
        requested = [s for s in STAGES if s in stages]

    art = Artifacts(config.out_dir)
    art.root.mkdir(parents=True, exist_ok=True)
    for sub in ("ingest", "embed", "reduce", "cluster", "topics", "sentiment", "report"):
        (art.root / sub).mkdir(exist_ok=True)

    manifest = {}
    if art.manifest.exists():
        manifest = json.loads(art.manifest.read_text(encoding="utf-8"))
    manifest.setdefault("schema_version", SCHEMA_VERSION)
    manifest.setdefault("stages", {})
    manifest["engine_version"] = __version__
    manifest["kernel_backend"] = kernels.BACKEND
    manifest["config"] = config.snapshot()

    done = set(manifest["stages"])
    for stage in requested:
        missing_deps = [d for d in STAGE_DEPS[stage] if d not in done and d not in requested]
        if missing_deps:
            raise DependencyError(
                f"stage '{stage}' requires prior stages {missing_deps}; run them first "
                f"or include them in --stages"
            )
        t0 = time.perf_counter()
        STAGE_FUNCS[stage](config, art)
        duration = time.perf_counter() - t0
        produced = _stage_artifacts(stage, config, art)
        manifest["stages"][stage] = {
            "duration_s": round(duration, 6),
            "artifacts": {
                str(p.relative_to(art.root)): _sha256(p) for p in produced
            },
        }
        done.add(stage)

    if "ingest" in manifest["stages"]:
        ingest_report = json.loads(art.ingest_report.read_text(encoding="utf-8"))
        manifest["counts"] = ingest_report["counts"]
    _write_json(manifest, art.manifest)
    return manifest
