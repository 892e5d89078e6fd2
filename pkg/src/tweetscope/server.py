"""Read-only HTTP API over a completed pipeline run.

Every response is derived from persisted artifacts loaded once at startup;
the service holds no mutable state, so concurrent requests need no
locking. All payloads carry a top-level schema_version.
"""

import json
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from tweetscope import __version__, embedding, formats, graphs, ingest, pipeline, sentiment
from tweetscope.errors import DataError, DependencyError

SCHEMA_VERSION = pipeline.SCHEMA_VERSION
MAX_PAGE = 500
DEFAULT_PAGE = 200


class SearchRequest(BaseModel):
    query: str
    k: int = Field(default=10, ge=1, le=200)
    cluster_id: Optional[int] = None


class ArtifactStore:
    """Loads a run's artifacts and serves derived views."""

    REQUIRED = ("ingest", "embed", "cluster", "topics", "sentiment", "graphs", "report")

    def __init__(self, artifact_dir):
        self.art = pipeline.Artifacts(artifact_dir)
        if not self.art.manifest.exists():
            raise DependencyError(f"no manifest.json in {artifact_dir}")
        self.manifest = json.loads(self.art.manifest.read_text(encoding="utf-8"))
        missing = [s for s in self.REQUIRED if s not in self.manifest.get("stages", {})]
        if missing:
            raise DependencyError(f"artifacts incomplete; missing stages: {', '.join(missing)}")
        for stage in self.REQUIRED:
            for rel in self.manifest["stages"][stage]["artifacts"]:
                if not self.art.path(rel).exists():
                    raise DependencyError(f"artifact listed in manifest but absent: {rel}")

        config = self.manifest["config"]
        self.bin_width_ms = int(config["bin_width_ms"])
        self.tweets = pipeline.load_clean_tweets(self.art.clean_tweets)
        self.tweets_by_id = {t.id: t for t in self.tweets}
        self.labels = sentiment.load_sentiment_csv(self.art.sentiment_labels).labels
        self.assignments = pipeline._load_assignments(self.art)
        self.cluster_model = formats.read_kmeans(self.art.cluster_model)

        self.keywords_overall = json.loads(self.art.keywords_overall_json.read_text(encoding="utf-8"))
        self.keywords_clusters = json.loads(self.art.keywords_clusters_json.read_text(encoding="utf-8"))
        self.keywords_sentiment = json.loads(self.art.keywords_sentiment_json.read_text(encoding="utf-8"))

        # search runs in the hashed-embedding space; when the run embedded
        # with precomputed vectors (no text encoder available) a parallel
        # hashed index over the normalized texts is built here instead
        self.search_dim = int(config["embedding_dim"])
        self.search_seed = int(config["embedding_seed"])
        if config["embedding_provider"] == "hashed":
            matrix = formats.read_embeddings(self.art.embeddings)
        else:
            provider = embedding.HashedNgramProvider(self.search_dim, self.search_seed)
            matrix = embedding.embed_corpus(self.tweets, provider)
            self.search_dim = provider.dim
        self.index = embedding.build_index(matrix, cluster_assignments=self.assignments)

        self.graphs = pipeline._build_graphs(self.tweets, self.labels)
        self.graph_stats = {
            gt: json.loads(self.art.graph_stats(gt).read_text(encoding="utf-8"))
            for gt in pipeline.GRAPH_TYPES
        }
        self.components_payload = {}
        self.components = {}
        for gt in pipeline.GRAPH_TYPES:
            g = self.graphs[gt]
            self.components[gt] = {
                "wcc": graphs.weakly_connected_components(g),
                "scc": graphs.strongly_connected_components(g),
            }
            self.components_payload[gt] = {
                kind: json.loads(self.art.graph_components(gt, kind).read_text(encoding="utf-8"))
                for kind in ("wcc", "scc")
            }

    # --- views ---------------------------------------------------------

    def tweet_payload(self, tweet_id):
        t = self.tweets_by_id.get(tweet_id)
        if t is None:
            return None
        sl = self.labels.get(tweet_id)
        return {
            "id": t.id,
            "timestamp_ms": t.timestamp_ms,
            "user_id": t.user_id,
            "full_text": t.full_text,
            "norm_text": t.norm_text,
            "cluster_id": self.assignments.get(tweet_id),
            "sentiment": sl.label if sl else None,
            "sentiment_score": sentiment.signed_score(sl) if sl else None,
            "interaction_count": graphs.interaction_count(t),
        }

    def cluster_summaries(self):
        sizes = {}
        score_sums = {}
        for doc_id, cid in self.assignments.items():
            sizes[cid] = sizes.get(cid, 0) + 1
            sl = self.labels.get(doc_id)
            if sl is not None:
                score_sums[cid] = score_sums.get(cid, 0.0) + sentiment.signed_score(sl)
        out = []
        for cid in sorted(sizes):
            report = self.keywords_clusters.get(str(cid), {})
            out.append(
                {
                    "id": cid,
                    "size": sizes[cid],
                    "mean_sentiment": score_sums.get(cid, 0.0) / sizes[cid],
                    "top_keywords": [r["term"] for r in report.get("ranked_terms", [])[:10]],
                }
            )
        return out

    def timeline_payload(self, scope_ids, scope_name, bin_ms):
        timelines = sentiment.timeline(
            self.tweets, self.labels, bin_ms, {scope_name: scope_ids}
        )
        tl = timelines[scope_name]
        return {
            "scope": tl.scope,
            "bin_width_ms": tl.bin_width_ms,
            "bins": [
                {
                    "start_ms": b.start_ms,
                    "n": b.n,
                    "ratio_pos": b.ratio_pos,
                    "ratio_neu": b.ratio_neu,
                    "ratio_neg": b.ratio_neg,
                    "avg_sentiment": b.avg_sentiment,
                }
                for b in tl.bins
            ],
        }


def create_app(artifact_dir, ui_dir=None) -> FastAPI:
    store = ArtifactStore(artifact_dir)
    app = FastAPI(title="tweetscope", version=__version__)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET", "POST"], allow_headers=["*"]
    )

    def versioned(payload: dict) -> dict:
        return {"schema_version": SCHEMA_VERSION, **payload}

    @app.get("/api/manifest")
    def get_manifest():
        return versioned({"manifest": store.manifest})

    @app.get("/api/volume")
    def get_volume(bin_ms: Optional[int] = Query(default=None, gt=0)):
        width = bin_ms or store.bin_width_ms
        series = ingest.volume_histogram(store.tweets, width)
        return versioned(
            {
                "bin_width_ms": width,
                "total": series.total,
                "bins": [{"start_ms": s, "count": c} for s, c in series.bins],
            }
        )

    @app.get("/api/clusters")
    def get_clusters():
        return versioned({"clusters": store.cluster_summaries()})

    @app.get("/api/clusters/{cluster_id}/keywords")
    def get_cluster_keywords(cluster_id: int, sentiment_label: Optional[str] = Query(default=None, alias="sentiment")):
        if sentiment_label is None:
            report = store.keywords_clusters.get(str(cluster_id))
        else:
            if sentiment_label not in sentiment.LABELS:
                raise HTTPException(status_code=422, detail=f"unknown sentiment: {sentiment_label}")
            report = store.keywords_sentiment["clusters"].get(f"{cluster_id}:{sentiment_label}")
        if report is None:
            raise HTTPException(status_code=404, detail=f"no keyword report for cluster {cluster_id}")
        return versioned({"report": report, "overall": store.keywords_overall})

    @app.get("/api/clusters/{cluster_id}/timeline")
    def get_cluster_timeline(cluster_id: int, bin_ms: Optional[int] = Query(default=None, gt=0)):
        members = {doc_id for doc_id, c in store.assignments.items() if c == cluster_id}
        if not members:
            raise HTTPException(status_code=404, detail=f"unknown cluster {cluster_id}")
        width = bin_ms or store.bin_width_ms
        return versioned(store.timeline_payload(members, f"cluster_{cluster_id}", width))

    @app.get("/api/timeline")
    def get_overall_timeline(bin_ms: Optional[int] = Query(default=None, gt=0)):
        width = bin_ms or store.bin_width_ms
        return versioned(store.timeline_payload(None, "overall", width))

    @app.post("/api/search")
    def post_search(req: SearchRequest):
        if not req.query.strip():
            raise HTTPException(status_code=422, detail="empty query")
        vector = embedding.hashed_ngram_embed(
            ingest.normalize_text(req.query), store.search_dim, store.search_seed
        )
        try:
            hits = embedding.nn_search(store.index, vector, req.k, cluster_filter=req.cluster_id)
        except DataError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        results = []
        for doc_id, sim in hits:
            payload = store.tweet_payload(doc_id)
            payload["similarity"] = sim
            results.append(payload)
        return versioned({"query": req.query, "k": req.k, "cluster_id": req.cluster_id, "results": results})

    def _graph_or_404(graph_type):
        if graph_type not in pipeline.GRAPH_TYPES:
            raise HTTPException(status_code=404, detail=f"unknown graph type: {graph_type}")

    @app.get("/api/graphs/{graph_type}/stats")
    def get_graph_stats(graph_type: str):
        _graph_or_404(graph_type)
        return versioned({"stats": store.graph_stats[graph_type]})

    @app.get("/api/graphs/{graph_type}/components")
    def get_components(
        graph_type: str,
        kind: str = Query(default="wcc"),
        top: int = Query(default=10, ge=1, le=100),
    ):
        _graph_or_404(graph_type)
        if kind not in ("wcc", "scc"):
            raise HTTPException(status_code=422, detail="kind must be wcc or scc")
        payload = store.components_payload[graph_type][kind][:top]
        return versioned({"graph_type": graph_type, "kind": kind, "components": payload})

    @app.get("/api/graphs/{graph_type}/components/{rank}")
    def get_component_detail(
        graph_type: str,
        rank: int,
        kind: str = Query(default="wcc"),
        offset: int = Query(default=0, ge=0),
        limit: int = Query(default=DEFAULT_PAGE, ge=1, le=MAX_PAGE),
    ):
        _graph_or_404(graph_type)
        if kind not in ("wcc", "scc"):
            raise HTTPException(status_code=422, detail="kind must be wcc or scc")
        profiles = store.components_payload[graph_type][kind]
        profile = next((p for p in profiles if p["rank"] == rank), None)
        if profile is None:
            raise HTTPException(status_code=404, detail=f"no profiled {kind} component of rank {rank}")
        component = store.components[graph_type][kind][rank - 1]
        g = store.graphs[graph_type]
        page_ids = component.nodes[offset : offset + limit]
        page_set = set(page_ids)
        nodes = []
        for node_id in page_ids:
            info = g.nodes[node_id]
            nodes.append(
                {
                    "id": node_id,
                    "external": info.external,
                    "sentiment": info.sentiment,
                    "sentiment_score": info.sentiment_score,
                    "interaction_count": info.interaction_count,
                    "friends": info.friends,
                    "followers": info.followers,
                }
            )
        edges = [
            {"src": e.src, "dst": e.dst, "timestamp_ms": e.timestamp_ms, "tweet_id": e.tweet_id}
            for e in g.edges
            if e.src in page_set and e.dst in page_set
        ]
        full_curve, _ = graphs.cumulative_curve(g, component.nodes)
        curve = [{"timestamp_ms": ts, "cumulative_count": c} for ts, c in full_curve]
        return versioned(
            {
                "graph_type": graph_type,
                "profile": profile,
                "curve": curve,
                "nodes": nodes,
                "edges": edges,
                "node_offset": offset,
                "node_total": component.size,
                "truncated": component.size > offset + len(nodes),
            }
        )

    @app.get("/api/tweets/{tweet_id}")
    def get_tweet(tweet_id: str):
        payload = store.tweet_payload(tweet_id)
        if payload is None:
            raise HTTPException(status_code=404, detail=f"unknown tweet id: {tweet_id}")
        return versioned({"tweet": payload})

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(artifact_dir, bind="127.0.0.1:8000", ui_dir=None):
    """Run the read-only API (blocking)."""
    import uvicorn

    host, _, port = bind.partition(":")
    app = create_app(artifact_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="info")
