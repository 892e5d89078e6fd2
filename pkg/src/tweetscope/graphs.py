"""Directed reply/quote interaction graphs and the bot-signature analysis
built on them: degree statistics, WCC/SCC extraction, component profiling
(within vs reachable friend/follower stats, cumulative activity curves,
linearity scores, bot flags) and annotated GraphML/DOT export.

Graphs are edge-defined: a node appears iff it participates in at least
one interaction of the graph's relation. Tweet-kind graphs are simple and
loop-free (a tweet references at most one target per relation); user-kind
graphs keep parallel edges and self-loops.

Edge directions follow the source conventions exactly: a tweet edge points
from the interacting tweet to its target, while a user edge points from
the referenced (quoted/replied-to) author to the interacting user.
"""

import math
import xml.etree.ElementTree as ET
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from tweetscope.errors import ConfigError, DataError
from tweetscope.sentiment import signed_score

NODE_KINDS = ("tweet", "user")
EDGE_KINDS = ("reply", "quote")
GRAPH_TYPES = ("tweet-reply", "tweet-quote", "user-reply", "user-quote")

HOUR_MS = 3_600_000


@dataclass
class BotThresholds:
    linearity_min: float = 0.98
    linearity_min_points: int = 20
    flat_ratio: float = 0.5
    short_burst_hours: float = 24.0
    short_burst_min_edges: int = 50


@dataclass(slots=True)
class Edge:
    src: str
    dst: str
    timestamp_ms: int
    tweet_id: str


@dataclass(slots=True)
class NodeInfo:
    external: bool = False
    sentiment: Optional[str] = None
    sentiment_score: Optional[float] = None
    interaction_count: Optional[int] = None
    friends: Optional[int] = None
    followers: Optional[int] = None

    @property
    def has_metadata(self):
        return self.friends is not None and self.followers is not None


@dataclass
class InteractionGraph:
    node_kind: str
    edge_kind: str
    nodes: dict  # id -> NodeInfo
    edges: list  # Edge multiset (list order is deterministic)
    skipped_refs: int = 0

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def n_edges(self):
        return len(self.edges)

    def out_adjacency(self):
        adj = {node: [] for node in self.nodes}
        for e in self.edges:
            adj[e.src].append(e.dst)
        return adj

    def undirected_adjacency(self):
        adj = {node: set() for node in self.nodes}
        for e in self.edges:
            adj[e.src].add(e.dst)
            adj[e.dst].add(e.src)
        return adj


@dataclass
class StatTriple:
    mean: float
    std: float
    median: float
    max: int


@dataclass
class DegreeStats:
    n_nodes: int
    n_edges: int
    degree: StatTriple
    in_degree: StatTriple
    out_degree: StatTriple
    empty: bool = False


@dataclass
class Component:
    kind: str  # "wcc" | "scc"
    rank: int  # 1-based, by size descending
    nodes: list  # sorted ids
    size: int


@dataclass
class FriendFollowerStats:
    n_nodes: int  # nodes carrying metadata
    n_missing: int
    mean_friends: Optional[int] = None  # rounded half-up
    median_friends: Optional[int] = None
    mean_followers: Optional[int] = None
    median_followers: Optional[int] = None
    raw_mean_friends: Optional[float] = None
    raw_mean_followers: Optional[float] = None


@dataclass
class ComponentProfile:
    component: Component
    within_stats: FriendFollowerStats
    reachable_stats: FriendFollowerStats
    reachable_set_size: int
    temporal_curve: list  # cumulative (timestamp_ms, count) at distinct stamps
    n_interactions: int
    linearity_score: Optional[float]
    linearity_degenerate: bool
    bot_flags: list  # sorted flag names


def interaction_count(tweet) -> int:
    """retweet_count + favorite_count + reply_count + quote_count."""
    return tweet.retweet_count + tweet.favorite_count + tweet.reply_count + tweet.quote_count


def _reference(tweet, edge_kind):
    if edge_kind == "reply":
        return tweet.in_reply_to_status_id, tweet.in_reply_to_user_id
    return tweet.quoted_status_id, tweet.quoted_status_user_id


def build_graph(tweets, node_kind: str, edge_kind: str, sentiments: Optional[dict] = None) -> InteractionGraph:
    """Construct one interaction graph from deduplicated clean tweets.

    Retweets are excluded here. sentiments maps tweet id -> SentimentLabel
    and feeds node attributes; user nodes aggregate their tweets (latest
    friends/followers, summed interaction counts, mean signed sentiment).
    """
    if node_kind not in NODE_KINDS:
        raise ConfigError(f"node_kind must be one of {NODE_KINDS}")
    if edge_kind not in EDGE_KINDS:
        raise ConfigError(f"edge_kind must be one of {EDGE_KINDS}")

    kept = [t for t in tweets if not t.is_retweet]
    by_id = {t.id: t for t in kept}
    sentiments = sentiments or {}

    nodes = {}
    edges = []
    skipped = 0

    if node_kind == "tweet":
        for t in kept:
            ref_id, ref_user = _reference(t, edge_kind)
            if ref_id is None:
                continue
            if ref_user is None or ref_id == t.id:
                skipped += 1
                continue
            edges.append(Edge(t.id, ref_id, t.timestamp_ms, t.id))
        for e in edges:
            for node_id in (e.src, e.dst):
                if node_id in nodes:
                    continue
                t = by_id.get(node_id)
                if t is None:
                    nodes[node_id] = NodeInfo(external=True)
                else:
                    sl = sentiments.get(node_id)
                    nodes[node_id] = NodeInfo(
                        sentiment=sl.label if sl else None,
                        sentiment_score=signed_score(sl) if sl else None,
                        interaction_count=interaction_count(t),
                        friends=t.user_friends_count,
                        followers=t.user_followers_count,
                    )
    else:
        for t in kept:
            ref_id, ref_user = _reference(t, edge_kind)
            if ref_id is None:
                continue
            if ref_user is None:
                skipped += 1
                continue
            edges.append(Edge(ref_user, t.user_id, t.timestamp_ms, t.id))
        participants = {e.src for e in edges} | {e.dst for e in edges}
        # aggregate author attributes from their tweets, in timestamp order
        latest = {}
        totals = {}
        scores = {}
        for t in kept:
            if t.user_id not in participants:
                continue
            prev = latest.get(t.user_id)
            if prev is None or t.timestamp_ms >= prev.timestamp_ms:
                latest[t.user_id] = t
            totals[t.user_id] = totals.get(t.user_id, 0) + interaction_count(t)
            sl = sentiments.get(t.id)
            if sl is not None:
                scores.setdefault(t.user_id, []).append(signed_score(sl))
        for user_id in participants:
            t = latest.get(user_id)
            if t is None:
                nodes[user_id] = NodeInfo(external=True)
                continue
            mean_score = None
            label = None
            if user_id in scores:
                mean_score = sum(scores[user_id]) / len(scores[user_id])
                label = "positive" if mean_score > 0 else "negative" if mean_score < 0 else "neutral"
            nodes[user_id] = NodeInfo(
                sentiment=label,
                sentiment_score=mean_score,
                interaction_count=totals.get(user_id, 0),
                friends=t.user_friends_count,
                followers=t.user_followers_count,
            )

    return InteractionGraph(node_kind, edge_kind, nodes, edges, skipped)


def _stat_triple(values) -> StatTriple:
    n = len(values)
    if n == 0:
        return StatTriple(0.0, 0.0, 0.0, 0)
    ordered = sorted(values)  # pins float summation order for the variance
    mean = sum(ordered) / n
    var = sum((v - mean) ** 2 for v in ordered) / n
    return StatTriple(mean, math.sqrt(var), float(ordered[(n - 1) // 2]), ordered[-1])


def degree_stats(g: InteractionGraph) -> DegreeStats:
    """Population mean/std, lower median, and max of degree, in-degree and
    out-degree; parallel edges count individually, self-loops add one to
    both in and out."""
    if g.n_nodes == 0:
        zero = StatTriple(0.0, 0.0, 0.0, 0)
        return DegreeStats(0, g.n_edges, zero, zero, zero, empty=True)
    indeg = {node: 0 for node in g.nodes}
    outdeg = {node: 0 for node in g.nodes}
    for e in g.edges:
        outdeg[e.src] += 1
        indeg[e.dst] += 1
    order = list(g.nodes)
    ins = [indeg[n] for n in order]
    outs = [outdeg[n] for n in order]
    totals = [i + o for i, o in zip(ins, outs)]
    return DegreeStats(
        n_nodes=g.n_nodes,
        n_edges=g.n_edges,
        degree=_stat_triple(totals),
        in_degree=_stat_triple(ins),
        out_degree=_stat_triple(outs),
    )


def _rank_components(groups, kind) -> list:
    ranked = sorted(groups, key=lambda grp: (-len(grp), min(grp)))
    return [
        Component(kind=kind, rank=i + 1, nodes=sorted(grp), size=len(grp))
        for i, grp in enumerate(ranked)
    ]


def weakly_connected_components(g: InteractionGraph) -> list:
    """Undirected-reachability partition, ranked by size descending (ties
    by smallest member id)."""
    adj = g.undirected_adjacency()
    seen = set()
    groups = []
    for start in g.nodes:
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        grp = []
        while queue:
            node = queue.popleft()
            grp.append(node)
            for nxt in adj[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        groups.append(grp)
    return _rank_components(groups, "wcc")


def strongly_connected_components(g: InteractionGraph) -> list:
    """Iterative Tarjan over the directed edges, ranked by size."""
    adj = g.out_adjacency()
    index = {}
    lowlink = {}
    on_stack = set()
    stack = []
    groups = []
    counter = [0]

    for root in g.nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, edge_i = work[-1]
            if edge_i == 0:
                index[node] = lowlink[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on_stack.add(node)
            advanced = False
            neighbors = adj[node]
            while edge_i < len(neighbors):
                nxt = neighbors[edge_i]
                edge_i += 1
                if nxt not in index:
                    work[-1] = (node, edge_i)
                    work.append((nxt, 0))
                    advanced = True
                    break
                if nxt in on_stack:
                    lowlink[node] = min(lowlink[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if lowlink[node] == index[node]:
                grp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    grp.append(w)
                    if w == node:
                        break
                groups.append(grp)
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
    return _rank_components(groups, "scc")


def reachable_set(g: InteractionGraph, seed_nodes) -> set:
    """Forward closure along edge direction from the seeds, excluding the
    seeds themselves."""
    seeds = set(seed_nodes)
    unknown = seeds - g.nodes.keys()
    if unknown:
        raise DataError(f"unknown seed ids: {sorted(unknown)[:5]}")
    adj = g.out_adjacency()
    seen = set(seeds)
    queue = deque(seeds)
    while queue:
        node = queue.popleft()
        for nxt in adj[node]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen - seeds


def _ff_stats(g: InteractionGraph, node_ids) -> FriendFollowerStats:
    friends = []
    followers = []
    missing = 0
    for node_id in node_ids:
        info = g.nodes[node_id]
        if info.has_metadata:
            friends.append(info.friends)
            followers.append(info.followers)
        else:
            missing += 1
    if not friends:
        return FriendFollowerStats(n_nodes=0, n_missing=missing)

    def half_up(x):
        return int(math.floor(x + 0.5))

    def lower_median(values):
        ordered = sorted(values)
        return ordered[(len(ordered) - 1) // 2]

    mean_fr = sum(friends) / len(friends)
    mean_fo = sum(followers) / len(followers)
    return FriendFollowerStats(
        n_nodes=len(friends),
        n_missing=missing,
        mean_friends=half_up(mean_fr),
        median_friends=half_up(lower_median(friends)),
        mean_followers=half_up(mean_fo),
        median_followers=half_up(lower_median(followers)),
        raw_mean_friends=mean_fr,
        raw_mean_followers=mean_fo,
    )


def linearity_score(curve) -> float:
    """R-squared of an OLS line fit to a cumulative (timestamp, count)
    series, clamped to [0, 1]. A degenerate (constant) curve scores 1 by
    convention."""
    score, _ = _linearity(curve)
    return score


def _linearity(curve):
    if len(curve) < 3:
        raise DataError(f"linearity needs >= 3 points, got {len(curve)}")
    xs = [float(t) for t, _ in curve]
    ys = [float(c) for _, c in curve]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        return 1.0, True
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    r2 = 1.0 - ss_res / syy
    return min(1.0, max(0.0, r2)), False


def cumulative_curve(g: InteractionGraph, members) -> tuple:
    """Cumulative count of interaction records incident (either endpoint)
    to the member set, sampled at each distinct incident timestamp.
    Returns (curve, n_interactions)."""
    members = set(members)
    stamps = sorted(e.timestamp_ms for e in g.edges if e.src in members or e.dst in members)
    curve = []
    for ts in stamps:
        if curve and curve[-1][0] == ts:
            curve[-1] = (ts, curve[-1][1] + 1)
        else:
            curve.append((ts, (curve[-1][1] + 1) if curve else 1))
    return curve, stamps


def profile_component(
    g: InteractionGraph, c: Component, thresholds: BotThresholds = None
) -> ComponentProfile:
    """Within vs reachable friend/follower statistics, cumulative incident
    activity curve, linearity score and bot flags for one component."""
    if not c.nodes:
        raise DataError("cannot profile an empty component")
    thresholds = thresholds or BotThresholds()
    members = set(c.nodes)

    within = _ff_stats(g, c.nodes)
    reach = reachable_set(g, members)
    reach_stats = _ff_stats(g, sorted(reach))

    curve, stamps = cumulative_curve(g, members)

    score = None
    degenerate = False
    if len(curve) >= 3:
        score, degenerate = _linearity(curve)

    flags = set()
    if score is not None and score >= thresholds.linearity_min and len(curve) >= thresholds.linearity_min_points:
        flags.add("linear_growth")
    if within.n_nodes > 0 and reach_stats.n_nodes > 0:
        flat = True
        for w_mean, r_mean in (
            (within.raw_mean_friends, reach_stats.raw_mean_friends),
            (within.raw_mean_followers, reach_stats.raw_mean_followers),
        ):
            if abs(w_mean - r_mean) > thresholds.flat_ratio * max(w_mean, 1.0):
                flat = False
        if flat:
            flags.add("flat_within_vs_reachable")
    if within.n_nodes > 0 and (
        within.mean_friends == 0
        and within.median_friends == 0
        and within.mean_followers == 0
        and within.median_followers == 0
    ):
        flags.add("zero_metadata")
    if stamps:
        span = stamps[-1] - stamps[0]
        if span <= thresholds.short_burst_hours * HOUR_MS and len(stamps) >= thresholds.short_burst_min_edges:
            flags.add("short_burst")

    return ComponentProfile(
        component=c,
        within_stats=within,
        reachable_stats=reach_stats,
        reachable_set_size=len(reach),
        temporal_curve=curve,
        n_interactions=len(stamps),
        linearity_score=score,
        linearity_degenerate=degenerate,
        bot_flags=sorted(flags),
    )


# --- export -----------------------------------------------------------

EXPORT_ATTRS = ("sentiment", "sentiment_score", "interaction_count", "component_kind", "component_rank")

_GRAPHML_KEYS = [
    ("sentiment", "node", "string"),
    ("sentiment_score", "node", "double"),
    ("interaction_count", "node", "long"),
    ("friends", "node", "long"),
    ("followers", "node", "long"),
    ("external", "node", "boolean"),
    ("component_kind", "node", "string"),
    ("component_rank", "node", "long"),
    ("timestamp_ms", "edge", "long"),
    ("tweet_id", "edge", "string"),
    ("node_kind", "graph", "string"),
    ("edge_kind", "graph", "string"),
]


def _node_attr_values(info: NodeInfo, component: Optional[Component]):
    values = {
        "sentiment": info.sentiment,
        "sentiment_score": info.sentiment_score,
        "interaction_count": info.interaction_count,
        "friends": info.friends,
        "followers": info.followers,
        "external": True if info.external else None,
    }
    if component is not None:
        values["component_kind"] = component.kind
        values["component_rank"] = component.rank
    return values


def export_graph(g: InteractionGraph, path, fmt: str = "graphml", component: Optional[Component] = None):
    """Write the graph (optionally restricted to one component) with node
    attributes. Nodes are ordered by id, edges canonically, so identical
    graphs serialize identically."""
    if component is not None:
        members = set(component.nodes)
        node_ids = sorted(members)
        edges = [e for e in g.edges if e.src in members and e.dst in members]
    else:
        node_ids = sorted(g.nodes)
        edges = list(g.edges)
    edges = sorted(edges, key=lambda e: (e.src, e.dst, e.timestamp_ms, e.tweet_id))

    if fmt == "graphml":
        _write_graphml(g, node_ids, edges, component, path)
    elif fmt == "dot":
        _write_dot(g, node_ids, edges, component, path)
    else:
        raise ConfigError(f"unknown export format: {fmt}")
    return path


def _write_graphml(g, node_ids, edges, component, path):
    root = ET.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    for name, domain, kind in _GRAPHML_KEYS:
        ET.SubElement(
            root, "key", id=name, attrib={"for": domain, "attr.name": name, "attr.type": kind}
        )
    graph = ET.SubElement(root, "graph", id="G", edgedefault="directed")
    for key, value in (("node_kind", g.node_kind), ("edge_kind", g.edge_kind)):
        data = ET.SubElement(graph, "data", key=key)
        data.text = value
    for node_id in node_ids:
        el = ET.SubElement(graph, "node", id=node_id)
        for key, value in _node_attr_values(g.nodes[node_id], component).items():
            if value is None:
                continue
            data = ET.SubElement(el, "data", key=key)
            data.text = str(value).lower() if isinstance(value, bool) else str(value)
    for i, e in enumerate(edges):
        el = ET.SubElement(graph, "edge", id=f"e{i}", source=e.src, target=e.dst)
        ts = ET.SubElement(el, "data", key="timestamp_ms")
        ts.text = str(e.timestamp_ms)
        tid = ET.SubElement(el, "data", key="tweet_id")
        tid.text = e.tweet_id
    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(path, encoding="unicode", xml_declaration=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write("\n")


def _quote_dot(s):
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _write_dot(g, node_ids, edges, component, path):
    lines = [f"digraph {_quote_dot(g.node_kind + '-' + g.edge_kind)} {{"]
    for node_id in node_ids:
        attrs = []
        for key, value in _node_attr_values(g.nodes[node_id], component).items():
            if value is not None:
                attrs.append(f"{key}={_quote_dot(value)}")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_quote_dot(node_id)}{suffix};")
    for e in edges:
        lines.append(
            f"  {_quote_dot(e.src)} -> {_quote_dot(e.dst)} "
            f"[timestamp_ms={e.timestamp_ms}, tweet_id={_quote_dot(e.tweet_id)}];"
        )
    lines.append("}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_graphml(path) -> InteractionGraph:
    """Round-trip loader for graphs written by export_graph."""
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    tree = ET.parse(path)
    graph = tree.getroot().find("g:graph", ns)
    if graph is None:
        raise DataError(f"no <graph> element in {path}")

    def data_map(el):
        return {d.get("key"): d.text or "" for d in el.findall("g:data", ns)}

    graph_data = data_map(graph)
    nodes = {}
    for el in graph.findall("g:node", ns):
        values = data_map(el)
        nodes[el.get("id")] = NodeInfo(
            external=values.get("external") == "true",
            sentiment=values.get("sentiment"),
            sentiment_score=float(values["sentiment_score"]) if "sentiment_score" in values else None,
            interaction_count=int(values["interaction_count"]) if "interaction_count" in values else None,
            friends=int(values["friends"]) if "friends" in values else None,
            followers=int(values["followers"]) if "followers" in values else None,
        )
    edges = []
    for el in graph.findall("g:edge", ns):
        values = data_map(el)
        edges.append(
            Edge(el.get("source"), el.get("target"), int(values["timestamp_ms"]), values["tweet_id"])
        )
    return InteractionGraph(
        node_kind=graph_data.get("node_kind", "tweet"),
        edge_kind=graph_data.get("edge_kind", "reply"),
        nodes=nodes,
        edges=edges,
    )
