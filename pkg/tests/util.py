"""Shared test helpers: record factories and independent oracles.

Oracles here deliberately avoid the package's code paths (plain dict/math
reimplementations, numpy where the engine loops, loops where the engine
uses numpy) so each check is a genuine second route.
"""

import numpy as np

from tweetscope.ingest import CleanTweet, RawTweet
from tweetscope.topics import tokenize


def raw_tweet(tid, text="hello world", ts=1_667_952_000_000, user="u1", **kw):
    return RawTweet(id=tid, timestamp_ms=ts, user_id=user, full_text=text, **kw)


def clean_tweet(tid, text="hello world", ts=1_667_952_000_000, user="u1", **kw):
    from tweetscope.ingest import normalize_text

    norm = normalize_text(text)
    return CleanTweet(
        id=tid,
        timestamp_ms=ts,
        user_id=user,
        full_text=text,
        norm_text=norm,
        tokens=tokenize(norm),
        **kw,
    )


# --- graph oracles --------------------------------------------------------


def wcc_oracle(nodes, edges):
    """Union-find over undirected pairs; returns a set of frozensets."""
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for src, dst in edges:
        parent[find(src)] = find(dst)
    groups = {}
    for n in nodes:
        groups.setdefault(find(n), set()).add(n)
    return {frozenset(g) for g in groups.values()}


def scc_oracle(nodes, edges):
    """Mutual reachability via boolean transitive closure (O(n^3))."""
    order = sorted(nodes)
    pos = {n: i for i, n in enumerate(order)}
    n = len(order)
    reach = np.eye(n, dtype=bool)
    for src, dst in edges:
        reach[pos[src], pos[dst]] = True
    for k in range(n):
        reach |= np.outer(reach[:, k], reach[k, :])
    mutual = reach & reach.T
    groups = {}
    for i, node in enumerate(order):
        key = tuple(mutual[i])
        groups.setdefault(key, set()).add(node)
    return {frozenset(g) for g in groups.values()}


def bfs_forward_oracle(nodes, edges, seeds):
    adj = {n: [] for n in nodes}
    for src, dst in edges:
        adj[src].append(dst)
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        nxt = []
        for node in frontier:
            for m in adj[node]:
                if m not in seen:
                    seen.add(m)
                    nxt.append(m)
        frontier = nxt
    return seen - set(seeds)


def random_digraph(rng, max_nodes=40):
    n = rng.randint(2, max_nodes)
    nodes = [f"n{i:02d}" for i in range(n)]
    density = rng.choice([0.02, 0.05, 0.1, 0.2])
    edges = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                edges.append((nodes[i], nodes[j]))
    # occasional self loops and parallel edges
    for _ in range(rng.randint(0, 3)):
        a = nodes[rng.randrange(n)]
        edges.append((a, a))
    if edges and rng.random() < 0.5:
        edges.append(edges[0])
    return nodes, edges


def graph_from(nodes, edges, node_kind="user", edge_kind="reply"):
    from tweetscope.graphs import Edge, InteractionGraph, NodeInfo

    node_map = {n: NodeInfo() for n in nodes}
    edge_list = [
        Edge(src, dst, 1_000_000 + i, f"e{i}") for i, (src, dst) in enumerate(edges)
    ]
    return InteractionGraph(node_kind, edge_kind, node_map, edge_list)


# --- tf-idf oracle ---------------------------------------------------------


def tfidf_oracle(docs):
    """Straight-from-the-formula tf-idf: returns (idf, weights) where
    weights[d] maps term -> L2-normalized tf*idf."""
    import math

    n = len(docs)
    df = {}
    for doc in docs:
        for term in set(doc):
            df[term] = df.get(term, 0) + 1
    idf = {t: math.log((1 + n) / (1 + df[t])) + 1.0 for t in df}
    weights = []
    for doc in docs:
        tf = {}
        for term in doc:
            tf[term] = tf.get(term, 0) + 1
        w = {t: c * idf[t] for t, c in tf.items()}
        norm = math.sqrt(sum(v * v for v in w.values()))
        weights.append({t: v / norm for t, v in w.items()} if norm else {})
    return idf, weights


def top_terms_oracle(weights, doc_indices, n):
    scores = {}
    for i in doc_indices:
        for term, w in weights[i].items():
            scores[term] = scores.get(term, 0.0) + w
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]


# --- misc -------------------------------------------------------------------


def random_noisy_string(rng):
    """Strings that stress normalization: mentions, urls, unicode, runs of
    whitespace, stray @ and scheme fragments."""
    pieces = []
    for _ in range(rng.randint(0, 12)):
        kind = rng.randrange(10)
        if kind == 0:
            pieces.append("@" * rng.randint(1, 3) + rng.choice(["alice", "bob_1", "x", "日本語"]))
        elif kind == 1:
            pieces.append(rng.choice(["https://", "http://"]) + rng.choice(["t.co/xyz", "a.b/c?d=1#e", ""]))
        elif kind == 2:
            pieces.append(rng.choice(["hello", "crypto", "Ω≈ç√", "naïve", "emoji🙂", "42"]))
        elif kind == 3:
            pieces.append(rng.choice([" ", "  ", "\t", "\n", " \t "]))
        elif kind == 4:
            pieces.append(rng.choice(["@", "@@", "http", "https", "://", "a@b.com"]))
        else:
            alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJ @:/.#?!"
            pieces.append("".join(rng.choice(alphabet) for _ in range(rng.randint(1, 10))))
    return "".join(pieces)
