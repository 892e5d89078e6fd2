#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy/Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--rows 20000] [--dim 256] [--repeat 3]

Imports both backends directly, so it reports regardless of which one the
package selected at import time.
"""

import argparse
import random
import string
import time

import numpy as np

from tweetscope.kernels import _ref

try:
    from tweetscope.kernels import _fast
except ImportError:
    _fast = None


def _texts(n, rng):
    words = ["".join(rng.choices(string.ascii_lowercase, k=rng.randint(3, 9))) for _ in range(400)]
    return [" ".join(rng.choices(words, k=rng.randint(8, 18))).encode() for _ in range(n)]


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--rows", type=int, default=20000)
    parser.add_argument("--dim", type=int, default=256)
    parser.add_argument("--latent", type=int, default=32)
    parser.add_argument("--k", type=int, default=6)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rng = random.Random(7)
    nprng = np.random.default_rng(7)
    texts = _texts(args.rows, rng)
    points = np.ascontiguousarray(nprng.normal(size=(args.rows, args.latent)))
    centroids = np.ascontiguousarray(nprng.normal(size=(args.k, args.latent)))
    unit = points / np.linalg.norm(points, axis=1, keepdims=True)
    query = np.ascontiguousarray(unit[0])

    cases = [
        ("hashed_ngram_counts", lambda m: m.hashed_ngram_counts(texts, args.dim, 7)),
        ("sqdist_argmin", lambda m: m.sqdist_argmin(points, centroids)),
        (
            "group_sums",
            lambda m: m.group_sums(points, m.sqdist_argmin(points, centroids)[0], args.k),
        ),
        ("dot_products", lambda m: m.dot_products(unit, query)),
    ]

    print(f"rows={args.rows} dim={args.dim} latent={args.latent} k={args.k} (best of {args.repeat})")
    print(f"{'kernel':<22}{'pure':>12}{'compiled':>12}{'speedup':>10}")
    for name, call in cases:
        t_ref = bench(lambda: call(_ref), args.repeat)
        if _fast is None:
            print(f"{name:<22}{t_ref * 1e3:>10.1f}ms{'n/a':>12}{'n/a':>10}")
            continue
        t_fast = bench(lambda: call(_fast), args.repeat)
        print(f"{name:<22}{t_ref * 1e3:>10.1f}ms{t_fast * 1e3:>10.1f}ms{t_ref / t_fast:>9.1f}x")

    if _fast is not None:
        a = _ref.hashed_ngram_counts(texts[:200], args.dim, 7)
        b = _fast.hashed_ngram_counts(texts[:200], args.dim, 7)
        assert np.array_equal(a, b), "backends disagree on the hash kernel"
        print("cross-check: hash kernel bit-identical across backends")


if __name__ == "__main__":
    main()
