"""Timing comparison of the compiled kernels against the pure-Python
fallbacks.

Both backends are imported directly (bypassing the env-var dispatch in
followdrop._kernels), run on identical inputs with identical pre-drawn
randomness, and checked for agreement before timing.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from followdrop._kernels import gibbs_py, graph_py, pvdbow_py
from followdrop.embeddings import SIGMOID_TABLE

try:
    from followdrop._kernels import _gibbs, _graph, _pvdbow
    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False


def _median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def bench_gibbs(quick):
    n_docs, vocab, K = (50, 500, 10) if quick else (200, 2000, 20)
    n_tokens = 10_000 if quick else 50_000
    rng = np.random.default_rng(0)
    doc_of = rng.integers(0, n_docs, n_tokens).astype(np.int32)
    word_of = rng.integers(0, vocab, n_tokens).astype(np.int32)
    z = rng.integers(0, K, n_tokens).astype(np.int32)
    ndk = np.zeros((n_docs, K), dtype=np.int32)
    nkw = np.zeros((K, vocab), dtype=np.int32)
    nk = np.zeros(K, dtype=np.int32)
    np.add.at(ndk, (doc_of, z), 1)
    np.add.at(nkw, (z, word_of), 1)
    np.add.at(nk, z, 1)
    u = rng.random(n_tokens)

    def run(mod):
        state = (z.copy(), ndk.copy(), nkw.copy(), nk.copy())
        mod.gibbs_train_sweep(doc_of, word_of, *state, 0.5, 0.01, u)
        return state

    if HAVE_COMPILED:
        sa, sb = run(gibbs_py), run(_gibbs)
        assert all(np.array_equal(a, b) for a, b in zip(sa, sb))
    label = f"gibbs_train_sweep   ({n_tokens} tokens, K={K})"
    return label, run


def bench_pvdbow(quick):
    n_docs, vocab, dim = (50, 500, 25) if quick else (200, 2000, 50)
    n_tokens = 5_000 if quick else 20_000
    n_neg = 5
    rng = np.random.default_rng(1)
    doc_of = rng.integers(0, n_docs, n_tokens).astype(np.int32)
    word_of = rng.integers(0, vocab, n_tokens).astype(np.int32)
    docs = ((rng.random((n_docs, dim)) - 0.5) / dim).astype(np.float64)
    words = np.zeros((vocab, dim), dtype=np.float64)
    negs = rng.integers(0, vocab, n_tokens * n_neg).astype(np.int32)

    def run(mod):
        d, w = docs.copy(), words.copy()
        mod.pvdbow_epoch(doc_of, word_of, d, w, negs, n_neg,
                         SIGMOID_TABLE, 0.025, 0.0001, 0, n_tokens * 2)
        return d, w

    if HAVE_COMPILED:
        (da, wa), (db, wb) = run(pvdbow_py), run(_pvdbow)
        np.testing.assert_allclose(da, db, rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(wa, wb, rtol=1e-9, atol=1e-12)
    label = f"pvdbow_epoch        ({n_tokens} tokens, dim={dim})"
    return label, run


def bench_graph(quick):
    n, p = (100, 0.05) if quick else (300, 0.02)
    rng = np.random.default_rng(2)
    dense = rng.random((n, n)) < p
    np.fill_diagonal(dense, False)
    indptr = np.zeros(n + 1, dtype=np.int32)
    indices = []
    for v in range(n):
        row = np.flatnonzero(dense[v])
        indices.extend(row)
        indptr[v + 1] = len(indices)
    indices = np.asarray(indices, dtype=np.int32)

    def run(mod):
        return mod.brandes_centrality(indptr, indices, n)

    if HAVE_COMPILED:
        (ba, ca), (bb, cb) = run(graph_py), run(_graph)
        assert np.array_equal(ba, bb) and np.array_equal(ca, cb)
    label = f"brandes_centrality  (n={n}, {len(indices)} edges)"
    return label, run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true",
                        help="smaller problem sizes")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled kernels not built; timing the fallbacks only")

    pairs = {
        "gibbs": (gibbs_py, _gibbs if HAVE_COMPILED else None),
        "pvdbow": (pvdbow_py, _pvdbow if HAVE_COMPILED else None),
        "graph": (graph_py, _graph if HAVE_COMPILED else None),
    }
    benches = {
        "gibbs": bench_gibbs(args.quick),
        "pvdbow": bench_pvdbow(args.quick),
        "graph": bench_graph(args.quick),
    }

    header = f"{'kernel':<50} {'python':>10} {'compiled':>10} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, (label, run) in benches.items():
        py_mod, c_mod = pairs[name]
        t_py = _median_time(lambda: run(py_mod), args.repeats)
        if c_mod is None:
            print(f"{label:<50} {t_py * 1000:9.1f}ms {'-':>10} {'-':>9}")
            continue
        t_c = _median_time(lambda: run(c_mod), args.repeats)
        print(f"{label:<50} {t_py * 1000:9.1f}ms {t_c * 1000:9.1f}ms "
              f"{t_py / t_c:8.1f}x")


if __name__ == "__main__":
    main()
