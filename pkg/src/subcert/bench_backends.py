"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the two implementations of every coverage kernel plus the end-to-end
value-partition scan on the same random instance and prints a timing table:

    python -m subcert.bench_backends --n 20000 --degree 10 --k 50
"""

import argparse
import time

import numpy as np

from . import kernels
from .dual_submodular import method3
from .harness import random_bipartite
from .maximizers import greedy
from .objectives import CoverageOracle


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3


def bench(n=20000, degree=10, k=50, repeats=5):
    graph = random_bipartite(n, n, degree=degree, seed=1)
    oracle = CoverageOracle(graph)
    order = np.lexsort((np.arange(n), -oracle.singleton_values()))
    w = oracle.weights
    rows = []
    for name in [b for b in ("numba", "numpy") if b in kernels.IMPLEMENTATIONS]:
        impl = kernels.IMPLEMENTATIONS[name]

        def run_gains():
            impl["cover_gains"](graph.indptr, graph.indices, w,
                                np.zeros(graph.dual_count, np.bool_))

        def run_prefix():
            impl["cover_prefix"](graph.indptr, graph.indices, w,
                                 np.zeros(graph.dual_count, np.bool_),
                                 order, 0.0)

        def run_many():
            impl["cover_many"](graph.indptr, graph.indices, w,
                               np.zeros(graph.dual_count, np.bool_),
                               np.arange(n, dtype=np.int64), 0.0)

        run_gains(), run_prefix(), run_many()  # warm the JIT
        rows.append((name,
                     _time(run_gains, repeats),
                     _time(run_prefix, repeats),
                     _time(run_many, repeats)))

    # end-to-end timings under the active backend only
    tm3 = _time(lambda: method3(oracle, k), repeats)
    tgr = _time(lambda: greedy(oracle, k), max(1, repeats // 2))
    return rows, tm3, tgr


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--degree", type=int, default=10)
    ap.add_argument("--k", type=int, default=50)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args(argv)

    rows, tm3, tgr = bench(args.n, args.degree, args.k, args.repeats)
    print(f"instance: |P| = |D| = {args.n}, degree = {args.degree}, "
          f"k = {args.k}; active backend: {kernels.BACKEND}")
    print(f"{'backend':<8} {'gains ms':>10} {'prefix ms':>10} {'mark-all ms':>12}")
    for name, tg, tp, tm in rows:
        print(f"{name:<8} {tg:>10.3f} {tp:>10.3f} {tm:>12.3f}")
    if len(rows) == 2:
        speed = [rows[1][i] / rows[0][i] for i in (1, 2, 3)]
        print(f"numpy/numba ratios: gains {speed[0]:.1f}x, "
              f"prefix {speed[1]:.1f}x, mark-all {speed[2]:.1f}x")
    print(f"value-partition scan ({kernels.BACKEND}): {tm3:.2f} ms; "
          f"greedy trace to k={args.k}: {tgr:.2f} ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
