"""Shared instance builders and the enumerable soundness corpus."""

import numpy as np
import pytest

import subcert as sc
from subcert import kernels


def tiny_graph():
    """Two primals over three duals: N(a0)={b0,b1}, N(a1)={b1,b2}."""
    return sc.BipartiteGraph(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)])


def star_graph(stars, d):
    """Disjoint stars: primal a covers duals a*d .. a*d+d-1."""
    edges = [(a, a * d + j) for a in range(stars) for j in range(d)]
    return sc.BipartiteGraph(stars, stars * d, edges)


def random_small_graphs(count, max_primal=8, max_dual=10, seed=0):
    rng = np.random.default_rng(seed)
    graphs = []
    for _ in range(count):
        p = int(rng.integers(1, max_primal + 1))
        d = int(rng.integers(1, max_dual + 1))
        graphs.append(sc.random_bipartite(
            p, d, p=float(rng.uniform(0.15, 0.8)),
            seed=int(rng.integers(1 << 30))))
    return graphs


def corpus_instance(family, seed):
    """One random enumerable instance of the named objective family."""
    rng = np.random.default_rng(seed)
    if family == "coverage":
        g = sc.random_bipartite(int(rng.integers(4, 13)),
                                int(rng.integers(5, 17)),
                                p=float(rng.uniform(0.15, 0.6)),
                                seed=int(rng.integers(1 << 30)))
        return sc.coverage_oracle(g), {"graph": g}
    n = int(rng.integers(5, 15))
    if family == "facility":
        ratings = rng.integers(0, 6, size=(int(rng.integers(10, 40)), n))
        return sc.facility_location_oracle(ratings.astype(float)), {}
    if family == "entropy":
        samples = rng.integers(0, 3, size=(int(rng.integers(30, 90)), n))
        return sc.entropy_oracle(samples), {}
    if family == "revenue":
        w = rng.uniform(0, 1, size=(n, n)) * (rng.random((n, n)) < 0.4)
        return sc.revenue_oracle(w, alpha=float(rng.uniform(0.5, 1.0))), {}
    if family == "additive":
        return sc.additive_oracle(rng.uniform(0.1, 10.0, size=n)), {}
    raise ValueError(family)


CORPUS_FAMILIES = ("coverage", "facility", "entropy", "revenue", "additive")


class CorpusRecord:
    __slots__ = ("family", "seed", "oracle", "meta", "kmax", "opt_values",
                 "trace")

    def __init__(self, family, seed, oracle, meta, kmax, opt_values, trace):
        self.family = family
        self.seed = seed
        self.oracle = oracle
        self.meta = meta
        self.kmax = kmax
        self.opt_values = opt_values  # exact optima indexed by k = 0..kmax
        self.trace = trace


def build_corpus(per_family, seed0=0):
    records = []
    for family in CORPUS_FAMILIES:
        for i in range(per_family):
            seed = seed0 + 1000 * CORPUS_FAMILIES.index(family) + i
            oracle, meta = corpus_instance(family, seed)
            kmax = min(5, oracle.n)
            _, opt_values = sc.brute_force_schedule(oracle, kmax)
            trace = sc.greedy(oracle, min(oracle.n, max(kmax, 2)))
            records.append(CorpusRecord(family, seed, oracle, meta, kmax,
                                        opt_values, trace))
    return records


@pytest.fixture(scope="session")
def soundness_corpus():
    """≥ 200 enumerable instances per objective family with exact optima."""
    import time
    from types import SimpleNamespace

    kernels.warmup()
    t0 = time.perf_counter()
    records = build_corpus(per_family=200)
    return SimpleNamespace(records=records,
                           build_seconds=time.perf_counter() - t0)


@pytest.fixture(scope="session")
def mini_corpus():
    """A light corpus for module-level property tests."""
    kernels.warmup()
    return build_corpus(per_family=12, seed0=90000)
