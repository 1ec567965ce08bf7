"""Backend parity: the numba kernels and the numpy fallback must agree."""

import numpy as np
import pytest

import subcert as sc
from subcert import kernels


pytestmark = pytest.mark.skipif(
    "numba" not in kernels.IMPLEMENTATIONS,
    reason="numba unavailable; only one backend to compare")


def _fixture_graph():
    return sc.random_bipartite(60, 80, p=0.15, seed=14)


def test_gains_agree():
    g = _fixture_graph()
    w = np.ones(g.dual_count)
    covered = np.zeros(g.dual_count, np.bool_)
    covered[::3] = True
    a = kernels.IMPLEMENTATIONS["numba"]["cover_gains"](
        g.indptr, g.indices, w, covered)
    b = kernels.IMPLEMENTATIONS["numpy"]["cover_gains"](
        g.indptr, g.indices, w, covered)
    assert np.array_equal(a, b)


def test_prefix_agree_and_mutate_covered_identically():
    g = _fixture_graph()
    w = np.ones(g.dual_count)
    order = np.random.default_rng(3).permutation(g.primal_count).astype(np.int64)
    cov_a = np.zeros(g.dual_count, np.bool_)
    cov_b = np.zeros(g.dual_count, np.bool_)
    a = kernels.IMPLEMENTATIONS["numba"]["cover_prefix"](
        g.indptr, g.indices, w, cov_a, order, 0.0)
    b = kernels.IMPLEMENTATIONS["numpy"]["cover_prefix"](
        g.indptr, g.indices, w, cov_b, order, 0.0)
    assert np.array_equal(a, b)
    assert np.array_equal(cov_a, cov_b)


def test_mark_many_agree():
    g = _fixture_graph()
    w = np.ones(g.dual_count)
    ids = np.array([0, 5, 17, 42], np.int64)
    cov_a = np.zeros(g.dual_count, np.bool_)
    cov_b = np.zeros(g.dual_count, np.bool_)
    a = kernels.IMPLEMENTATIONS["numba"]["cover_many"](
        g.indptr, g.indices, w, cov_a, ids, 0.0)
    b = kernels.IMPLEMENTATIONS["numpy"]["cover_many"](
        g.indptr, g.indices, w, cov_b, ids, 0.0)
    assert a == b
    assert np.array_equal(cov_a, cov_b)


def test_bench_entrypoint_runs():
    from subcert.bench_backends import bench

    rows, t_scan, t_greedy = bench(n=400, degree=6, k=10, repeats=2)
    assert len(rows) >= 1
    assert t_scan > 0 and t_greedy > 0
