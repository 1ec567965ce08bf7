"""Coverage dual bounds: worked examples, duality, and dominance."""

from fractions import Fraction

import numpy as np
import pytest

import subcert as sc

from conftest import random_small_graphs, star_graph, tiny_graph


def all_subsets(count):
    for mask in range(1 << count):
        yield [i for i in range(count) if (mask >> i) & 1]


class TestAdditiveDualBound:
    def test_tiny_graph(self):
        # v = (1/2, 1/2, 1/2); prefix sums 0.5, 1.0, 1.5 -> i* = 3 at k = 1
        assert sc.additive_dual_bound(tiny_graph(), 1) == 3
        assert sc.exact_max_coverage(tiny_graph(), 1) == 2

    def test_vacuous_when_mass_below_k(self):
        g = tiny_graph()  # total v-mass = 1.5
        assert sc.additive_dual_bound(g, 2) == g.dual_count + 1

    def test_star_graph(self):
        g = star_graph(3, 4)
        assert sc.additive_dual_bound(g, 1) == 5  # v = 1/4 each
        assert sc.exact_max_coverage(g, 1) == 4


class TestEll:
    def test_examples(self):
        g = tiny_graph()
        assert sc.ell(g, []) == 0.0
        assert sc.ell(g, [0, 1]) == pytest.approx(1.0)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            sc.ell(tiny_graph(), [7])

    def test_lower_bounds_min_cover_exhaustively(self):
        for g in random_small_graphs(12, max_primal=8, max_dual=8, seed=21):
            for t in all_subsets(g.dual_count):
                assert sc.ell(g, t) <= sc.exact_min_cover(g, t) + 1e-9


class TestPartitionDualBound:
    def test_star_graph(self):
        assert sc.partition_dual_bound(star_graph(2, 3), 2) == 6

    def test_tiny_graph(self):
        assert sc.partition_dual_bound(tiny_graph(), 1) == 2

    def test_saturates_at_dual_count(self):
        g = tiny_graph()
        assert sc.partition_dual_bound(g, g.dual_count + 5) == g.dual_count

    def test_emitted_partition_is_valid(self):
        for g in random_small_graphs(10, max_primal=7, max_dual=9, seed=88):
            for k in range(1, g.primal_count + 1):
                part = sc.coverage_partition(g, k)
                assert part.breakpoints[0] == 0
                assert all(w <= 1.0 + 1e-12 for w in part.weights)
                pieces = part.parts()
                covered = np.concatenate([p for p in pieces if p.size])
                assert sorted(covered) == sorted(part.order[:part.size])
                d = sc.dual_values(g).d
                for p, w in zip(pieces, part.weights):
                    if p.size:
                        assert w == pytest.approx(p.size * (1.0 / d[p]).max())


class TestExactMinCover:
    def test_examples(self):
        g = tiny_graph()
        assert sc.exact_min_cover(g, []) == 0
        assert sc.exact_min_cover(g, [0, 2]) == 2  # b0 and b2 need both primals
        for a in range(g.primal_count):
            assert sc.exact_min_cover(g, list(g.neighbors(a))) == 1


class TestDualityAndDominance:
    def test_weak_duality(self):
        # max f(S) < v  <=>  min over |T| >= v of g(T) > k
        for g in random_small_graphs(12, max_primal=6, max_dual=8, seed=33):
            gvals = {}
            for t in all_subsets(g.dual_count):
                gvals[frozenset(t)] = sc.exact_min_cover(g, t)
            min_g_by_size = {}
            for t, gv in gvals.items():
                for v in range(len(t) + 1):
                    min_g_by_size[v] = min(min_g_by_size.get(v, 10 ** 9), gv)
            for k in range(1, g.primal_count + 1):
                fopt = sc.exact_max_coverage(g, k)
                for v in range(1, g.dual_count + 1):
                    lhs = fopt < v
                    rhs = min_g_by_size.get(v, 10 ** 9) > k
                    assert lhs == rhs, (g, k, v)

    def test_additive_bound_strictly_exceeds_opt(self):
        for g in random_small_graphs(15, max_primal=7, max_dual=9, seed=44):
            for k in range(1, g.primal_count + 1):
                assert sc.exact_max_coverage(g, k) \
                    <= sc.additive_dual_bound(g, k) - 1

    def test_partition_never_looser_than_additive(self):
        for g in random_small_graphs(15, max_primal=7, max_dual=9, seed=55):
            for k in range(1, g.primal_count + 1):
                assert sc.partition_dual_bound(g, k) \
                    <= sc.additive_dual_bound(g, k) - 1

    def test_partition_sound(self):
        for g in random_small_graphs(15, max_primal=7, max_dual=9, seed=66):
            for k in range(1, g.primal_count + 1):
                assert sc.exact_max_coverage(g, k) \
                    <= sc.partition_dual_bound(g, k)

    def test_partition_matches_value_partition_scan(self):
        # the coverage specialization: floor(scan bound) equals the
        # partition bound on unweighted graphs
        for g in random_small_graphs(20, max_primal=8, max_dual=10, seed=77):
            cov = sc.coverage_oracle(g)
            for k in range(1, g.primal_count + 1):
                m2 = sc.partition_dual_bound(g, k)
                m3 = sc.method3(cov, k)[0]
                assert m2 == int(np.floor(m3 + 1e-9)), (g, k, m2, m3)


class TestExactRationalPrefix:
    def test_prefix_comparison_is_exact_at_boundaries(self):
        # three unit thirds sum to exactly 1: must NOT exceed k = 1
        g = star_graph(1, 3)
        assert sc.additive_dual_bound(g, 1) == g.dual_count + 1
        # fractions really are used: 1/3 + 1/3 + 1/3 > 1 would be a float lie
        assert Fraction(1, 3) * 3 == 1
