"""Objective families: worked examples, construction errors, and the
monotone/submodular contracts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import subcert as sc
from subcert.bipartite import GraphError

from conftest import random_small_graphs, tiny_graph


class TestCoverage:
    def test_union_counts(self):
        cov = sc.coverage_oracle(tiny_graph())
        assert cov.eval([0, 1]) == 3.0
        assert cov.eval([]) == 0.0
        assert cov.eval([0]) == 2.0

    def test_integer_evaluation(self):
        cov = sc.coverage_oracle(tiny_graph())
        assert cov.eval_int([0, 1]) == 3
        assert isinstance(cov.eval_int([0]), int)

    def test_duplicate_ids_collapse(self):
        cov = sc.coverage_oracle(tiny_graph())
        assert cov.eval([0, 0, 1]) == cov.eval([0, 1])

    def test_isolated_dual_rejected(self):
        with pytest.raises(GraphError):
            sc.BipartiteGraph(2, 3, [(0, 0), (1, 1)])  # dual 2 uncovered

    def test_out_of_range_id(self):
        cov = sc.coverage_oracle(tiny_graph())
        with pytest.raises(ValueError):
            cov.eval([5])


class TestWeightedCoverage:
    def test_weighted_example(self):
        o = sc.weighted_coverage_oracle(tiny_graph(), [2.0, 3.0, 5.0])
        assert o.eval([0]) == 5.0  # covers b0 (2) and b1 (3)
        assert o.eval([]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            sc.weighted_coverage_oracle(tiny_graph(), [1.0, 2.0])

    def test_unit_weights_reduce_to_coverage(self):
        # exhaustive over all subsets of several random graphs with |P| <= 8
        for g in random_small_graphs(10, max_primal=8, max_dual=10, seed=3):
            plain = sc.coverage_oracle(g)
            unit = sc.weighted_coverage_oracle(g, np.ones(g.dual_count))
            for mask in range(1 << g.primal_count):
                ids = [a for a in range(g.primal_count) if (mask >> a) & 1]
                assert plain.eval(ids) == unit.eval(ids)


class TestFacilityLocation:
    def test_mean_of_row_maxima(self):
        o = sc.facility_location_oracle([[1, 2], [3, 0]])
        assert o.eval([0]) == 2.0
        assert o.eval([0, 1]) == 2.5
        assert o.eval([]) == 0.0

    def test_empty_matrix_rejected(self):
        with pytest.raises(ValueError):
            sc.facility_location_oracle(np.empty((0, 0)))

    def test_eval_masks_matches_eval(self):
        rng = np.random.default_rng(0)
        o = sc.facility_location_oracle(rng.uniform(0, 5, size=(7, 6)))
        masks = np.arange(1 << 6)
        table = o.eval_masks(masks)
        for mask in (0, 1, 13, 63, 42):
            ids = [a for a in range(6) if (mask >> a) & 1]
            assert table[mask] == pytest.approx(o.eval(ids), abs=1e-12)


class TestMovieRec:
    def test_single_movie(self):
        o = sc.movie_rec_oracle([[5.0, 1.0]])
        assert o.eval([0]) == 7.0  # 5 + 1 ratings, one user above 4.5
        assert o.eval([]) == 0.0

    def test_shared_strong_user_counted_once(self):
        o = sc.movie_rec_oracle([[5.0], [5.0]])
        assert o.eval([0, 1]) == 11.0

    def test_power_variant_is_power_of_scaled_sum(self):
        ratings = np.array([[1.0, 3.0], [5.0, 2.0]])
        o = sc.movie_rec_power_oracle(ratings, alpha=0.8)
        want = ((ratings.sum(axis=0) / 2).sum()) ** 0.8
        assert o.eval([0, 1]) == pytest.approx(want)


class TestRevenue:
    def test_alpha_one_is_additive(self):
        rng = np.random.default_rng(1)
        w = rng.uniform(0, 2, size=(4, 5))
        o = sc.revenue_oracle(w, alpha=1.0)
        for ids in ([], [0], [1, 3], [0, 1, 2, 3, 4]):
            assert o.eval(ids) == pytest.approx(w[:, ids].sum())

    def test_square_root_example(self):
        o = sc.revenue_oracle([[1.0, 1.0]], alpha=0.5)
        assert o.eval([0, 1]) == pytest.approx(math.sqrt(2))
        assert o.eval([]) == 0.0

    def test_alpha_range(self):
        with pytest.raises(ValueError):
            sc.revenue_oracle([[1.0]], alpha=0.0)
        with pytest.raises(ValueError):
            sc.revenue_oracle([[1.0]], alpha=1.5)


class TestEntropy:
    def test_fair_coin(self):
        o = sc.entropy_oracle([[0], [1]])
        assert o.eval([0]) == pytest.approx(math.log(2))

    def test_duplicate_column_adds_nothing(self):
        o = sc.entropy_oracle([[0, 0], [1, 1]])
        assert o.eval([0, 1]) == pytest.approx(o.eval([0]))

    def test_independent_columns_add(self):
        o = sc.entropy_oracle([[0, 0], [0, 1], [1, 0], [1, 1]])
        assert o.eval([0, 1]) == pytest.approx(2 * math.log(2))

    def test_zero_rows_rejected(self):
        with pytest.raises(ValueError):
            sc.entropy_oracle(np.empty((0, 3)))

    def test_column_order_irrelevant(self):
        rng = np.random.default_rng(2)
        o = sc.entropy_oracle(rng.integers(0, 3, size=(40, 5)))
        assert o.eval([3, 1, 4]) == o.eval([4, 3, 1])

    def test_joint_variant_scores_label_entropy_on_empty(self):
        labels = np.array([0, 0, 1, 1])
        o = sc.entropy_oracle(np.zeros((4, 2)), labels=labels)
        assert o.eval([]) == pytest.approx(math.log(2))


class TestAdditive:
    def test_examples(self):
        o = sc.additive_oracle([3.0, 2.0, 1.0])
        assert o.eval([0, 2]) == 4.0
        assert o.eval([]) == 0.0
        assert o.eval([0, 1, 2]) == 6.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            sc.additive_oracle([1.0, -0.5])


class TestShift:
    def test_empty_pivot_is_identity(self):
        cov = sc.coverage_oracle(tiny_graph())
        sh = sc.shift(cov, ())
        for ids in ([], [0], [1], [0, 1]):
            assert sh.eval(ids) == cov.eval(ids)

    def test_coverage_example(self):
        cov = sc.coverage_oracle(tiny_graph())
        sh = sc.shift(cov, [0])
        assert sh.eval([1]) == 1.0  # only b2 is new
        assert sh.eval([0]) == 0.0

    def test_pivot_out_of_range(self):
        with pytest.raises(ValueError):
            sc.shift(sc.coverage_oracle(tiny_graph()), [9])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(3, 9))
    def test_shift_identity_is_exact(self, seed, n):
        rng = np.random.default_rng(seed)
        o = sc.facility_location_oracle(rng.uniform(0, 5, size=(6, n)))
        pivot = tuple(np.flatnonzero(rng.random(n) < 0.4))
        rest = tuple(np.flatnonzero(rng.random(n) < 0.4))
        sh = sc.shift(o, pivot)
        union = sorted(set(pivot) | set(rest))
        assert sh.eval(rest) == o.eval(union) - o.eval(pivot)

    def test_shifted_fast_paths_agree_with_eval(self):
        rng = np.random.default_rng(5)
        g = sc.random_bipartite(8, 12, p=0.35, seed=9)
        cov = sc.coverage_oracle(g)
        sh = sc.shift(cov, [1, 4])
        sing = sh.singleton_values()
        for a in range(cov.n):
            assert sing[a] == pytest.approx(sh.eval([a]), abs=1e-12)
        order = np.argsort(-sing, kind="stable")
        pref = sh.prefix_values(order)
        running = []
        for i in range(1, cov.n + 1):
            running.append(sh.eval(order[:i]))
        assert np.allclose(pref, running, atol=1e-12)


class TestAdversarial:
    def test_singletons_and_pairs(self):
        c = 10.0
        o = sc.adversarial_instance(5, c)
        assert o.eval([0]) == c
        assert o.eval([0, 1]) == c + 1
        assert o.eval([5]) == c / 2  # first ground-block element

    def test_small_c_rejected(self):
        with pytest.raises(ValueError):
            sc.adversarial_instance(5, 2.0)

    def test_valid_for_large_c(self):
        rep = sc.check_oracle(sc.adversarial_instance(6, 9.0), trials=400,
                              seed=1)
        assert rep.ok, rep


class TestChecker:
    def test_flags_a_broken_oracle(self):
        class Supermodular(sc.Oracle):
            def eval(self, ids):
                t = sc.as_elements(ids, self.n)
                return float(len(t) ** 2)  # increasing marginals

        rep = sc.check_oracle(Supermodular(8), trials=300, seed=0)
        assert rep.submodular_violations > 0
        assert not rep.ok

    def test_passes_coverage(self):
        g = sc.random_bipartite(10, 14, p=0.3, seed=2)
        rep = sc.check_oracle(sc.coverage_oracle(g), trials=500, seed=3)
        assert rep.ok


class TestCounter:
    def test_counts_logical_evaluations(self):
        o, counter = sc.counted(sc.coverage_oracle(tiny_graph()))
        o.eval([0])
        o.singleton_values()
        st = o.selection()
        st.gains(np.array([0, 1]))
        st.add(0)
        assert counter.count == 1 + 2 + 2 + 1

    def test_thread_safety(self):
        import threading

        o, counter = sc.counted(sc.additive_oracle(np.ones(4)))

        def worker():
            for _ in range(200):
                o.eval([0, 1])

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert counter.count == 1600
