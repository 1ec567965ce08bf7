"""Maximization algorithms under a cardinality constraint.

All greedy-style algorithms return a :class:`GreedyTrace` of nested prefix
solutions; ties between marginal gains (within ``GAIN_TIE_TOL``) always go
to the lowest element id so runs are reproducible.
"""

import itertools
import time
from dataclasses import dataclass, field
from math import comb, ceil, log

import numpy as np

GAIN_TIE_TOL = 1e-12
DEFAULT_ENUM_CAP = 5_000_000


class EnumerationCapError(RuntimeError):
    """Raised when an exact enumeration would exceed its configured cap."""


@dataclass
class GreedyTrace:
    """Nested prefix solutions S_1 ⊆ S_2 ⊆ ... with values and step gains."""

    chosen: list
    values: np.ndarray      # f(S_i) for i = 1..kmax
    gains: np.ndarray       # f_{S_{i-1}}(a_i)
    base_value: float       # f(S_0) = f(∅)
    step_ms: np.ndarray = field(default=None)  # cumulative wall time per step

    @property
    def kmax(self):
        return len(self.chosen)

    def prefix(self, i):
        """The solution of size i as a sorted tuple (i = 0 gives ∅)."""
        if not 0 <= i <= self.kmax:
            raise ValueError(f"prefix size {i} outside trace of length {self.kmax}")
        return tuple(sorted(self.chosen[:i]))

    def value_at(self, i):
        return self.base_value if i == 0 else float(self.values[i - 1])


def _pick_best(candidates, gains, tol=GAIN_TIE_TOL):
    """Index of the winner among ascending-id candidates: max gain, then lowest id."""
    best = gains.max()
    return int(np.argmax(gains >= best - tol))


def _run_trace(oracle, kmax, pick):
    """Shared greedy loop; ``pick`` maps (step, remaining, state) -> position."""
    n = oracle.n
    if not 1 <= kmax <= n:
        raise ValueError(f"kmax must lie in [1, {n}], got {kmax}")
    state = oracle.selection()
    base = state.value
    remaining = np.arange(n, dtype=np.int64)
    chosen, values, gains, step_ms = [], [], [], []
    t0 = time.perf_counter()
    prev = base
    for step in range(kmax):
        pos = pick(step, remaining, state)
        a = int(remaining[pos])
        val = state.add(a)
        chosen.append(a)
        values.append(val)
        gains.append(val - prev)
        prev = val
        remaining = np.delete(remaining, pos)
        step_ms.append((time.perf_counter() - t0) * 1e3)
    return GreedyTrace(chosen, np.array(values), np.array(gains), base,
                       np.array(step_ms))


def greedy(oracle, kmax):
    """Plain greedy: each step adds the element of largest marginal gain."""
    def pick(step, remaining, state):
        return _pick_best(remaining, state.gains(remaining))
    return _run_trace(oracle, kmax, pick)


def sample_greedy(oracle, k, epsilon, seed):
    """Subsampled greedy: each step picks the best of a uniform sample of
    size min(n, ceil(n·ln(1/ε)/k)) drawn without replacement."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    n = oracle.n
    size = min(n, ceil(n * log(1.0 / epsilon) / k))
    rng = np.random.default_rng(seed)

    def pick(step, remaining, state):
        if size >= remaining.size:
            sample = remaining
        else:
            sample = np.sort(rng.choice(remaining, size=size, replace=False))
        pos = _pick_best(sample, state.gains(sample))
        return int(np.searchsorted(remaining, sample[pos]))

    return _run_trace(oracle, k, pick)


def random_greedy(oracle, k, seed):
    """Randomized greedy: each step picks uniformly among the k remaining
    elements of highest marginal gain."""
    rng = np.random.default_rng(seed)

    def pick(step, remaining, state):
        g = state.gains(remaining)
        pool = np.lexsort((remaining, -g))[:min(k, remaining.size)]
        return int(pool[rng.integers(pool.size)])

    return _run_trace(oracle, k, pick)


def local_search(oracle, k, tol=1e-9):
    """Single-swap local search started from the top-k singleton set.

    First-improvement passes in ascending id order, repeated until a full
    pass finds no swap improving by more than ``tol``.  Returns the final
    set as a sorted tuple.
    """
    n = oracle.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    sing = oracle.singleton_values()
    order = np.lexsort((np.arange(n), -sing))
    current = sorted(int(a) for a in order[:k])
    value = float(oracle.eval(current))
    if k == n:
        return tuple(current)
    improved = True
    while improved:
        improved = False
        inside = list(current)
        outside = sorted(set(range(n)) - set(current))
        for a_out in inside:
            for a_in in outside:
                cand = sorted(set(current) - {a_out} | {a_in})
                v = float(oracle.eval(cand))
                if v > value + tol:
                    current, value = cand, v
                    improved = True
                    break
            if improved:
                break
    return tuple(current)


def brute_force_opt(oracle, k, cap=DEFAULT_ENUM_CAP):
    """Exact optimum over all subsets of size ≤ k by enumeration.

    Raises :class:`EnumerationCapError` when the number of candidate sets
    exceeds ``cap`` rather than silently truncating.
    """
    sets, values = brute_force_schedule(oracle, k, cap)
    return sets[k], values[k]


def brute_force_schedule(oracle, kmax, cap=DEFAULT_ENUM_CAP):
    """Exact optima for every k = 0..kmax from one enumeration sweep.

    Returns (best_sets, best_values) indexed by k; best at k is over all
    subsets of size ≤ k.
    """
    n = oracle.n
    if not 0 <= kmax <= n:
        raise ValueError(f"k must lie in [0, {n}], got {kmax}")
    total = sum(comb(n, i) for i in range(kmax + 1))
    if total > cap:
        raise EnumerationCapError(
            f"{total} candidate sets exceed the enumeration cap {cap}")
    best_sets = [()] * (kmax + 1)
    best_values = np.empty(kmax + 1)
    best_values[0] = float(oracle.eval(()))
    run_set, run_val = (), best_values[0]
    for size in range(1, kmax + 1):
        for combo in itertools.combinations(range(n), size):
            v = float(oracle.eval(combo))
            if v > run_val:
                run_set, run_val = combo, v
        best_sets[size] = run_set
        best_values[size] = run_val
    return best_sets, best_values
