"""Value-partition upper bounds for general monotone submodular objectives.

``method3`` partitions a candidate optimum value into per-slot values
v_1..v_k, each certified by a prefix of the singleton-sorted ground set; the
sum is an upper bound on the best value any k-set can reach.  ``dual`` runs
the same scan on marginal-contribution views f_S around a collection of
pivot sets and keeps the smallest f(S) + bound, floored at f(N).
"""

from dataclasses import dataclass, field

import numpy as np

from .objectives import ShiftedOracle, as_elements

SCAN_TOL = 1e-9


@dataclass
class ValuePartition:
    """Slot values with their witness positions in the singleton-sorted order.

    ``witnesses[j]`` is the 1-based prefix length i_j certifying values[j]:
    f(a_{i_j}) ≥ v_j and f(A_{i_j}) − sum of earlier values ≥ v_j.
    """

    values: np.ndarray
    witnesses: np.ndarray
    order: np.ndarray     # ground ids sorted by decreasing singleton value

    @property
    def total(self):
        return float(self.values.sum())


@dataclass
class UpperBoundCert:
    """An upper bound on the constrained optimum with its provenance.

    ``pivot_breakdown`` holds (pivot, f(pivot), tail bound) triples;
    ``best_pivot`` is None when the f(N) initialization was never beaten.
    """

    bound: float
    method: str
    full_value: float
    best_pivot: tuple = None
    pivot_breakdown: list = field(default_factory=list)


def method3(oracle, k, tol=SCAN_TOL):
    """Greedy valid value partition of size k; returns (bound, partition).

    Elements are sorted by decreasing singleton value (ties to the lower
    id).  Slot j advances a never-rewinding index i until
    f(A_i) − Σ v ≥ f(a_i), then either takes v_j = f(a_i) or backs up one
    position and takes the prefix remainder, whichever the two-case rule
    selects.  When the scan runs off the end the remainder up to f(N) is
    taken (witnessed by the full prefix), so the total never exceeds f(N).
    """
    n = oracle.n
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    singles = np.asarray(oracle.singleton_values(), dtype=np.float64)
    order = np.lexsort((np.arange(n), -singles))
    s = singles[order]
    prefix = np.asarray(oracle.prefix_values(order), dtype=np.float64)
    base = float(oracle.empty_value())

    def f_a(i):  # f(A_i), 1-based prefix
        return base if i == 0 else prefix[i - 1]

    running = 0.0
    vals = np.zeros(k)
    wits = np.zeros(k, dtype=np.int64)
    i = 1
    for j in range(k):
        while i <= n and f_a(i) - running < s[i - 1] - tol:
            i += 1
        if i > n:
            v = prefix[n - 1] - running  # remainder up to f(N)
            wit = n
        elif f_a(i - 1) - running >= s[i - 1] - tol:
            v = f_a(i - 1) - running
            wit = max(i - 1, 1)
            # position i is not consumed; the next slot re-tests it
        else:
            v = s[i - 1]
            wit = i
            i += 1
        vals[j] = max(v, 0.0)
        wits[j] = wit
        running += vals[j]
    return running, ValuePartition(vals, wits, order)


def default_pivots(trace, dense=20, sparse=(25, 30, 35, 40, 45, 50)):
    """Pivot schedule from a greedy trace: ∅, the prefixes of sizes
    1..dense, and the sparse sizes, truncated to the trace length."""
    sizes = list(range(1, min(dense, trace.kmax) + 1))
    sizes += [s for s in sparse if s <= trace.kmax]
    return [()] + [trace.prefix(i) for i in sizes]


def dual(oracle, k, pivots, pivot_values=None, tol=SCAN_TOL):
    """Smallest pivot certificate min_S (f(S) + method3(f_S, k)), initialized
    at f(N).  ``pivot_values`` may supply known f(S) values (e.g. from the
    greedy trace) to avoid re-evaluation.
    """
    full = float(oracle.full_value())
    best = full
    best_pivot = None
    breakdown = []
    for idx, pivot in enumerate(pivots):
        pivot = as_elements(pivot, oracle.n)
        if pivot_values is not None and pivot_values[idx] is not None:
            f_s = float(pivot_values[idx])
        else:
            f_s = float(oracle.eval(pivot))
        shifted = ShiftedOracle(oracle, pivot, offset=f_s)
        tail, _ = method3(shifted, k, tol=tol)
        breakdown.append((pivot, f_s, tail))
        cand = f_s + tail
        if cand < best:
            best = cand
            best_pivot = pivot
    return UpperBoundCert(bound=best, method="dual", full_value=full,
                          best_pivot=best_pivot, pivot_breakdown=breakdown)
