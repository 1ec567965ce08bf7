"""Upper bounds on max-coverage optima via the minimum-cover dual.

Every dual element b carries the unit-fraction value v_b = 1/d_b where d_b
is the largest degree among the primals covering b; an element covering b
can never cover more than d_b duals.  Sorting D by increasing v_b gives the
additive bound (first prefix whose v-mass exceeds k) and the partition bound
(greedy packing of prefix parts of weight ≤ 1).  Both comparisons are exact:
the partition test reduces to integers and the additive prefix sums use
rational arithmetic.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .maximizers import DEFAULT_ENUM_CAP, EnumerationCapError


@dataclass
class DualValues:
    """Per-dual denominators d_b (v_b = 1/d_b) and the increasing-v_b order."""

    d: np.ndarray
    order: np.ndarray

    @property
    def values(self):
        return 1.0 / self.d


def dual_values(graph):
    d = graph.max_cover_degree().astype(np.int64)
    # increasing v_b == decreasing d_b; ties broken by dual id
    order = np.lexsort((np.arange(graph.dual_count), -d))
    return DualValues(d, order)


def additive_dual_bound(graph, k):
    """Smallest prefix length i* of the sorted dual order whose v-mass
    exceeds k; every coverage solution of size ≤ k covers < i* duals.

    Returns |D| + 1 when no prefix exceeds k (the bound is then vacuous:
    OPT ≤ |D|).  The usable upper bound on OPT is i* − 1.
    """
    dv = dual_values(graph)
    acc = Fraction(0)
    for pos, b in enumerate(dv.order):
        acc += Fraction(1, int(dv.d[b]))
        if acc > k:
            return pos + 1
    return graph.dual_count + 1


def ell(graph, dual_ids):
    """Additive lower bound on the min-cover objective: sum of v_b over T."""
    d = dual_values(graph).d
    t = sorted({int(b) for b in dual_ids})
    if t and (t[0] < 0 or t[-1] >= graph.dual_count):
        raise ValueError(f"dual id out of range [0, {graph.dual_count})")
    return float((1.0 / d[t]).sum()) if t else 0.0


@dataclass
class CoveragePartition:
    """Greedy prefix partition of the sorted dual order into ≤ k parts.

    ``breakpoints`` are the part boundaries 0 = i_0 < i_1 ≤ ... ≤ i_k over
    the sorted order (trailing empty parts repeat the last boundary); part
    κ covers sorted positions (i_{κ-1}, i_κ].  Every part weight
    |P_κ| · max_{b ∈ P_κ} v_b is at most 1.
    """

    breakpoints: list
    order: np.ndarray
    weights: list

    @property
    def size(self):
        return int(self.breakpoints[-1])

    def parts(self):
        return [self.order[self.breakpoints[i]:self.breakpoints[i + 1]]
                for i in range(len(self.breakpoints) - 1)]


def coverage_partition(graph, k):
    """Build the greedy valid partition behind the partition dual bound.

    Part weight is |part| · max v_b, so validity of extending a part by the
    next dual is the integer test (i − i_prev) ≤ d_b.
    """
    dv = dual_values(graph)
    d_sorted = dv.d[dv.order]
    total = graph.dual_count
    breakpoints = [0]
    weights = []
    i = 0
    for _ in range(k):
        start = i
        while i < total and (i + 1 - start) <= d_sorted[i]:
            i += 1
        breakpoints.append(i)
        weights.append(0.0 if i == start
                       else float((i - start) / d_sorted[i - 1]))
    return CoveragePartition(breakpoints, dv.order, weights)


def partition_dual_bound(graph, k):
    """Size of the greedy valid partition of the sorted dual order into k
    parts of weight ≤ 1; upper bounds the max-coverage optimum at k."""
    return coverage_partition(graph, k).size


def exact_min_cover(graph, dual_ids, cap=DEFAULT_ENUM_CAP):
    """Exact minimum number of primals covering T, by enumeration in
    increasing cardinality (test oracle for the bounds above)."""
    t = sorted({int(b) for b in dual_ids})
    if not t:
        return 0
    if t[0] < 0 or t[-1] >= graph.dual_count:
        raise ValueError(f"dual id out of range [0, {graph.dual_count})")
    pos = {b: i for i, b in enumerate(t)}
    target = (1 << len(t)) - 1
    cand = []
    for a in range(graph.primal_count):
        m = 0
        for b in graph.neighbors(a):
            if int(b) in pos:
                m |= 1 << pos[int(b)]
        if m:
            cand.append(m)
    total = 0
    for size in range(1, len(cand) + 1):
        total += comb(len(cand), size)
        if total > cap:
            raise EnumerationCapError(
                f"min-cover enumeration exceeds the cap {cap}")
        for combo in itertools.combinations(cand, size):
            m = 0
            for x in combo:
                m |= x
            if m == target:
                return size
    raise AssertionError("uncoverable dual set despite degree >= 1")


def exact_max_coverage(graph, k, cap=DEFAULT_ENUM_CAP):
    """Exact max-coverage value at cardinality k, by enumeration."""
    p = graph.primal_count
    if k >= p:
        mask = 0
        for a in range(p):
            for b in graph.neighbors(a):
                mask |= 1 << int(b)
        return mask.bit_count()
    if comb(p, k) > cap:
        raise EnumerationCapError(
            f"C({p},{k}) exceeds the enumeration cap {cap}")
    masks = []
    for a in range(p):
        m = 0
        for b in graph.neighbors(a):
            m |= 1 << int(b)
        masks.append(m)
    best = 0
    for combo in itertools.combinations(masks, k):
        m = 0
        for x in combo:
            m |= x
        c = m.bit_count()
        if c > best:
            best = c
    return best
