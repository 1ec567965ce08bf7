"""Comparison bounds: top-k singletons, the greedy-trace marginal bound,
curvature (exact and heuristic), and the dynamic-sharpness guarantee.

Top-k and the marginal bound upper-bound the optimum directly.  Curvature
and sharpness instead certify a greedy approximation factor; their implied
optimum bound is f(greedy)/guarantee.
"""

from dataclasses import dataclass
from math import comb, exp, log

import numpy as np

from .maximizers import DEFAULT_ENUM_CAP, EnumerationCapError

CURVATURE_EPS = 1e-9


def topk_bound(oracle, k):
    """Sum of the k largest singleton values; valid by submodularity."""
    sing = np.sort(np.asarray(oracle.singleton_values()))[::-1]
    return float(sing[:k].sum())


def marginal_bound(trace, k, denom_tol=1e-12):
    """Best upper bound derivable from two greedy prefixes:

        (f(S_j) − (1−1/k)^{j−i} f(S_i)) / (1 − (1−1/k)^{j−i})

    minimized over all 0 ≤ i < j ≤ trace length; pairs whose denominator
    falls below ``denom_tol`` are skipped.
    """
    if trace.kmax < 2:
        raise ValueError("marginal bound needs a trace of at least 2 prefixes")
    vals = np.concatenate(([trace.base_value], trace.values))
    r = 1.0 - 1.0 / k
    best = np.inf
    for j in range(1, len(vals)):
        for i in range(j):
            shrink = r ** (j - i)
            denom = 1.0 - shrink
            if denom < denom_tol:
                continue
            best = min(best, (vals[j] - shrink * vals[i]) / denom)
    return float(best)


def curvature_guarantee(c):
    """Greedy factor (1 − e^{-c})/c implied by curvature c; 1 in the limit c→0."""
    if c < CURVATURE_EPS:
        return 1.0
    return (1.0 - exp(-c)) / c


@dataclass
class CurvatureEstimate:
    """Curvature c ∈ [0,1] with its provenance (exact enumeration or the
    greedy lower-bound heuristic)."""

    c: float
    mode: str

    @property
    def guarantee(self):
        return curvature_guarantee(self.c)


def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56


def value_table(oracle, cap=DEFAULT_ENUM_CAP, chunk=1 << 16):
    """f over all 2^n subsets as an array indexed by bitmask."""
    n = oracle.n
    if n > 25 or (1 << n) > cap:
        raise EnumerationCapError(
            f"2^{n} subsets exceed the enumeration cap {cap}")
    masks = np.arange(1 << n, dtype=np.int64)
    out = np.empty(masks.size, dtype=np.float64)
    for lo in range(0, masks.size, chunk):
        out[lo:lo + chunk] = oracle.eval_masks(masks[lo:lo + chunk])
    return out


def curvature_exact(oracle, pair_cap=50_000_000):
    """Exact curvature c = 1 − min over (S, a ∉ S) of f_S(a)/f(a), computed
    by full enumeration; singletons with f(a) ≤ 0 are excluded from the min.
    """
    n = oracle.n
    pairs = n << max(n - 1, 0)
    if pairs > pair_cap:
        raise EnumerationCapError(
            f"{pairs} (set, element) pairs exceed the cap {pair_cap}")
    vals = value_table(oracle, cap=pair_cap)
    idx = np.arange(1 << n, dtype=np.int64)
    ratio_min = np.inf
    usable = 0
    for a in range(n):
        f_a = vals[1 << a]
        if f_a <= CURVATURE_EPS:
            continue
        usable += 1
        rest = idx[(idx >> a) & 1 == 0]
        marg = vals[rest | (1 << a)] - vals[rest]
        ratio_min = min(ratio_min, float(marg.min()) / f_a)
    if not usable:
        raise ValueError("curvature undefined: every singleton value is 0")
    c = min(max(1.0 - ratio_min, 0.0), 1.0)
    return CurvatureEstimate(c=c, mode="exact")


def curvature_heuristic(oracle, k):
    """Greedy lower bound on the curvature (so an upper bound on the
    curvature guarantee) in O(n + k·n) evaluations.

    Picks the element a* whose deletion marginal is smallest relative to its
    singleton, then greedily grows a set S of size k shrinking f_S(a*).
    """
    n = oracle.n
    sing = np.asarray(oracle.singleton_values(), dtype=np.float64)
    if (sing <= CURVATURE_EPS).all():
        raise ValueError("curvature undefined: every singleton value is 0")
    full = oracle.full_value()
    ground = set(range(n))
    c_by_elem = np.full(n, -np.inf)
    for a in range(n):
        if sing[a] <= CURVATURE_EPS:
            continue
        drop = full - float(oracle.eval(sorted(ground - {a})))
        c_by_elem[a] = 1.0 - drop / sing[a]
    a_star = int(np.argmax(c_by_elem))
    f_star = sing[a_star]
    s = []
    for _ in range(min(k, n - 1)):
        best_val, best_x = np.inf, None
        for x in range(n):
            if x == a_star or x in s:
                continue
            with_x = sorted(s + [x])
            marg = float(oracle.eval(with_x + [a_star])) - float(oracle.eval(with_x))
            if marg < best_val - 1e-15:
                best_val, best_x = marg, x
        if best_x is None:
            break
        s.append(best_x)
    final_marg = float(oracle.eval(sorted(s + [a_star]))) - float(oracle.eval(sorted(s)))
    c = min(max(1.0 - final_marg / f_star, 0.0), 1.0)
    return CurvatureEstimate(c=c, mode="heuristic")


@dataclass
class SharpnessProfile:
    """Dynamic sharpness parameters with the exact optimum they certify
    against and the implied greedy guarantee."""

    c: np.ndarray
    theta: np.ndarray
    opt_value: float
    opt_set: tuple
    guarantee: float


def sharpness_factor(c, theta, k):
    """Nested guarantee implied by dynamic (c, θ) sharpness:

        1 − (((1 − θ_0/(c_0 k))^{θ_1/θ_0} − θ_1/(c_1 k))^{θ_2/θ_1} − ...)^{1/θ_{k−1}}

    Intermediate bases are clamped at 0 (a base hitting 0 certifies factor 1).
    """
    c = np.asarray(c, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    t = 1.0 - theta[0] / (c[0] * k)
    for i in range(1, k):
        t = max(t, 0.0) ** (theta[i] / theta[i - 1]) - theta[i] / (c[i] * k)
    return 1.0 - max(t, 0.0) ** (1.0 / theta[k - 1])


THETA_FLOOR = 1e-9


def sharpness_guarantee(oracle, k, cap=DEFAULT_ENUM_CAP,
                        c_max=3.0, c_step=0.01):
    """Best dynamic-sharpness guarantee found by the grid search.

    Brute-forces the optimum, then per position i sweeps c_i over
    {1.00, 1.01, .., c_max} keeping changes while the nested guarantee
    strictly improves (greedy coordinate search; stops at the first
    non-improvement).  θ for a given c is min over all |S| ≤ k with
    W(S) > 0 and W₂(S) > 0 of log(k·c·W₂/W)/log(OPT/W), clamped to (0, 1].
    """
    n = oracle.n
    if sum(comb(n, i) for i in range(k + 1)) > cap:
        raise EnumerationCapError(
            f"sharpness needs all subsets of size <= {k}, cap {cap} exceeded")
    vals = value_table(oracle, cap=max(cap, 1 << n))
    idx = np.arange(1 << n, dtype=np.int64)
    pops = _popcount(idx)
    small = idx[pops <= k]
    opt_pos = int(np.argmax(vals[small]))
    opt_mask = int(small[opt_pos])
    opt = float(vals[small][opt_pos])
    opt_ids = tuple(a for a in range(n) if (opt_mask >> a) & 1)

    w = opt - vals[small]
    w2 = np.zeros(small.size)
    for a in opt_ids:
        gain = vals[small | (1 << a)] - vals[small]  # 0 whenever a ∈ S
        np.maximum(w2, gain, out=w2)
    good = (w > CURVATURE_EPS) & (w2 > CURVATURE_EPS)
    if not good.any():
        raise ValueError("sharpness undefined: W(S) vanishes for every S")
    xs = np.log(k * w2[good] / w[good])
    ys = np.log(opt / w[good])
    good2 = ys > CURVATURE_EPS
    if not good2.any():
        raise ValueError("sharpness undefined: OPT equals W(S) everywhere")
    xs, ys = xs[good2], ys[good2]

    def theta_of(ci):
        th = float(np.min((xs + log(ci)) / ys))
        return min(max(th, THETA_FLOOR), 1.0)

    c_vec = [1.0] * k
    th_vec = [theta_of(1.0)] * k
    best = sharpness_factor(c_vec, th_vec, k)
    grid = np.round(np.arange(1.0, c_max + c_step / 2, c_step), 2)
    for i in range(k):
        for ci in grid[1:]:
            old = (c_vec[i], th_vec[i])
            c_vec[i] = float(ci)
            th_vec[i] = theta_of(float(ci))
            g = sharpness_factor(c_vec, th_vec, k)
            if g > best:
                best = g
            else:
                c_vec[i], th_vec[i] = old
                break
    return SharpnessProfile(np.array(c_vec), np.array(th_vec), opt, opt_ids,
                            float(best))
