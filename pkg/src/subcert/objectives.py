"""Set-function oracles: the objective families, the marginal-shift wrapper,
and the probabilistic monotonicity/submodularity checker.

Every oracle is an immutable evaluatable set function over a dense ground
set ``{0, .., n-1}``.  Besides ``eval`` the base class exposes three fast-path
hooks that the algorithms use when available:

* ``singleton_values()``  -- all f({a}) in one shot
* ``selection(base)``     -- an incremental state with marginal gains
* ``prefix_values(order)``-- f over the nested prefixes of an ordering

The generic defaults fall back to plain ``eval`` calls; coverage and the
matrix-backed objectives override them with array kernels.
"""

import threading

import numpy as np

from . import kernels


def as_elements(ids, n):
    """Normalize ids to a sorted duplicate-free tuple inside [0, n)."""
    t = tuple(sorted({int(a) for a in ids}))
    if t and (t[0] < 0 or t[-1] >= n):
        raise ValueError(f"element id out of range [0, {n})")
    return t


def _mask_to_ids(mask):
    ids = []
    a = 0
    while mask:
        if mask & 1:
            ids.append(a)
        mask >>= 1
        a += 1
    return tuple(ids)


class Oracle:
    """Monotone submodular set function over ground ids 0..n-1."""

    def __init__(self, n):
        n = int(n)
        if n < 1:
            raise ValueError("ground set must be nonempty")
        self.n = n

    def eval(self, ids):
        raise NotImplementedError

    def empty_value(self):
        return float(self.eval(()))

    def full_value(self):
        return float(self.eval(range(self.n)))

    def singleton_values(self):
        return np.array([self.eval((a,)) for a in range(self.n)], dtype=np.float64)

    def selection(self, base=()):
        """Incremental evaluation state seeded with ``base``."""
        return _GenericSelection(self, base)

    def prefix_values(self, order, base=()):
        """f(base ∪ {order[0..t]}) for t = 0..len(order)-1."""
        st = self.selection(base)
        return np.array([st.add(int(a)) for a in order], dtype=np.float64)

    def eval_masks(self, masks):
        """Evaluate a batch of bitmask-encoded subsets (bit a = element a)."""
        out = np.empty(len(masks), dtype=np.float64)
        for i, m in enumerate(masks):
            out[i] = self.eval(_mask_to_ids(int(m)))
        return out


class _GenericSelection:
    """Fallback incremental state: one oracle call per gain / add."""

    def __init__(self, oracle, base):
        self.oracle = oracle
        self._ids = list(as_elements(base, oracle.n))
        self.value = float(oracle.eval(self._ids))

    def gain(self, a):
        return float(self.oracle.eval(self._ids + [a])) - self.value

    def gains(self, candidates):
        return np.array([self.gain(int(a)) for a in candidates], dtype=np.float64)

    def add(self, a):
        self._ids = sorted(self._ids + [int(a)])
        self.value = float(self.oracle.eval(self._ids))
        return self.value


# --------------------------------------------------------------------------
# coverage
# --------------------------------------------------------------------------

class CoverageOracle(Oracle):
    """f(S) = total weight of the dual elements adjacent to S.

    Unit weights give plain max-coverage; weight sums of unit floats are
    exact, so ``eval_int`` is available in that case.
    """

    def __init__(self, graph, weights=None):
        super().__init__(graph.primal_count)
        self.graph = graph
        if weights is None:
            self.weights = np.ones(graph.dual_count, dtype=np.float64)
            self.unweighted = True
        else:
            w = np.asarray(weights, dtype=np.float64)
            if w.shape != (graph.dual_count,):
                raise ValueError(
                    f"need {graph.dual_count} dual weights, got shape {w.shape}")
            if (w < 0).any():
                raise ValueError("dual weights must be nonnegative")
            self.weights = w.copy()
            self.unweighted = False

    def _ids_array(self, ids):
        arr = np.fromiter((int(a) for a in ids), dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.n):
            raise ValueError(f"element id out of range [0, {self.n})")
        return arr

    def eval(self, ids):
        arr = self._ids_array(ids)
        covered = np.zeros(self.graph.dual_count, dtype=np.bool_)
        return float(kernels.cover_many(
            self.graph.indptr, self.graph.indices, self.weights, covered, arr, 0.0))

    def eval_int(self, ids):
        if not self.unweighted:
            raise ValueError("integer evaluation requires unit weights")
        return int(round(self.eval(ids)))

    def singleton_values(self):
        if self.unweighted:
            return np.diff(self.graph.indptr).astype(np.float64)
        covered = np.zeros(self.graph.dual_count, dtype=np.bool_)
        return kernels.cover_gains(
            self.graph.indptr, self.graph.indices, self.weights, covered)

    def selection(self, base=()):
        return _CoverageSelection(self, base)

    def prefix_values(self, order, base=()):
        st = _CoverageSelection(self, base)
        return kernels.cover_prefix(
            self.graph.indptr, self.graph.indices, self.weights,
            st.covered, np.asarray(order, dtype=np.int64), st.value)


class _CoverageSelection:
    def __init__(self, oracle, base):
        self.oracle = oracle
        g = oracle.graph
        self.covered = np.zeros(g.dual_count, dtype=np.bool_)
        arr = oracle._ids_array(as_elements(base, oracle.n))
        self.value = float(kernels.cover_many(
            g.indptr, g.indices, oracle.weights, self.covered, arr, 0.0))

    def gain(self, a):
        g = self.oracle.graph
        nb = g.indices[g.indptr[a]:g.indptr[a + 1]]
        return float(self.oracle.weights[nb[~self.covered[nb]]].sum())

    def gains(self, candidates):
        g = self.oracle.graph
        all_gains = kernels.cover_gains(
            g.indptr, g.indices, self.oracle.weights, self.covered)
        return all_gains[np.asarray(candidates, dtype=np.int64)]

    def add(self, a):
        g = self.oracle.graph
        self.value = float(kernels.cover_add(
            g.indptr, g.indices, self.oracle.weights, self.covered, int(a),
            self.value))
        return self.value


def coverage_oracle(graph):
    """Max-coverage objective: f(S) = number of distinct dual neighbors of S."""
    return CoverageOracle(graph)


def weighted_coverage_oracle(graph, weights):
    """Weighted coverage: f(S) = total weight of the dual elements covered by S."""
    return CoverageOracle(graph, weights)


# --------------------------------------------------------------------------
# matrix-backed families
# --------------------------------------------------------------------------

class FacilityLocationOracle(Oracle):
    """f(S) = (1/m) sum_i max_{j in S} r_ij over an m x n nonnegative matrix.

    Rows are users, columns are the selectable elements; the empty set
    evaluates to 0.
    """

    def __init__(self, ratings):
        r = np.asarray(ratings, dtype=np.float64)
        if r.ndim != 2 or r.size == 0:
            raise ValueError("ratings must be a nonempty 2-D matrix")
        if (r < 0).any():
            raise ValueError("ratings must be nonnegative")
        super().__init__(r.shape[1])
        self.ratings = r
        self.rows = r.shape[0]

    def eval(self, ids):
        t = as_elements(ids, self.n)
        if not t:
            return 0.0
        return float(self.ratings[:, t].max(axis=1).mean())

    def singleton_values(self):
        return self.ratings.mean(axis=0)

    def selection(self, base=()):
        return _FacilitySelection(self, base)

    def eval_masks(self, masks):
        masks = np.asarray(masks, dtype=np.int64)
        m, n = self.ratings.shape
        out = np.empty(masks.size, dtype=np.float64)
        chunk = max(1, 4_000_000 // (m * n))
        bits = np.arange(n, dtype=np.int64)
        for lo in range(0, masks.size, chunk):
            mm = masks[lo:lo + chunk]
            sel = ((mm[:, None] >> bits) & 1).astype(bool)  # (B, n)
            picked = np.where(sel[:, None, :], self.ratings[None, :, :], 0.0)
            out[lo:lo + chunk] = picked.max(axis=2).mean(axis=1)
        return out


class _FacilitySelection:
    def __init__(self, oracle, base):
        self.oracle = oracle
        self.best = np.zeros(oracle.rows, dtype=np.float64)
        t = as_elements(base, oracle.n)
        if t:
            self.best = oracle.ratings[:, t].max(axis=1)
        self.value = float(self.best.mean())

    def gain(self, a):
        return float(np.maximum(self.best, self.oracle.ratings[:, a]).mean()) \
            - self.value

    def gains(self, candidates):
        cand = np.asarray(candidates, dtype=np.int64)
        merged = np.maximum(self.best[:, None], self.oracle.ratings[:, cand])
        return merged.mean(axis=0) - self.value

    def add(self, a):
        np.maximum(self.best, self.oracle.ratings[:, a], out=self.best)
        self.value = float(self.best.mean())
        return self.value


class MovieRecOracle(Oracle):
    """Additive total-ratings term plus coverage of strongly-rating users.

    ``ratings`` rows are the selectable movies, columns are users:
    f(S) = sum_{i in S} sum_j r_ij + |{j : exists i in S with r_ij > threshold}|.
    """

    def __init__(self, ratings, threshold=4.5):
        r = np.asarray(ratings, dtype=np.float64)
        if r.ndim != 2 or r.size == 0:
            raise ValueError("ratings must be a nonempty 2-D matrix")
        super().__init__(r.shape[0])
        self.ratings = r
        self.threshold = float(threshold)
        self._row_sums = r.sum(axis=1)
        self._strong = r > self.threshold

    def eval(self, ids):
        t = as_elements(ids, self.n)
        if not t:
            return 0.0
        return float(self._row_sums[list(t)].sum()
                     + self._strong[list(t)].any(axis=0).sum())

    def singleton_values(self):
        return self._row_sums + self._strong.sum(axis=1)


def movie_rec_oracle(ratings, threshold=4.5):
    return MovieRecOracle(ratings, threshold)


class RevenueOracle(Oracle):
    """f(S) = sum_i (sum_{j in S} w_ij)^alpha with alpha in (0, 1], 0^alpha = 0.

    Columns are the selectable elements; rows are the revenue recipients.
    """

    def __init__(self, weights, alpha=0.9):
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 2 or w.size == 0:
            raise ValueError("weights must be a nonempty 2-D matrix")
        if (w < 0).any():
            raise ValueError("weights must be nonnegative")
        alpha = float(alpha)
        if not 0.0 < alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        super().__init__(w.shape[1])
        self.weights = w
        self.alpha = alpha

    def eval(self, ids):
        t = as_elements(ids, self.n)
        if not t:
            return 0.0
        return float((self.weights[:, t].sum(axis=1) ** self.alpha).sum())

    def singleton_values(self):
        return (self.weights ** self.alpha).sum(axis=0)

    def selection(self, base=()):
        return _RevenueSelection(self, base)


class _RevenueSelection:
    def __init__(self, oracle, base):
        self.oracle = oracle
        t = as_elements(base, oracle.n)
        self.sums = (oracle.weights[:, t].sum(axis=1) if t
                     else np.zeros(oracle.weights.shape[0]))
        self.value = float((self.sums ** oracle.alpha).sum())

    def gain(self, a):
        new = (self.sums + self.oracle.weights[:, a]) ** self.oracle.alpha
        return float(new.sum()) - self.value

    def gains(self, candidates):
        cand = np.asarray(candidates, dtype=np.int64)
        merged = self.sums[:, None] + self.oracle.weights[:, cand]
        return (merged ** self.oracle.alpha).sum(axis=0) - self.value

    def add(self, a):
        self.sums = self.sums + self.oracle.weights[:, a]
        self.value = float((self.sums ** self.oracle.alpha).sum())
        return self.value


def revenue_oracle(weights, alpha=0.9):
    return RevenueOracle(weights, alpha)


def facility_location_oracle(ratings):
    return FacilityLocationOracle(ratings)


def movie_rec_power_oracle(ratings, alpha=0.8):
    """Small-instance recommendation variant: ((1/m) sum_i sum_{j in S} r_ij)^alpha.

    Rows are users, columns movies.  The inner sum is additive in per-movie
    column sums, so this is a one-row revenue objective.
    """
    r = np.asarray(ratings, dtype=np.float64)
    if r.ndim != 2 or r.size == 0:
        raise ValueError("ratings must be a nonempty 2-D matrix")
    row = r.sum(axis=0)[None, :] / r.shape[0]
    return RevenueOracle(row, alpha)


class EntropyOracle(Oracle):
    """Empirical joint entropy of the selected observation columns (natural log).

    With ``labels`` given, evaluates H(X_S, Y) where Y is the fixed label
    column; the empty set then scores H(Y).  Plug-in probabilities, no
    smoothing.
    """

    def __init__(self, samples, labels=None):
        s = np.asarray(samples)
        if s.ndim != 2 or s.shape[0] == 0:
            raise ValueError("samples must have at least one row")
        super().__init__(s.shape[1])
        self.samples = s
        if labels is not None:
            labels = np.asarray(labels)
            if labels.shape != (s.shape[0],):
                raise ValueError("labels must align with sample rows")
        self.labels = labels

    def eval(self, ids):
        t = as_elements(ids, self.n)
        cols = [self.samples[:, a] for a in t]
        if self.labels is not None:
            cols.append(self.labels)
        if not cols:
            return 0.0
        data = np.column_stack(cols)
        _, counts = np.unique(data, axis=0, return_counts=True)
        p = counts / data.shape[0]
        return float(-(p * np.log(p)).sum())


def entropy_oracle(samples, labels=None):
    return EntropyOracle(samples, labels)


class AdditiveOracle(Oracle):
    """f(S) = sum of fixed nonnegative per-element values."""

    def __init__(self, values):
        v = np.asarray(values, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("values must be a nonempty vector")
        if (v < 0).any():
            raise ValueError("values must be nonnegative")
        super().__init__(v.size)
        self.values = v.copy()

    def eval(self, ids):
        t = as_elements(ids, self.n)
        return float(self.values[list(t)].sum()) if t else 0.0

    def singleton_values(self):
        return self.values.copy()

    def selection(self, base=()):
        return _AdditiveSelection(self, base)


class _AdditiveSelection:
    def __init__(self, oracle, base):
        self.oracle = oracle
        self._in = np.zeros(oracle.n, dtype=bool)
        t = as_elements(base, oracle.n)
        self._in[list(t)] = True
        self.value = float(oracle.values[list(t)].sum()) if t else 0.0

    def gain(self, a):
        return 0.0 if self._in[a] else float(self.oracle.values[a])

    def gains(self, candidates):
        cand = np.asarray(candidates, dtype=np.int64)
        return np.where(self._in[cand], 0.0, self.oracle.values[cand])

    def add(self, a):
        if not self._in[a]:
            self._in[a] = True
            self.value += float(self.oracle.values[a])
        return self.value


def additive_oracle(values):
    return AdditiveOracle(values)


# --------------------------------------------------------------------------
# marginal shift and the adversarial family
# --------------------------------------------------------------------------

class ShiftedOracle(Oracle):
    """Marginal-contribution view of a base oracle around a pivot set S:
    value of T is base(S ∪ T) − base(S).

    Pivot elements stay in the ground set with zero marginal value.
    """

    def __init__(self, base, pivot, offset=None):
        super().__init__(base.n)
        self.base = base
        self.pivot = as_elements(pivot, base.n)
        self.offset = float(base.eval(self.pivot)) if offset is None else float(offset)

    def eval(self, ids):
        t = as_elements(ids, self.n)
        merged = sorted(set(self.pivot) | set(t))
        return float(self.base.eval(merged)) - self.offset

    def empty_value(self):
        return 0.0

    def full_value(self):
        return float(self.base.full_value()) - self.offset

    def singleton_values(self):
        st = self.base.selection(self.pivot)
        return st.gains(np.arange(self.n))

    def selection(self, base=()):
        return _ShiftedSelection(self, base)

    def prefix_values(self, order, base=()):
        merged = sorted(set(self.pivot) | set(as_elements(base, self.n)))
        return self.base.prefix_values(order, base=merged) - self.offset


class _ShiftedSelection:
    def __init__(self, oracle, base):
        self.oracle = oracle
        merged = sorted(set(oracle.pivot) | set(as_elements(base, oracle.n)))
        self._inner = oracle.base.selection(merged)
        self.value = self._inner.value - oracle.offset

    def gain(self, a):
        return self._inner.gain(a)

    def gains(self, candidates):
        return self._inner.gains(candidates)

    def add(self, a):
        self.value = self._inner.add(a) - self.oracle.offset
        return self.value


def shift(oracle, pivot):
    """Marginal contribution wrapper: shift(f, S)(T) = f(S ∪ T) − f(S)."""
    return ShiftedOracle(oracle, pivot)


class AdversarialOracle(Oracle):
    """Two-block instance on which the plain value-partition bound is loose.

    Ground set: n "big" elements (ids 0..n-1, singleton value c, pairwise
    marginal 1) and n "ground" elements (ids n..2n-1, singleton value c/2,
    marginal 2 once any big element is present).  Closed form in the two
    block counts; monotone submodular for c >= 4.
    """

    def __init__(self, n, c, k=None):
        n = int(n)
        if n < 1:
            raise ValueError("need at least one element per block")
        c = float(c)
        if c <= 2.0:
            raise ValueError("c must exceed 2")
        super().__init__(2 * n)
        self.block = n
        self.c = c
        self.k = k

    def eval(self, ids):
        t = as_elements(ids, self.n)
        nb = sum(1 for a in t if a < self.block)
        ng = len(t) - nb
        if nb == 0:
            if ng == 0:
                return 0.0
            return self.c / 2.0 + 2.0 * (ng - 1)
        return self.c + (nb - 1) + 2.0 * ng


def adversarial_instance(n, c, k=None):
    return AdversarialOracle(n, c, k)


# --------------------------------------------------------------------------
# evaluation counting
# --------------------------------------------------------------------------

class EvalCounter:
    """Thread-safe count of logical oracle evaluations."""

    def __init__(self):
        self._lock = threading.Lock()
        self.count = 0

    def bump(self, k=1):
        with self._lock:
            self.count += k


class CountingOracle(Oracle):
    """Decorator that counts evaluations while delegating fast paths."""

    def __init__(self, inner, counter):
        super().__init__(inner.n)
        self.inner = inner
        self.counter = counter

    def eval(self, ids):
        self.counter.bump()
        return self.inner.eval(ids)

    def empty_value(self):
        self.counter.bump()
        return self.inner.empty_value()

    def full_value(self):
        self.counter.bump()
        return self.inner.full_value()

    def singleton_values(self):
        self.counter.bump(self.n)
        return self.inner.singleton_values()

    def selection(self, base=()):
        return _CountingSelection(self.inner.selection(base), self.counter)

    def prefix_values(self, order, base=()):
        self.counter.bump(len(order))
        return self.inner.prefix_values(order, base)

    def eval_masks(self, masks):
        self.counter.bump(len(masks))
        return self.inner.eval_masks(masks)


class _CountingSelection:
    def __init__(self, inner, counter):
        self._inner = inner
        self._counter = counter

    @property
    def value(self):
        return self._inner.value

    def gain(self, a):
        self._counter.bump()
        return self._inner.gain(a)

    def gains(self, candidates):
        self._counter.bump(len(candidates))
        return self._inner.gains(candidates)

    def add(self, a):
        self._counter.bump()
        return self._inner.add(a)


def counted(oracle):
    """Wrap an oracle with an evaluation counter; returns (oracle, counter)."""
    c = EvalCounter()
    return CountingOracle(oracle, c), c


# --------------------------------------------------------------------------
# probabilistic validity checker
# --------------------------------------------------------------------------

class OracleCheckReport:
    def __init__(self, trials, tol):
        self.trials = trials
        self.tol = tol
        self.monotone_violations = 0
        self.submodular_violations = 0
        self.worst_monotone = 0.0     # largest f(S) - f(T) observed
        self.worst_submodular = 0.0   # largest f_T(a) - f_S(a) observed

    @property
    def ok(self):
        return self.monotone_violations == 0 and self.submodular_violations == 0

    def __repr__(self):
        tag = "ok" if self.ok else "VIOLATED"
        return (f"OracleCheckReport({tag}, trials={self.trials}, "
                f"monotone_violations={self.monotone_violations}, "
                f"submodular_violations={self.submodular_violations})")


def check_oracle(oracle, trials=1000, tol=1e-9, seed=0):
    """Sample (S ⊆ T, a ∉ T) triples; check f(S) ≤ f(T) and f_S(a) ≥ f_T(a).

    Both checks use absolute tolerance ``tol``.  Four evaluations per trial.
    """
    rng = np.random.default_rng(seed)
    n = oracle.n
    report = OracleCheckReport(trials, tol)
    for _ in range(trials):
        t_size = int(rng.integers(0, n))  # leave room for a ∉ T
        t = rng.choice(n, size=t_size, replace=False) if t_size else np.array([], int)
        keep = rng.random(t_size) < rng.random()
        s = t[keep]
        outside = np.setdiff1d(np.arange(n), t, assume_unique=False)
        a = int(rng.choice(outside))
        f_s = oracle.eval(s)
        f_t = oracle.eval(t)
        f_sa = oracle.eval(np.append(s, a))
        f_ta = oracle.eval(np.append(t, a))
        mono_gap = f_s - f_t
        if mono_gap > tol:
            report.monotone_violations += 1
        report.worst_monotone = max(report.worst_monotone, mono_gap)
        sub_gap = (f_ta - f_t) - (f_sa - f_s)
        if sub_gap > tol:
            report.submodular_violations += 1
        report.worst_submodular = max(report.worst_submodular, sub_gap)
    return report
