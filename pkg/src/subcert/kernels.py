"""CSR coverage kernels: numba-jitted hot loops with a pure-numpy fallback.

The coverage objective dominates the runtime of the large-instance paths
(greedy traces and the value-partition scan on graphs with 10^4..10^5
edges), so its three inner loops live here:

* ``cover_many``   -- mark the neighbors of a set of primals, return weight
* ``cover_gains``  -- marginal covered weight of every primal vs. a mask
* ``cover_prefix`` -- covered weight after each prefix of an ordering

Backend selection happens once at import from the ``SUBCERT_BACKEND``
environment variable: ``numba`` (default when numba imports), ``numpy``
(fallback), or ``auto``.  ``python -m subcert.bench_backends`` compares the
two implementations on the same instance.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None
    HAVE_NUMBA = False


# --------------------------------------------------------------------------
# pure-numpy fallback
# --------------------------------------------------------------------------

def np_cover_add(indptr, indices, weights, covered, a, total):
    """Mark the neighbors of primal ``a``; return the updated covered weight."""
    nb = indices[indptr[a]:indptr[a + 1]]
    fresh = nb[~covered[nb]]
    covered[fresh] = True
    return total + float(weights[fresh].sum())


def np_cover_many(indptr, indices, weights, covered, ids, total):
    for a in ids:
        total = np_cover_add(indptr, indices, weights, covered, int(a), total)
    return total


def np_cover_gains(indptr, indices, weights, covered):
    """Marginal covered weight of every primal against ``covered``."""
    contrib = np.where(covered[indices], 0.0, weights[indices])
    csum = np.concatenate(([0.0], np.cumsum(contrib)))
    return csum[indptr[1:]] - csum[indptr[:-1]]


def np_cover_prefix(indptr, indices, weights, covered, order, total):
    """Covered weight after each prefix of ``order``; mutates ``covered``."""
    order = np.asarray(order, dtype=np.int64)
    lens = (indptr[order + 1] - indptr[order]).astype(np.int64)
    m = int(lens.sum())
    if m == 0:
        return np.full(order.size, total, dtype=np.float64)
    starts = np.repeat(indptr[order], lens)
    offs = np.arange(m, dtype=np.int64) - np.repeat(
        np.concatenate(([0], np.cumsum(lens)[:-1])), lens
    )
    flat = indices[starts + offs]
    step = np.repeat(np.arange(order.size, dtype=np.int64), lens)
    srt = np.argsort(flat, kind="stable")
    fs = flat[srt]
    first = np.ones(m, dtype=bool)
    first[1:] = fs[1:] != fs[:-1]
    pos = srt[first]  # earliest flat position of each distinct dual
    dual = fs[first]
    keep = ~covered[dual]
    gain = np.bincount(
        step[pos[keep]], weights=weights[dual[keep]], minlength=order.size
    )
    covered[dual[keep]] = True
    return total + np.cumsum(gain)


# --------------------------------------------------------------------------
# numba kernels (same contracts, loop form)
# --------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def nb_cover_add(indptr, indices, weights, covered, a, total):
        for e in range(indptr[a], indptr[a + 1]):
            b = indices[e]
            if not covered[b]:
                covered[b] = True
                total += weights[b]
        return total

    @njit(cache=True)
    def nb_cover_many(indptr, indices, weights, covered, ids, total):
        for t in range(ids.size):
            a = ids[t]
            for e in range(indptr[a], indptr[a + 1]):
                b = indices[e]
                if not covered[b]:
                    covered[b] = True
                    total += weights[b]
        return total

    @njit(cache=True)
    def nb_cover_gains(indptr, indices, weights, covered):
        n = indptr.size - 1
        out = np.zeros(n, dtype=np.float64)
        for a in range(n):
            s = 0.0
            for e in range(indptr[a], indptr[a + 1]):
                b = indices[e]
                if not covered[b]:
                    s += weights[b]
            out[a] = s
        return out

    @njit(cache=True)
    def nb_cover_prefix(indptr, indices, weights, covered, order, total):
        out = np.empty(order.size, dtype=np.float64)
        for t in range(order.size):
            a = order[t]
            for e in range(indptr[a], indptr[a + 1]):
                b = indices[e]
                if not covered[b]:
                    covered[b] = True
                    total += weights[b]
            out[t] = total
        return out


def _nb_cover_many_wrap(indptr, indices, weights, covered, ids, total):
    ids = np.ascontiguousarray(ids, dtype=np.int64)
    return nb_cover_many(indptr, indices, weights, covered, ids, total)


def _nb_cover_prefix_wrap(indptr, indices, weights, covered, order, total):
    order = np.ascontiguousarray(order, dtype=np.int64)
    return nb_cover_prefix(indptr, indices, weights, covered, order, total)


IMPLEMENTATIONS = {"numpy": {
    "cover_add": np_cover_add,
    "cover_many": np_cover_many,
    "cover_gains": np_cover_gains,
    "cover_prefix": np_cover_prefix,
}}
if HAVE_NUMBA:
    IMPLEMENTATIONS["numba"] = {
        "cover_add": nb_cover_add,
        "cover_many": _nb_cover_many_wrap,
        "cover_gains": nb_cover_gains,
        "cover_prefix": _nb_cover_prefix_wrap,
    }


def _resolve_backend():
    req = os.environ.get("SUBCERT_BACKEND", "auto").strip().lower()
    if req in ("", "auto"):
        return "numba" if HAVE_NUMBA else "numpy"
    if req == "numba":
        if not HAVE_NUMBA:
            raise ImportError("SUBCERT_BACKEND=numba but numba is not importable")
        return "numba"
    if req == "numpy":
        return "numpy"
    raise ValueError(f"unknown SUBCERT_BACKEND value {req!r}")


BACKEND = _resolve_backend()

cover_add = IMPLEMENTATIONS[BACKEND]["cover_add"]
cover_many = IMPLEMENTATIONS[BACKEND]["cover_many"]
cover_gains = IMPLEMENTATIONS[BACKEND]["cover_gains"]
cover_prefix = IMPLEMENTATIONS[BACKEND]["cover_prefix"]


def warmup():
    """Trigger JIT compilation on a toy instance (no-op for numpy)."""
    indptr = np.array([0, 2, 3], dtype=np.int64)
    indices = np.array([0, 1, 1], dtype=np.int64)
    w = np.ones(2, dtype=np.float64)
    covered = np.zeros(2, dtype=np.bool_)
    cover_add(indptr, indices, w, covered, 0, 0.0)
    cover_gains(indptr, indices, w, covered)
    cover_many(indptr, indices, w, np.zeros(2, np.bool_),
               np.array([0], np.int64), 0.0)
    cover_prefix(indptr, indices, w, np.zeros(2, np.bool_),
                 np.array([0, 1], np.int64), 0.0)
    return BACKEND
