"""Bipartite incidence structure shared by the coverage objective and its
dual bounds.

Primal elements (the things a solver selects) and dual elements (the things
being covered) are both dense 0-based id ranges.  Adjacency is kept in CSR
form on both sides so the coverage kernels and the dual-value computations
are plain array walks.
"""

import numpy as np


class GraphError(ValueError):
    pass


class BipartiteGraph:
    """Immutable bipartite graph over primal ids [0, |P|) and dual ids [0, |D|).

    Duplicate edges are dropped (count recorded in ``duplicate_count``).
    Dual elements of degree zero are rejected: the per-dual value
    1/max-neighbor-degree that the dual bounds rely on is undefined for them.
    """

    __slots__ = ("primal_count", "dual_count", "indptr", "indices",
                 "rev_indptr", "rev_indices", "edge_count", "duplicate_count")

    def __init__(self, primal_count, dual_count, edges):
        primal_count = int(primal_count)
        dual_count = int(dual_count)
        if primal_count < 1 or dual_count < 1:
            raise GraphError("both sides of the graph must be nonempty")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64)
        if e.size == 0:
            raise GraphError("graph has no edges, so every dual element is isolated")
        if e.ndim != 2 or e.shape[1] != 2:
            raise GraphError("edges must be (a, b) pairs")
        a, b = e[:, 0], e[:, 1]
        if a.min() < 0 or a.max() >= primal_count:
            raise GraphError("primal id out of range")
        if b.min() < 0 or b.max() >= dual_count:
            raise GraphError("dual id out of range")
        key = a * dual_count + b
        uniq, idx = np.unique(key, return_index=True)
        self.duplicate_count = int(e.shape[0] - uniq.size)
        a = uniq // dual_count
        b = uniq % dual_count
        self.primal_count = primal_count
        self.dual_count = dual_count
        self.edge_count = int(uniq.size)
        self.indptr = np.zeros(primal_count + 1, dtype=np.int64)
        np.add.at(self.indptr, a + 1, 1)
        np.cumsum(self.indptr, out=self.indptr)
        self.indices = b.copy()  # uniq sort order is (a, b): rows already sorted
        rev_order = np.lexsort((a, b))
        self.rev_indptr = np.zeros(dual_count + 1, dtype=np.int64)
        np.add.at(self.rev_indptr, b + 1, 1)
        np.cumsum(self.rev_indptr, out=self.rev_indptr)
        self.rev_indices = a[rev_order]
        dual_deg = np.diff(self.rev_indptr)
        if (dual_deg == 0).any():
            bad = int(np.flatnonzero(dual_deg == 0)[0])
            raise GraphError(f"dual element {bad} is isolated (degree 0)")

    def neighbors(self, a):
        """Dual neighbors N(a), sorted."""
        return self.indices[self.indptr[a]:self.indptr[a + 1]]

    def covers(self, b):
        """Primal elements covering dual b, sorted."""
        return self.rev_indices[self.rev_indptr[b]:self.rev_indptr[b + 1]]

    def primal_degrees(self):
        return np.diff(self.indptr)

    def dual_degrees(self):
        return np.diff(self.rev_indptr)

    def max_cover_degree(self):
        """Per dual b: the largest primal degree among the elements covering b.

        The per-dual value used by the dual bounds is the unit fraction
        1 / max_cover_degree(b).
        """
        deg = self.primal_degrees()
        # reduceat is unsafe for empty rows; dual degree >= 1 is guaranteed
        return np.maximum.reduceat(deg[self.rev_indices], self.rev_indptr[:-1])

    def __repr__(self):
        return (f"BipartiteGraph(|P|={self.primal_count}, |D|={self.dual_count}, "
                f"|E|={self.edge_count})")
