"""Undirected weighted graphs and their combinatorial Laplacian."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components


class GraphError(ValueError):
    """Raised when a graph cannot be built from the given edges."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable sparse symmetric graph.

    Edges are stored once with ``rows[k] < cols[k]`` in lexicographic order.
    The adjacency is kept in CSR form (``indptr``, ``indices``, ``adj_weights``)
    with every row sorted by ascending neighbor index.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    adj_weights: np.ndarray
    degrees: np.ndarray
    coords: np.ndarray | None = field(default=None, repr=False)
    labels: np.ndarray | None = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return int(self.rows.size)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [
            (int(i), int(j), float(w))
            for i, j, w in zip(self.rows, self.cols, self.weights)
        ]

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def neighbor_weights(self, i: int) -> np.ndarray:
        return self.adj_weights[self.indptr[i] : self.indptr[i + 1]]

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.adj_weights, self.indices, self.indptr), shape=(self.n, self.n)
        )

    @cached_property
    def laplacian(self) -> sp.csr_matrix:
        """Combinatorial Laplacian ``D - W`` as a CSR matrix."""
        return (sp.diags(self.degrees) - self.adjacency).tocsr()

    @cached_property
    def components(self) -> np.ndarray:
        """Connected-component label of every node."""
        _, labels = connected_components(self.adjacency, directed=False)
        return labels

    @property
    def n_components(self) -> int:
        return int(self.components.max()) + 1 if self.n else 0

    def is_connected(self) -> bool:
        return self.n_components == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None  # type: ignore[assignment]


def build_graph(
    n: int,
    edges: Iterable[Sequence[float]],
    coords: np.ndarray | None = None,
    labels: np.ndarray | None = None,
) -> Graph:
    """Build a :class:`Graph` from ``(i, j, w)`` triples.

    Edge orientation is irrelevant; each unordered pair may appear once.
    Raises :class:`GraphError` on out-of-range indices, self-loops,
    non-positive or non-finite weights and duplicate pairs.
    """
    n = int(n)
    if n < 1:
        raise GraphError(f"node count must be >= 1, got {n}")
    triples = list(edges)
    m = len(triples)
    rows = np.empty(m, dtype=np.int64)
    cols = np.empty(m, dtype=np.int64)
    weights = np.empty(m, dtype=np.float64)
    for k, (i, j, w) in enumerate(triples):
        i, j, w = int(i), int(j), float(w)
        if not (0 <= i < n and 0 <= j < n):
            raise GraphError(f"edge {k}: node index out of range ({i}, {j}) for n={n}")
        if i == j:
            raise GraphError(f"edge {k}: self-loop on node {i}")
        if not np.isfinite(w) or w <= 0.0:
            raise GraphError(f"edge {k}: weight must be positive and finite, got {w!r}")
        rows[k], cols[k], weights[k] = min(i, j), max(i, j), w

    order = np.lexsort((cols, rows))
    rows, cols, weights = rows[order], cols[order], weights[order]
    if m > 1:
        dup = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
        if dup.any():
            k = int(np.flatnonzero(dup)[0]) + 1
            raise GraphError(f"duplicate edge ({rows[k]}, {cols[k]})")

    # CSR with rows sorted by neighbor index
    src = np.concatenate([rows, cols])
    dst = np.concatenate([cols, rows])
    wts = np.concatenate([weights, weights])
    order = np.lexsort((dst, src))
    src, dst, wts = src[order], dst[order], wts[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    degrees = np.zeros(n, dtype=np.float64)
    np.add.at(degrees, src, wts)

    for arr in (rows, cols, weights, indptr, dst, wts, degrees):
        arr.setflags(write=False)
    return Graph(
        n=n,
        rows=rows,
        cols=cols,
        weights=weights,
        indptr=indptr,
        indices=dst,
        adj_weights=wts,
        degrees=degrees,
        coords=coords,
        labels=labels,
    )


def path_graph(n: int, weight: float = 1.0) -> Graph:
    return build_graph(n, [(i, i + 1, weight) for i in range(n - 1)])


def laplacian_quadratic(g: Graph, x: np.ndarray) -> float:
    """Return ``x^T L x`` as the edge sum of ``w_ij (x_i - x_j)^2``."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (g.n,):
        raise ValueError(f"expected vector of length {g.n}, got shape {x.shape}")
    diff = x[g.rows] - x[g.cols]
    return float(np.sum(g.weights * diff * diff))
