"""Gershgorin discs of ``B = diag(a) + mu L`` under diagonal similarity scaling.

For a positive scale vector ``s`` the scaled matrix ``C = S B S^-1`` keeps the
centres ``a_i + mu d_i`` of ``B`` while row ``i`` gets radius
``mu s_i sum_j w_ij / s_j``. All quantities here are computed from the
adjacency lists; ``C`` is only formed densely by :func:`dense_scaled_matrix`
for checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from . import oracle


def sampling_vector(n: int, sample_set) -> np.ndarray:
    a = np.zeros(n, dtype=np.float64)
    idx = np.asarray(list(sample_set), dtype=np.int64)
    if idx.size:
        if idx.min() < 0 or idx.max() >= n:
            raise IndexError("sample index out of range")
        a[idx] = 1.0
    return a


@dataclass(frozen=True, eq=False)
class DiscState:
    graph: Graph
    a: np.ndarray
    s: np.ndarray
    mu: float

    def __post_init__(self):
        n = self.graph.n
        a = np.asarray(self.a, dtype=np.float64)
        s = np.asarray(self.s, dtype=np.float64)
        if a.shape != (n,) or s.shape != (n,):
            raise ValueError(f"a and s must have length {n}")
        if not np.all((a == 0.0) | (a == 1.0)):
            raise ValueError("sampling vector entries must be 0 or 1")
        if not np.all(s > 0):
            raise ValueError("scale factors must be positive")
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "s", s)

    @classmethod
    def unscaled(cls, g: Graph, a, mu: float) -> "DiscState":
        return cls(g, a, np.ones(g.n), mu)

    def centers(self) -> np.ndarray:
        return self.a + self.mu * self.graph.degrees

    def radii(self) -> np.ndarray:
        return self.mu * self.s * (self.graph.adjacency @ (1.0 / self.s))

    def left_ends(self) -> np.ndarray:
        return self.centers() - self.radii()

    def left_end(self, i: int) -> float:
        return left_end(self, i)


def _weighted_inverse_sum(state: DiscState, i: int) -> float:
    g = state.graph
    lo, hi = g.indptr[i], g.indptr[i + 1]
    return float(np.sum(g.adj_weights[lo:hi] / state.s[g.indices[lo:hi]]))


def left_end(state: DiscState, i: int) -> float:
    """Left end of disc ``i``: ``a_i + mu (d_i - s_i sum_j w_ij / s_j)``."""
    g = state.graph
    return float(
        state.a[i] + state.mu * (g.degrees[i] - state.s[i] * _weighted_inverse_sum(state, i))
    )


def scale_factor(state: DiscState, i: int, T: float) -> float:
    """Scale ``s_i`` that puts the left end of disc ``i`` exactly at ``T``.

    Neighbour scales are taken from ``state``.
    """
    denom = state.mu * _weighted_inverse_sum(state, i)
    if denom <= 0.0:
        raise ValueError(f"node {i} is isolated; its disc radius cannot be scaled")
    return (state.a[i] + state.mu * state.graph.degrees[i] - T) / denom


def dense_scaled_matrix(g: Graph, a, s, mu: float) -> np.ndarray:
    """Explicit ``C = S B S^-1`` (dense, for verification only)."""
    B = oracle.dense_coefficient_matrix(g, mu, a)
    s = np.asarray(s, dtype=np.float64)
    return (s[:, None] * B) / s[None, :]


def dense_left_ends(C: np.ndarray) -> np.ndarray:
    off = np.abs(C).sum(axis=1) - np.abs(np.diag(C))
    return np.diag(C) - off


def eig_sandwich_check(g: Graph, a, s, mu: float, cap: int = oracle.ORACLE_CAP):
    """Return ``(min left end, lambda_min(B), max left end)``.

    The smallest left end is a lower bound and the largest an upper bound
    on ``lambda_min(B)`` for every positive ``s``.
    """
    ends = DiscState(g, a, s, mu).left_ends()
    lam = oracle.lambda_min(g, mu, a, cap=cap)
    return float(ends.min()), lam, float(ends.max())
