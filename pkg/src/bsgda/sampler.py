"""Sampling set selection by Gershgorin disc alignment.

Three layers:

* :func:`estimate_coverage` grows the coverage subset of one sampled node by
  a hop-limited BFS that aligns each reachable disc's left end at ``T``.
* :func:`greedy_cover` covers all nodes with as few coverage subsets as
  possible (greedy set cover, capped at ``K`` picks).
* :func:`bs_gda` binary-searches the largest ``T`` for which ``K`` samples
  still cover the graph.
"""

from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .discs import DiscState, sampling_vector
from .graph import Graph

log = logging.getLogger(__name__)

DEFAULT_MU = 0.01
DEFAULT_EPS = 1e-5
DEFAULT_HOPS = 12
ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class CoverageSubset:
    root: int
    members: tuple[int, ...]  # BFS inclusion order, root first
    scales: dict[int, float]
    target: float
    hop_limit: int

    @property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, node) -> bool:
        return node in self.scales


@dataclass(frozen=True)
class GreedyResult:
    valid: bool
    sample_set: list[int]
    subsets_used: list[CoverageSubset]


@dataclass
class SamplingOutcome:
    sample_set: list[int]
    valid: bool
    achieved_T: float
    assembled_s: np.ndarray
    certified_lower_bound: float
    trace: list[tuple[float, bool, int]] = field(default_factory=list)


def _check_target(T: float) -> None:
    if not 0.0 < T < 1.0:
        raise ValueError(f"target T must lie in (0, 1), got {T}")


def _check_common(p: int, mu: float) -> None:
    if p < 0:
        raise ValueError(f"hop limit must be >= 0, got {p}")
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")


def estimate_coverage(g: Graph, T: float, i: int, p: int = DEFAULT_HOPS,
                      mu: float = DEFAULT_MU) -> CoverageSubset:
    """Coverage subset of node ``i`` at target ``T`` within ``p`` hops.

    Nodes are visited in FIFO order (neighbours by ascending index). On
    visit, node ``k`` gets the scale that aligns its left end at ``T`` given
    the current scales of its neighbours, where unvisited or rejected nodes
    count as 1. ``k`` joins the subset iff that scale is at least 1 and it is
    within ``p`` hops; only members push their unseen neighbours.
    """
    _check_target(T)
    _check_common(p, mu)
    s = np.ones(g.n)
    hop = {i: 0}
    queue = deque([i])
    members: list[int] = []
    scales: dict[int, float] = {}
    while queue:
        k = queue.popleft()
        if hop[k] > p:
            continue
        nbrs = g.neighbors(k)
        acc = float(np.sum(g.neighbor_weights(k) / s[nbrs]))
        a_k = 1.0 if k == i else 0.0
        sk = (a_k + mu * g.degrees[k] - T) / (mu * acc) if acc > 0 else 1.0
        if sk < 1.0:
            continue
        s[k] = sk
        members.append(k)
        scales[k] = float(sk)
        for t in nbrs:
            t = int(t)
            if t not in hop:
                hop[t] = hop[k] + 1
                queue.append(t)
    return CoverageSubset(i, tuple(members), scales, float(T), int(p))


@dataclass(frozen=True, eq=False)
class CoverageTable:
    """All ``n`` coverage subsets at one target, in CSR layout."""

    ptr: np.ndarray
    members: np.ndarray
    scales: np.ndarray
    target: float
    hop_limit: int

    def sizes(self) -> np.ndarray:
        return np.diff(self.ptr)

    def subset(self, i: int) -> CoverageSubset:
        lo, hi = self.ptr[i], self.ptr[i + 1]
        mem = tuple(int(v) for v in self.members[lo:hi])
        sc = {int(v): float(x) for v, x in zip(self.members[lo:hi], self.scales[lo:hi])}
        return CoverageSubset(int(i), mem, sc, self.target, self.hop_limit)


def _chunks(n: int, workers: int) -> list[np.ndarray]:
    return [c for c in np.array_split(np.arange(n, dtype=np.int64), workers) if c.size]


def coverage_table(g: Graph, T: float, p: int = DEFAULT_HOPS, mu: float = DEFAULT_MU,
                   workers: int = 1) -> CoverageTable:
    """Coverage subsets of every node; chunks run on ``workers`` threads."""
    _check_target(T)
    _check_common(p, mu)
    args = (g.indptr, g.indices, g.adj_weights, g.degrees, float(T), int(p), float(mu))
    chunks = _chunks(g.n, max(1, int(workers)))
    if len(chunks) == 1:
        parts = [_kernels.coverage_batch(*args, chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(lambda c: _kernels.coverage_batch(*args, c), chunks))
    # merge in node order
    ptrs, offset = [np.zeros(1, dtype=np.int64)], 0
    for ptr, mem, _ in parts:
        ptrs.append(ptr[1:] + offset)
        offset += mem.size
    return CoverageTable(
        ptr=np.concatenate(ptrs),
        members=np.concatenate([part[1] for part in parts]),
        scales=np.concatenate([part[2] for part in parts]),
        target=float(T),
        hop_limit=int(p),
    )


def greedy_cover(g: Graph, T: float, K: int, p: int = DEFAULT_HOPS,
                 mu: float = DEFAULT_MU, workers: int = 1,
                 table: CoverageTable | None = None) -> GreedyResult:
    """Greedy disc coverage with at most ``K`` samples at target ``T``."""
    if K < 1:
        raise ValueError(f"budget K must be >= 1, got {K}")
    if table is None:
        table = coverage_table(g, T, p, mu, workers)
    selected, remaining = _kernels.greedy_cover(g.n, table.ptr, table.members, int(K))
    picks = [int(v) for v in selected]
    return GreedyResult(remaining == 0, picks, [table.subset(i) for i in picks])


def assemble_scaling(subsets_used, n: int, merge: str = "max") -> np.ndarray:
    """Per-node scale vector built from the selected coverage subsets.

    ``merge="max"`` keeps, for each node, the largest scale any selected
    subset gave it. Scales only grow during coverage estimation, so every
    covered node keeps its left end at or above the subset target.
    ``merge="first"`` takes the scale from the first subset (in selection
    order) holding the node; it can leave boundary nodes below target.
    Uncovered nodes get 1.
    """
    if merge not in ("max", "first"):
        raise ValueError(f"unknown merge rule {merge!r}")
    s = np.ones(n)
    assigned = np.zeros(n, dtype=bool)
    for sub in subsets_used:
        for node in sub.members:
            val = sub.scales[node]
            if merge == "max":
                s[node] = max(s[node], val)
            elif not assigned[node]:
                s[node] = val
                assigned[node] = True
    return s


def certified_bound(g: Graph, sample_set, s, mu: float) -> float:
    """Smallest disc left end under scaling ``s``; always <= lambda_min(B)."""
    return float(DiscState(g, sampling_vector(g.n, sample_set), s, mu).left_ends().min())


def verify_alignment(g: Graph, a, s, mu: float, T: float,
                     tol: float = ALIGN_TOL) -> list[tuple[int, float]]:
    """Nodes whose left end falls below ``T - tol`` as ``(node, left_end)`` pairs."""
    ends = DiscState(g, a, s, mu).left_ends()
    bad = np.flatnonzero(ends < T - tol)
    return [(int(i), float(ends[i])) for i in bad]


def bs_gda(g: Graph, K: int, eps: float = DEFAULT_EPS, p: int = DEFAULT_HOPS,
           mu: float = DEFAULT_MU, workers: int = 1, merge: str = "max") -> SamplingOutcome:
    """Binary search for the largest target ``T`` that ``K`` samples can cover.

    Returns the sampling set of the last valid probe with ``achieved_T`` the
    final left end of the search interval. Leftover budget is not spent.
    """
    if K < 1:
        raise ValueError(f"budget K must be >= 1, got {K}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    _check_common(p, mu)

    left, right = 0.0, 1.0
    best: GreedyResult | None = None
    trace = []
    while right - left > eps:
        T = (left + right) / 2
        res = greedy_cover(g, T, K, p, mu, workers)
        trace.append((T, res.valid, len(res.sample_set)))
        log.debug("probe T=%.8f valid=%s |S|=%d", T, res.valid, len(res.sample_set))
        if res.valid:
            left = T
            best = res
        else:
            right = T

    if best is None:
        s = np.ones(g.n)
        return SamplingOutcome([], False, 0.0, s, certified_bound(g, [], s, mu), trace)
    s = assemble_scaling(best.subsets_used, g.n, merge)
    return SamplingOutcome(
        sample_set=best.sample_set,
        valid=True,
        achieved_T=left,
        assembled_s=s,
        certified_lower_bound=certified_bound(g, best.sample_set, s, mu),
        trace=trace,
    )


def rebuild_scaling(g: Graph, sample_set, T: float, p: int = DEFAULT_HOPS,
                    mu: float = DEFAULT_MU, merge: str = "max") -> np.ndarray:
    """Recompute the assembled scales of a saved sampling set at target ``T``."""
    subsets = [estimate_coverage(g, T, int(i), p, mu) for i in sample_set]
    return assemble_scaling(subsets, g.n, merge)


def random_sampler(g: Graph, K: int, seed=None) -> list[int]:
    """``K`` distinct nodes drawn uniformly without replacement."""
    if not 1 <= K <= g.n:
        raise ValueError(f"budget must satisfy 1 <= K <= n={g.n}, got {K}")
    rng = np.random.default_rng(seed)
    return [int(v) for v in rng.choice(g.n, size=K, replace=False)]
