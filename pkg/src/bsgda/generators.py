"""Synthetic graph families: random sensor, community and Barabasi-Albert."""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import cKDTree

from .graph import Graph, build_graph

COMMUNITY_RADIUS = 1.0
COMMUNITY_SPREAD = 0.15
COMMUNITY_LINK_DIST = 0.3
COMMUNITY_BRIDGE_FRACTION = 0.02


def gaussian_weights(sq_dist: np.ndarray, sigma2: float) -> np.ndarray:
    return np.exp(-sq_dist / sigma2)


def gen_sensor_graph(n: int, k_nn: int = 6, seed: int = 0) -> Graph:
    """Random geometric sensor graph.

    Nodes are uniform in the unit square and each is linked to its ``k_nn``
    nearest neighbours; the union is symmetrised. Weights use a Gaussian
    kernel whose bandwidth is the mean squared length of the kept edges.
    """
    if k_nn < 1 or n <= k_nn:
        raise ValueError(f"need n > k_nn >= 1, got n={n}, k_nn={k_nn}")
    rng = np.random.default_rng(seed)
    xy = rng.random((n, 2))
    _, nbr = cKDTree(xy).query(xy, k=k_nn + 1)
    src = np.repeat(np.arange(n), k_nn)
    dst = nbr[:, 1:].ravel()
    keep = src != dst  # coincident points can return the node itself
    lo = np.minimum(src[keep], dst[keep])
    hi = np.maximum(src[keep], dst[keep])
    pairs = np.unique(np.stack([lo, hi], axis=1), axis=0)
    sq = np.sum((xy[pairs[:, 0]] - xy[pairs[:, 1]]) ** 2, axis=1)
    sigma2 = float(sq.mean()) if sq.mean() > 0 else 1.0
    w = gaussian_weights(sq, sigma2)
    return build_graph(n, zip(pairs[:, 0], pairs[:, 1], w), coords=xy)


def n_communities(n: int) -> int:
    return max(1, math.isqrt(n) // 2)


def gen_community_graph(n: int, seed: int = 0) -> Graph:
    """Community graph with ``floor(sqrt(n)/2)`` clusters.

    Cluster centres sit on the unit circle, members scatter around them, and
    members closer than ``COMMUNITY_LINK_DIST`` are linked. A few random
    bridges join distinct clusters. Weights are ``exp(-d^2)``.
    The cluster of every node is kept in ``Graph.labels``.
    """
    if n < 4:
        raise ValueError(f"community graph needs n >= 4, got {n}")
    rng = np.random.default_rng(seed)
    k = n_communities(n)
    labels = rng.permutation(np.arange(n) % k)
    angles = 2.0 * np.pi * np.arange(k) / k
    centers = COMMUNITY_RADIUS * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    xy = centers[labels] + rng.normal(scale=COMMUNITY_SPREAD, size=(n, 2))

    pairs = cKDTree(xy).query_pairs(COMMUNITY_LINK_DIST, output_type="ndarray")
    if pairs.size:
        pairs = pairs[labels[pairs[:, 0]] == labels[pairs[:, 1]]]
    edge_set = {(int(i), int(j)) for i, j in np.sort(pairs, axis=1)}

    n_bridges = math.ceil(COMMUNITY_BRIDGE_FRACTION * n) if k > 1 else 0
    added = 0
    while added < n_bridges:
        i, j = (int(v) for v in rng.integers(0, n, size=2))
        if labels[i] == labels[j]:
            continue
        key = (min(i, j), max(i, j))
        if key in edge_set:
            continue
        edge_set.add(key)
        added += 1

    keys = sorted(edge_set)
    if keys:
        ij = np.array(keys)
        sq = np.sum((xy[ij[:, 0]] - xy[ij[:, 1]]) ** 2, axis=1)
        w = gaussian_weights(sq, 1.0)
    else:
        ij, w = np.empty((0, 2), dtype=int), np.empty(0)
    return build_graph(n, zip(ij[:, 0], ij[:, 1], w), coords=xy, labels=labels)


def gen_ba_graph(n: int, seed: int = 0) -> Graph:
    """Preferential-attachment tree (one edge per new node), uniform (0, 1) weights."""
    if n < 2:
        raise ValueError(f"BA graph needs n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    # endpoint list: picking a uniform entry picks a node proportionally to degree
    ends = np.empty(2 * (n - 1), dtype=np.int64)
    ends[0], ends[1] = 0, 1
    pairs = [(0, 1)]
    for t in range(2, n):
        target = int(ends[rng.integers(0, 2 * (t - 1))])
        pairs.append((target, t))
        ends[2 * (t - 1)] = target
        ends[2 * (t - 1) + 1] = t
    w = rng.random(n - 1)
    while np.any(w == 0.0):
        bad = w == 0.0
        w[bad] = rng.random(int(bad.sum()))
    return build_graph(n, [(i, j, wk) for (i, j), wk in zip(pairs, w)])


GENERATORS = {
    "sensor": lambda n, seed: gen_sensor_graph(n, 6, seed),
    "community": gen_community_graph,
    "ba": gen_ba_graph,
}
