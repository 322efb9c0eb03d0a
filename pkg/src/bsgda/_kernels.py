"""Compiled inner loops for coverage estimation and greedy covering."""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def coverage_batch(indptr, indices, weights, degrees, T, p, mu, roots):
    """Coverage subsets for every root in ``roots``.

    Returns ``(ptr, members, scales)`` in CSR layout: the subset of
    ``roots[r]`` is ``members[ptr[r]:ptr[r+1]]`` in BFS inclusion order.
    Scales of rejected nodes are never stored, so they stay at 1.
    """
    n = degrees.size
    s = np.ones(n)
    seen = np.full(n, -1, dtype=np.int64)
    hop = np.zeros(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)

    cap = max(16, 4 * roots.size)
    members = np.empty(cap, dtype=np.int64)
    scales = np.empty(cap)
    ptr = np.zeros(roots.size + 1, dtype=np.int64)
    count = 0

    for r in range(roots.size):
        root = roots[r]
        start = count
        head = 0
        tail = 0
        queue[tail] = root
        tail += 1
        seen[root] = r
        hop[root] = 0
        while head < tail:
            k = queue[head]
            head += 1
            if hop[k] > p:
                continue
            acc = 0.0
            for e in range(indptr[k], indptr[k + 1]):
                acc += weights[e] / s[indices[e]]
            a_k = 1.0 if k == root else 0.0
            if acc > 0.0:
                sk = (a_k + mu * degrees[k] - T) / (mu * acc)
            else:
                # isolated root: nothing to scale, left end stays at 1
                sk = 1.0
            if sk < 1.0:
                continue
            s[k] = sk
            if count == cap:
                cap *= 2
                grown = np.empty(cap, dtype=np.int64)
                grown[:count] = members[:count]
                members = grown
                grown_s = np.empty(cap)
                grown_s[:count] = scales[:count]
                scales = grown_s
            members[count] = k
            scales[count] = sk
            count += 1
            for e in range(indptr[k], indptr[k + 1]):
                t = indices[e]
                if seen[t] != r:
                    seen[t] = r
                    hop[t] = hop[k] + 1
                    queue[tail] = t
                    tail += 1
        for q in range(start, count):
            s[members[q]] = 1.0
        ptr[r + 1] = count
    return ptr, members[:count].copy(), scales[:count].copy()


@njit(cache=True, nogil=True)
def greedy_cover(n, ptr, members, K):
    """Greedy set cover over subsets ``members[ptr[i]:ptr[i+1]]``, i = 0..n-1.

    Picks at most ``K`` subsets, each time the one with the most uncovered
    nodes (lowest index on ties). Returns ``(selected, n_uncovered)``.
    """
    # node -> subsets containing it
    owners_ptr = np.zeros(n + 1, dtype=np.int64)
    for q in range(members.size):
        owners_ptr[members[q] + 1] += 1
    for v in range(n):
        owners_ptr[v + 1] += owners_ptr[v]
    fill = owners_ptr[:-1].copy()
    owners = np.empty(members.size, dtype=np.int64)
    for i in range(n):
        for q in range(ptr[i], ptr[i + 1]):
            v = members[q]
            owners[fill[v]] = i
            fill[v] += 1

    gain = np.empty(n, dtype=np.int64)
    for i in range(n):
        gain[i] = ptr[i + 1] - ptr[i]
    uncovered = np.ones(n, dtype=np.uint8)
    remaining = n
    selected = np.empty(min(K, n), dtype=np.int64)
    n_sel = 0
    while remaining > 0 and n_sel < K:
        best = 0
        for i in range(1, n):
            if gain[i] > gain[best]:
                best = i
        if gain[best] == 0:
            break
        selected[n_sel] = best
        n_sel += 1
        for q in range(ptr[best], ptr[best + 1]):
            v = members[q]
            if uncovered[v]:
                uncovered[v] = 0
                remaining -= 1
                for o in range(owners_ptr[v], owners_ptr[v + 1]):
                    gain[owners[o]] -= 1
    return selected[:n_sel].copy(), remaining
