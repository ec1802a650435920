"""Compiled BFS kernels over CSR adjacency.

Every kernel processes an explicit list of source nodes and releases the GIL,
so callers can fan blocks of sources out to threads. Kernels that produce a
graph-wide sum write into a caller-owned partial vector; per-source outputs are
written by position and need no reduction.
"""

import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def brandes_block(indptr, indices, sources, out, dist_sum, reach, harmonic, ecc):
    """Accumulate unnormalized dependency scores for ``sources`` into ``out``.

    Each unordered pair is seen from both endpoints, so the caller halves the
    total for undirected betweenness. The BFS distance profile of every source
    is written as a by-product, as in :func:`bfs_profile_block`.
    """
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    sigma = np.zeros(n, np.float64)
    delta = np.zeros(n, np.float64)
    order = np.empty(n, np.int64)
    # predecessors of w live in pred[indptr[w] : indptr[w] + npred[w]]
    npred = np.zeros(n, np.int64)
    pred = np.empty(indices.shape[0], np.int64)
    for i in range(sources.shape[0]):
        s = sources[i]
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        total = 0
        inv = 0.0
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v] + 1
            sv = sigma[v]
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                dw = dist[w]
                if dw < 0:
                    dist[w] = dv
                    order[tail] = w
                    tail += 1
                    total += dv
                    inv += 1.0 / dv
                    dw = dv
                if dw == dv:
                    sigma[w] += sv
                    pred[indptr[w] + npred[w]] = v
                    npred[w] += 1
        dist_sum[i] = total
        reach[i] = tail - 1
        harmonic[i] = inv
        ecc[i] = dist[order[tail - 1]]
        # reverse BFS order: a node's dependency is final before it is pushed back
        for j in range(tail - 1, 0, -1):
            w = order[j]
            coeff = (1.0 + delta[w]) / sigma[w]
            base = indptr[w]
            for q in range(npred[w]):
                v = pred[base + q]
                delta[v] += sigma[v] * coeff
            out[w] += delta[w]
        for j in range(tail):
            v = order[j]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
            npred[v] = 0


@njit(nogil=True, cache=True)
def bfs_profile_block(indptr, indices, sources, dist_sum, reach, harmonic, ecc):
    """Per-source distance profile: sum, reachable count, sum of 1/d, eccentricity.

    Results for ``sources[i]`` land at position ``i`` of each output array.
    """
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    for i in range(sources.shape[0]):
        s = sources[i]
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        total = 0
        inv = 0.0
        far = 0
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v] + 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv
                    queue[tail] = w
                    tail += 1
                    total += dv
                    inv += 1.0 / dv
                    if dv > far:
                        far = dv
        dist_sum[i] = total
        reach[i] = tail - 1
        harmonic[i] = inv
        ecc[i] = far
        for j in range(tail):
            dist[queue[j]] = -1


@njit(nogil=True, cache=True)
def triangle_counts(indptr, indices, nodes, out):
    """Number of edges among the neighbors of each node (sorted-list merge)."""
    for i in range(nodes.shape[0]):
        v = nodes[i]
        lo = indptr[v]
        hi = indptr[v + 1]
        count = 0
        for p in range(lo, hi):
            u = indices[p]
            a = lo
            b = indptr[u]
            bend = indptr[u + 1]
            while a < hi and b < bend:
                x = indices[a]
                y = indices[b]
                if x < y:
                    a += 1
                elif x > y:
                    b += 1
                else:
                    count += 1
                    a += 1
                    b += 1
        # each neighbor edge u-w is found from both u and w
        out[i] = count // 2
