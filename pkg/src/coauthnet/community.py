"""Modularity and Louvain community detection on the unweighted graph."""

from __future__ import annotations

import csv
import io
import json
import numbers
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numba import njit
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils import check_random_state

from .graph import CoauthorGraph
from .validation import check_graph, check_scalar

# local-move gains closer than this are treated as ties (no move)
_GAIN_EPS = 1e-10


@dataclass(frozen=True)
class Partition:
    """Non-overlapping community assignment and its modularity."""

    community_of: np.ndarray
    community_count: int
    modularity: float
    params: dict

    def to_csv(self, labels) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["author_id", "community_id"])
        for lab, c in zip(labels, self.community_of):
            w.writerow([lab, int(c)])
        return buf.getvalue()

    def summary(self) -> dict:
        sizes = np.bincount(self.community_of, minlength=self.community_count)
        return {
            "community_count": int(self.community_count),
            "modularity": float(self.modularity),
            "largest_community": int(sizes.max()) if len(sizes) else 0,
            **self.params,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2) + "\n"


def _labels_array(g: CoauthorGraph, community_of) -> np.ndarray:
    n = g.node_count
    if isinstance(community_of, Mapping):
        missing = [v for v in range(n) if v not in community_of]
        if missing:
            raise ValueError(f"node {missing[0]} has no community label")
        community_of = [community_of[v] for v in range(n)]
    labels = np.asarray(community_of)
    if labels.shape != (n,):
        raise ValueError(f"expected {n} community labels, got shape {labels.shape}")
    if n and not np.issubdtype(labels.dtype, np.integer):
        if labels.dtype.kind == "f" and np.isnan(labels).any():
            raise ValueError("community labels contain NaN")
        # arbitrary hashable labels are fine; only their equality matters
        _, labels = np.unique(labels, return_inverse=True)
    return labels.astype(np.int64)


def modularity(g: CoauthorGraph, community_of, resolution: float = 1.0) -> float:
    """Newman modularity ``sum_c [L_c/m - resolution * (d_c/2m)^2]``.

    ``L_c`` counts edges inside community ``c`` and ``d_c`` is its degree sum;
    edge weights are ignored. A graph without edges has Q = 0.
    """
    labels = _labels_array(g, community_of)
    m = g.edge_count
    if m == 0:
        return 0.0
    _, labels = np.unique(labels, return_inverse=True)
    k = labels.max() + 1
    e = g.edge_array()
    same = labels[e[:, 0]] == labels[e[:, 1]]
    intra = np.bincount(labels[e[same, 0]], minlength=k).astype(np.float64)
    dsum = np.bincount(labels, weights=g.degrees.astype(np.float64), minlength=k)
    return float(np.sum(intra / m - resolution * (dsum / (2.0 * m)) ** 2))


@njit(cache=True)
def _local_moves(indptr, indices, weights, k, comm, tot, order, m2, gamma, eps):
    """One Louvain level of greedy node moves; returns the number of moves made."""
    n = k.shape[0]
    link = np.zeros(n, np.float64)
    seen = np.zeros(n, np.bool_)
    cand = np.empty(n, np.int64)
    total_moves = 0
    while True:
        moves = 0
        for v in order:
            cv = comm[v]
            ncand = 0
            cand[ncand] = cv
            ncand += 1
            seen[cv] = True
            for p in range(indptr[v], indptr[v + 1]):
                u = indices[p]
                if u == v:
                    continue
                c = comm[u]
                if not seen[c]:
                    seen[c] = True
                    cand[ncand] = c
                    ncand += 1
                link[c] += weights[p]
            kv = k[v]
            tot[cv] -= kv
            best = cv
            best_gain = link[cv] - gamma * tot[cv] * kv / m2
            for i in range(1, ncand):
                c = cand[i]
                gain = link[c] - gamma * tot[c] * kv / m2
                if gain > best_gain + eps:
                    best = c
                    best_gain = gain
            tot[best] += kv
            if best != cv:
                comm[v] = best
                moves += 1
            for i in range(ncand):
                c = cand[i]
                link[c] = 0.0
                seen[c] = False
        total_moves += moves
        if moves == 0:
            break
    return total_moves


def _aggregate(A: sp.csr_matrix, loops: np.ndarray, comm: np.ndarray, count: int):
    """Collapse communities into super-nodes, keeping internal weight as self-loops."""
    C = sp.csr_matrix((np.ones(len(comm)), (comm, np.arange(len(comm)))), shape=(count, len(comm)))
    B = (C @ A @ C.T).tocsr()
    B.sum_duplicates()
    new_loops = np.bincount(comm, weights=loops, minlength=count) + B.diagonal() / 2.0
    B.setdiag(0)
    B.eliminate_zeros()
    B.sort_indices()
    return B, new_loops


def _dense_by_first_seen(labels: np.ndarray) -> tuple[np.ndarray, int]:
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv], len(first)


def detect_communities(g: CoauthorGraph, resolution: float = 1.0, seed: int = 0,
                       max_levels: int = 100) -> "Partition":
    """Louvain: local moves then aggregation, repeated until nothing moves.

    Node visit order at each level is a permutation drawn from ``seed``.
    Ties in modularity gain keep the node where it is. Community ids in the
    result follow the smallest node id they contain.
    """
    check_scalar(resolution, "resolution", numbers.Real, min_val=0.0, include_boundaries="neither")
    rng = check_random_state(seed)
    n = g.node_count
    params = {"algorithm": "louvain", "resolution": float(resolution),
              "seed": int(seed) if isinstance(seed, numbers.Integral) else None,
              "weighted": False}
    membership = np.arange(n, dtype=np.int64)
    if g.edge_count == 0:
        return Partition(membership, n, 0.0, params)

    A = g.to_scipy().astype(np.float64)
    loops = np.zeros(n)
    for _ in range(max_levels):
        size = A.shape[0]
        k = np.asarray(A.sum(axis=1)).ravel() + 2.0 * loops
        m2 = k.sum()
        comm = np.arange(size, dtype=np.int64)
        tot = k.copy()
        order = rng.permutation(size).astype(np.int64)
        moved = _local_moves(A.indptr.astype(np.int64), A.indices.astype(np.int64),
                             A.data, k, comm, tot, order, m2, float(resolution), _GAIN_EPS)
        if moved == 0:
            break
        comm, count = _dense_by_first_seen(comm)
        membership = comm[membership]
        if count == size:
            break
        A, loops = _aggregate(A, loops, comm, count)

    membership, count = _dense_by_first_seen(membership)
    return Partition(membership, count, modularity(g, membership), params)


class Louvain(ClusterMixin, BaseEstimator):
    """Estimator wrapper: ``fit(G)`` sets ``labels_``, ``modularity_``, ``partition_``."""

    def __init__(self, resolution=1.0, random_state=0):
        self.resolution = resolution
        self.random_state = random_state

    def fit(self, G, y=None):
        g = check_graph(G)
        self.partition_ = detect_communities(g, self.resolution, self.random_state)
        self.labels_ = self.partition_.community_of
        self.modularity_ = self.partition_.modularity
        self.n_communities_ = self.partition_.community_count
        return self
