"""Immutable undirected coauthorship graph in compressed sparse row form."""

from __future__ import annotations

import io
import os
from collections import Counter
from typing import Iterable, Mapping, NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _scipy_cc

from .exceptions import NodeNotFoundError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


class CoauthorGraph:
    """Undirected graph over authors with integer co-publication weights.

    Nodes are dense integers ``0..n-1``; ``labels[i]`` is the external author
    id of node ``i``. Adjacency is stored as CSR (``indptr``, ``indices``) with
    each neighbor list sorted ascending and each undirected edge present in
    both directions with the same weight. Instances are read-only.

    ``node_data`` holds optional per-node arrays (e.g. a ``top_k`` flag set by
    ego-network extraction); they are carried through ``induced_subgraph``.
    """

    __slots__ = ("indptr", "indices", "weights", "labels", "node_data", "_index", "_cache")

    def __init__(self, indptr, indices, weights, labels, node_data=None):
        self.indptr = _frozen(np.asarray(indptr, dtype=np.int64))
        self.indices = _frozen(np.asarray(indices, dtype=np.int64))
        self.weights = _frozen(np.asarray(weights, dtype=np.int64))
        self.labels = tuple(str(x) for x in labels)
        if len(self.labels) != len(self.indptr) - 1:
            raise ValueError("labels length does not match node count")
        self.node_data = {k: _frozen(np.asarray(v)) for k, v in (node_data or {}).items()}
        for key, arr in self.node_data.items():
            if arr.shape[0] != self.node_count:
                raise ValueError(f"node_data[{key!r}] has wrong length")
        self._index = None
        # derived results that depend only on the (immutable) structure
        self._cache = {}

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def __len__(self):
        return self.node_count

    def __repr__(self):
        return f"CoauthorGraph(node_count={self.node_count}, edge_count={self.edge_count})"

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        self._check_node(v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def weight(self, u: int, v: int) -> int:
        """Co-publication count of edge ``u-v`` (0 if absent)."""
        nbrs = self.neighbors(u)
        self._check_node(v)
        pos = np.searchsorted(nbrs, v)
        if pos < len(nbrs) and nbrs[pos] == v:
            return int(self.weights[self.indptr[u] + pos])
        return 0

    def has_edge(self, u: int, v: int) -> bool:
        return self.weight(u, v) > 0

    def index_of(self, label: str) -> int:
        if self._index is None:
            self._index = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._index[label]
        except KeyError:
            raise NodeNotFoundError(label) from None

    def edges(self):
        """Yield ``(u, v, weight)`` for each undirected edge once, with ``u < v``."""
        for u in range(self.node_count):
            lo, hi = self.indptr[u], self.indptr[u + 1]
            for p in range(lo, hi):
                v = int(self.indices[p])
                if v > u:
                    yield u, v, int(self.weights[p])

    def edge_array(self) -> np.ndarray:
        """``(m, 3)`` array of ``u, v, weight`` rows with ``u < v``, CSR order."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep], self.weights[keep]])

    def to_scipy(self, weighted: bool = False) -> sp.csr_matrix:
        data = self.weights if weighted else np.ones(len(self.indices), dtype=np.int64)
        n = self.node_count
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def with_node_data(self, **arrays) -> "CoauthorGraph":
        data = dict(self.node_data)
        data.update(arrays)
        return CoauthorGraph(self.indptr, self.indices, self.weights, self.labels, data)

    def _check_node(self, v) -> None:
        if not (0 <= v < self.node_count):
            raise NodeNotFoundError(v)

    def __eq__(self, other):
        if not isinstance(other, CoauthorGraph):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


def _from_index_pairs(n, u, v, w, labels, node_data=None) -> CoauthorGraph:
    """Build CSR from unique undirected index pairs ``u < v``."""
    src = np.concatenate([u, v]).astype(np.int64)
    dst = np.concatenate([v, u]).astype(np.int64)
    wts = np.concatenate([w, w]).astype(np.int64)
    order = np.lexsort((dst, src))
    src, dst, wts = src[order], dst[order], wts[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return CoauthorGraph(indptr, dst, wts, labels, node_data)


def build_graph(pairs: Iterable[tuple[str, str]], nodes: Iterable[str] | None = None) -> CoauthorGraph:
    """Collapse an author-pair multiset into a :class:`CoauthorGraph`.

    Node ids are assigned in first-seen order, visiting ``nodes`` (if given)
    before the pairs. Unordered duplicates merge into one edge whose weight is
    the multiplicity; self-pairs are dropped, but their author still becomes a
    node.

    >>> g = build_graph([("a", "b"), ("b", "a"), ("a", "c")])
    >>> g.node_count, g.edge_count, g.weight(0, 1)
    (3, 2, 2)
    """
    index: dict[str, int] = {}
    if nodes is not None:
        for a in nodes:
            index.setdefault(a, len(index))
    counts: Counter = Counter()
    for a, b in pairs:
        i = index.setdefault(a, len(index))
        j = index.setdefault(b, len(index))
        if i == j:
            continue
        counts[(i, j) if i < j else (j, i)] += 1
    n = len(index)
    if counts:
        keys = np.array(list(counts.keys()), dtype=np.int64)
        w = np.fromiter(counts.values(), dtype=np.int64, count=len(counts))
        u, v = keys[:, 0], keys[:, 1]
    else:
        u = v = w = np.empty(0, dtype=np.int64)
    return _from_index_pairs(n, u, v, w, list(index))


class ComponentLabeling(NamedTuple):
    component_of: np.ndarray
    component_sizes: np.ndarray
    component_count: int


def connected_components(g: CoauthorGraph) -> ComponentLabeling:
    """Label connected components; component ids follow their smallest node id."""
    n = g.node_count
    if n == 0:
        return ComponentLabeling(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64), 0)
    count, raw = _scipy_cc(g.to_scipy(), directed=False)
    # scipy's label values are arbitrary; renumber by first occurrence
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first, kind="stable")
    relabel = np.empty(count, dtype=np.int64)
    relabel[order] = np.arange(count)
    labels = relabel[raw]
    sizes = np.bincount(labels, minlength=count).astype(np.int64)
    return ComponentLabeling(labels, sizes, int(count))


def _as_node_array(g: CoauthorGraph, nodes) -> np.ndarray:
    arr = np.fromiter((int(x) for x in nodes), dtype=np.int64)
    bad = (arr < 0) | (arr >= g.node_count)
    if bad.any():
        raise NodeNotFoundError(int(arr[bad][0]))
    return np.unique(arr)


def induced_subgraph(g: CoauthorGraph, nodes: Iterable[int]) -> CoauthorGraph:
    """Subgraph on ``nodes`` with every edge among them, renumbered in id order."""
    keep = _as_node_array(g, nodes)
    n = len(keep)
    new_id = np.full(g.node_count, -1, dtype=np.int64)
    new_id[keep] = np.arange(n)
    e = g.edge_array()
    mask = (new_id[e[:, 0]] >= 0) & (new_id[e[:, 1]] >= 0) if len(e) else np.zeros(0, bool)
    e = e[mask]
    labels = [g.labels[i] for i in keep]
    data = {k: arr[keep] for k, arr in g.node_data.items()}
    return _from_index_pairs(n, new_id[e[:, 0]], new_id[e[:, 1]], e[:, 2], labels, data)


def neighborhood_closure(g: CoauthorGraph, seeds: Iterable[int]) -> frozenset[int]:
    """Seeds together with all of their neighbors."""
    s = _as_node_array(g, seeds)
    if len(s) == 0:
        return frozenset()
    parts = [s] + [g.indices[g.indptr[v]:g.indptr[v + 1]] for v in s]
    return frozenset(int(x) for x in np.unique(np.concatenate(parts)))


# -- edge-list text format ---------------------------------------------------
#
# One edge per line: ``id<TAB>id`` with an optional third ``<TAB>weight``
# column (default 1). A line holding a single id declares a node without
# adding an edge. ``#`` starts a comment; blank lines are ignored. Repeated
# edge lines accumulate weight, so a plain pair list loads as a multiset.


def parse_edgelist(stream) -> CoauthorGraph:
    index: dict[str, int] = {}
    counts: Counter = Counter()
    for lineno, raw in enumerate(stream, 1):
        line = raw.split("#", 1)[0].rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) == 1:
            index.setdefault(parts[0].strip(), len(index))
            continue
        if len(parts) > 3:
            raise ValueError(f"line {lineno}: expected 1-3 tab-separated fields")
        a, b = parts[0].strip(), parts[1].strip()
        if not a or not b:
            raise ValueError(f"line {lineno}: empty node id")
        try:
            w = int(parts[2]) if len(parts) == 3 else 1
        except ValueError:
            raise ValueError(f"line {lineno}: weight must be an integer") from None
        if w < 1:
            raise ValueError(f"line {lineno}: weight must be >= 1")
        i = index.setdefault(a, len(index))
        j = index.setdefault(b, len(index))
        if i != j:
            counts[(i, j) if i < j else (j, i)] += w
    n = len(index)
    if counts:
        keys = np.array(list(counts.keys()), dtype=np.int64)
        w = np.fromiter(counts.values(), dtype=np.int64, count=len(counts))
        return _from_index_pairs(n, keys[:, 0], keys[:, 1], w, list(index))
    empty = np.empty(0, dtype=np.int64)
    return _from_index_pairs(n, empty, empty, empty, list(index))


def read_edgelist(path: str | os.PathLike) -> CoauthorGraph:
    with open(path, encoding="utf-8") as f:
        return parse_edgelist(f)


def format_edgelist(g: CoauthorGraph) -> str:
    """Serialize ``g`` so that :func:`parse_edgelist` rebuilds it exactly.

    Every node is declared first (fixing node order), then each edge once.
    """
    for lab in g.labels:
        if any(c in lab for c in "\t\r\n#") or lab != lab.strip() or not lab:
            raise ValueError(f"label {lab!r} cannot be written to an edge list")
    buf = io.StringIO()
    buf.write(f"# coauthnet edge list: {g.node_count} nodes, {g.edge_count} edges\n")
    for lab in g.labels:
        buf.write(lab + "\n")
    for u, v, w in g.edge_array():
        buf.write(f"{g.labels[u]}\t{g.labels[v]}\t{w}\n")
    return buf.getvalue()


def relabel(g: CoauthorGraph, perm: np.ndarray | Mapping[int, int]) -> CoauthorGraph:
    """Return ``g`` with node ``i`` moved to position ``perm[i]``."""
    perm = np.asarray([perm[i] for i in range(g.node_count)] if isinstance(perm, Mapping) else perm,
                      dtype=np.int64)
    if sorted(perm.tolist()) != list(range(g.node_count)):
        raise ValueError("perm must be a permutation of the node ids")
    e = g.edge_array()
    labels = [None] * g.node_count
    for i, p in enumerate(perm):
        labels[p] = g.labels[i]
    data = {}
    for k, arr in g.node_data.items():
        out = np.empty_like(arr)
        out[perm] = arr
        data[k] = out
    u, v = perm[e[:, 0]], perm[e[:, 1]]
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    return _from_index_pairs(g.node_count, lo, hi, e[:, 2], labels, data)
