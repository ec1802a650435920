"""Degree, betweenness, closeness and PageRank centrality.

Shortest paths are unweighted throughout: co-publication weights are kept on
the graph but every edge counts as one hop. The functional API
(:func:`degree_centrality` and friends) returns :class:`CentralityVector`
objects; the estimator classes at the bottom wrap the same functions behind
``fit``/``transform`` so they compose with scikit-learn tooling.
"""

from __future__ import annotations

import csv
import io
import json
import numbers
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import _kernels
from ._parallel import map_blocks, source_blocks
from .exceptions import ConvergenceError
from .graph import CoauthorGraph, connected_components
from .validation import check_choice, check_graph, check_scalar

MEASURES = ("degree", "betweenness", "closeness", "pagerank")
CLOSENESS_MODES = ("component_scaled", "harmonic")
BETWEENNESS_SCOPES = ("graph", "component")


@dataclass(frozen=True)
class CentralityVector:
    """Per-node scores for one measure plus the parameters that produced them."""

    measure: str
    scores: np.ndarray
    params: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.scores)

    def to_csv(self, labels) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["author_id", "score"])
        for lab, s in zip(labels, self.scores):
            w.writerow([lab, repr(float(s))])
        return buf.getvalue()

    def to_json(self, labels) -> str:
        doc = {
            "measure": self.measure,
            "params": self.params,
            "scores": {lab: float(s) for lab, s in zip(labels, self.scores)},
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str, labels=None) -> "CentralityVector":
        """Parse :meth:`to_json` output; ``labels`` fixes the node order."""
        doc = json.loads(text)
        scores = doc["scores"]
        if labels is None:
            labels = list(scores)
        missing = [lab for lab in labels if lab not in scores]
        if missing or len(scores) != len(labels):
            raise ValueError(
                f"{doc.get('measure')} scores do not match the graph "
                f"({len(scores)} scores for {len(labels)} nodes)"
            )
        arr = np.array([scores[lab] for lab in labels], dtype=np.float64)
        return cls(doc["measure"], arr, doc.get("params", {}))


def degree_centrality(g: CoauthorGraph) -> CentralityVector:
    """Number of distinct coauthors of each author."""
    return CentralityVector("degree", g.degrees.astype(np.float64), {"mode": "raw"})


def _betweenness_raw(g: CoauthorGraph, n_jobs) -> np.ndarray:
    n = g.node_count
    total = np.zeros(n, dtype=np.float64)
    indptr, indices = g.indptr, g.indices

    def work(block):
        part = np.zeros(n, dtype=np.float64)
        k = len(block)
        prof = (np.empty(k, np.int64), np.empty(k, np.int64), np.empty(k, np.float64),
                np.empty(k, np.int64))
        _kernels.brandes_block(indptr, indices, block, part, *prof)
        return part, prof

    profiles = []
    for part, prof in map_blocks(work, source_blocks(np.arange(n)), n_jobs):
        total += part
        profiles.append(prof)
    if profiles:
        g._cache["profile"] = tuple(np.concatenate(cols) for cols in zip(*profiles))
    # both endpoints of every pair acted as a source
    return total / 2.0


def betweenness_centrality(g: CoauthorGraph, normalized: bool = False, scope: str = "graph",
                           n_jobs: int | None = None) -> CentralityVector:
    """Brandes betweenness over unordered pairs.

    With ``normalized`` the raw score is divided by ``(n-1)(n-2)/2``, where
    ``n`` is the node count of the whole graph (``scope="graph"``) or of the
    node's own component (``scope="component"``). Normalizing with ``n < 3``
    yields zeros. Pairs in different components contribute nothing.
    """
    check_choice(scope, "scope", BETWEENNESS_SCOPES)
    raw = _betweenness_raw(g, n_jobs)
    n = g.node_count
    if normalized:
        if scope == "graph":
            size = np.full(n, n, dtype=np.float64)
        else:
            cc = connected_components(g)
            size = cc.component_sizes[cc.component_of].astype(np.float64)
        denom = (size - 1.0) * (size - 2.0) / 2.0
        scores = np.zeros(n, dtype=np.float64)
        ok = size >= 3
        scores[ok] = raw[ok] / denom[ok]
    else:
        scores = raw
    params = {"normalized": bool(normalized), "scope": scope, "convention": "undirected",
              "weighted": False}
    return CentralityVector("betweenness", scores, params)


def distance_profile(g: CoauthorGraph, sources=None, n_jobs: int | None = None):
    """BFS from each source; returns ``(dist_sum, reach, harmonic, eccentricity)``.

    Arrays are aligned with ``sources`` (all nodes by default). ``reach``
    excludes the source itself. The all-sources profile is cached on ``g``.
    """
    if sources is None:
        if "profile" not in g._cache:
            g._cache["profile"] = distance_profile(g, np.arange(g.node_count), n_jobs)
        return g._cache["profile"]
    sources = np.ascontiguousarray(sources, dtype=np.int64)
    indptr, indices = g.indptr, g.indices

    def work(block):
        k = len(block)
        dsum = np.empty(k, np.int64)
        reach = np.empty(k, np.int64)
        harm = np.empty(k, np.float64)
        ecc = np.empty(k, np.int64)
        _kernels.bfs_profile_block(indptr, indices, block, dsum, reach, harm, ecc)
        return dsum, reach, harm, ecc

    parts = list(map_blocks(work, source_blocks(sources), n_jobs))
    if not parts:
        e_i, e_f = np.empty(0, np.int64), np.empty(0, np.float64)
        return e_i, e_i.copy(), e_f, e_i.copy()
    return tuple(np.concatenate(cols) for cols in zip(*parts))


def closeness_centrality(g: CoauthorGraph, mode: str = "component_scaled",
                         n_jobs: int | None = None) -> CentralityVector:
    """Closeness that stays defined on disconnected graphs.

    ``component_scaled`` (Wasserman-Faust): ``(r / S) * (r / (n-1))`` where ``r``
    is the number of nodes reachable from ``v`` and ``S`` the sum of their
    distances. ``harmonic``: ``sum(1/d) / (n-1)`` over reachable nodes.
    Isolated nodes score 0 in both modes.
    """
    check_choice(mode, "mode", CLOSENESS_MODES)
    n = g.node_count
    dsum, reach, harm, _ = distance_profile(g, n_jobs=n_jobs)
    scores = np.zeros(n, dtype=np.float64)
    if n > 1:
        if mode == "component_scaled":
            ok = reach > 0
            r = reach[ok].astype(np.float64)
            scores[ok] = (r / dsum[ok]) * (r / (n - 1))
        else:
            scores = harm / (n - 1)
    return CentralityVector("closeness", scores, {"mode": mode, "weighted": False})


def pagerank(g: CoauthorGraph, damping: float = 0.85, tol: float = 1e-9,
             max_iter: int = 200) -> CentralityVector:
    """Power-iteration PageRank treating each edge as two directed arcs.

    Isolated nodes are dangling: their mass is spread uniformly. Iteration
    starts from the uniform vector and stops once the L1 change drops below
    ``tol``; otherwise :class:`ConvergenceError` carries the last iterate.
    """
    check_scalar(damping, "damping", numbers.Real, min_val=0.0, max_val=1.0,
                 include_boundaries="neither")
    check_scalar(tol, "tol", numbers.Real, min_val=0.0, include_boundaries="neither")
    check_scalar(max_iter, "max_iter", numbers.Integral, min_val=1)
    n = g.node_count
    params = {"damping": float(damping), "tol": float(tol), "max_iter": int(max_iter),
              "weighted": False}
    if n == 0:
        return CentralityVector("pagerank", np.empty(0), dict(params, iterations=0))
    A = g.to_scipy().astype(np.float64)
    deg = g.degrees.astype(np.float64)
    dangling = deg == 0
    inv_deg = np.zeros(n)
    inv_deg[~dangling] = 1.0 / deg[~dangling]
    x = np.full(n, 1.0 / n)
    residual = np.inf
    for it in range(1, max_iter + 1):
        # A is symmetric, so A @ (x/deg) is the transposed transition product
        nxt = damping * (A @ (x * inv_deg))
        nxt += (damping * x[dangling].sum() + (1.0 - damping)) / n
        residual = float(np.abs(nxt - x).sum())
        x = nxt
        if residual < tol:
            return CentralityVector("pagerank", x, dict(params, iterations=it))
    raise ConvergenceError(
        f"pagerank did not converge in {max_iter} iterations (L1 residual {residual:.3e})",
        scores=x, residual=residual, iterations=max_iter,
    )


def compute_all(g: CoauthorGraph, *, betweenness_normalized=False, betweenness_scope="graph",
                closeness_mode="component_scaled", damping=0.85, tol=1e-9, max_iter=200,
                n_jobs=None) -> dict[str, CentralityVector]:
    return {
        "degree": degree_centrality(g),
        "betweenness": betweenness_centrality(g, betweenness_normalized, betweenness_scope, n_jobs),
        "closeness": closeness_centrality(g, closeness_mode, n_jobs),
        "pagerank": pagerank(g, damping, tol, max_iter),
    }


# -- estimator wrappers ------------------------------------------------------


class _CentralityBase(TransformerMixin, BaseEstimator):
    """``fit(G)`` stores ``vector_`` / ``scores_``; ``transform(G)`` returns scores for ``G``."""

    def _compute(self, g: CoauthorGraph) -> CentralityVector:
        raise NotImplementedError

    def fit(self, G, y=None):
        g = check_graph(G)
        self.vector_ = self._compute(g)
        self.scores_ = self.vector_.scores
        self.n_nodes_ = g.node_count
        return self

    def transform(self, G):
        check_is_fitted(self, "vector_")
        return self._compute(check_graph(G)).scores

    def fit_transform(self, G, y=None, **fit_params):
        return self.fit(G).scores_


class DegreeCentrality(_CentralityBase):
    def _compute(self, g):
        return degree_centrality(g)


class BetweennessCentrality(_CentralityBase):
    def __init__(self, normalized=False, scope="graph", n_jobs=None):
        self.normalized = normalized
        self.scope = scope
        self.n_jobs = n_jobs

    def _compute(self, g):
        return betweenness_centrality(g, self.normalized, self.scope, self.n_jobs)


class ClosenessCentrality(_CentralityBase):
    def __init__(self, mode="component_scaled", n_jobs=None):
        self.mode = mode
        self.n_jobs = n_jobs

    def _compute(self, g):
        return closeness_centrality(g, self.mode, self.n_jobs)


class PageRank(_CentralityBase):
    def __init__(self, damping=0.85, tol=1e-9, max_iter=200):
        self.damping = damping
        self.tol = tol
        self.max_iter = max_iter

    def _compute(self, g):
        return pagerank(g, self.damping, self.tol, self.max_iter)
