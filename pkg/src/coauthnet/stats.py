"""Whole-network statistics: degree, distances, clustering, components."""

from __future__ import annotations

import csv
import io
import json
import numbers
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils import check_random_state

from . import _kernels
from ._parallel import map_blocks
from .centrality import distance_profile
from .community import Partition
from .exceptions import UndefinedValueError
from .graph import CoauthorGraph, connected_components
from .validation import check_graph, check_scalar

EXACT_THRESHOLD = 50_000
SAMPLE_SOURCES = 256


def avg_degree(g: CoauthorGraph) -> float:
    if g.node_count == 0:
        raise UndefinedValueError("average degree is undefined for an empty graph")
    return 2.0 * g.edge_count / g.node_count


class PathStats(NamedTuple):
    diameter: int
    avg_path_length: float
    degenerate: bool
    estimate: bool
    sources: int


def diameter_and_apl(g: CoauthorGraph, exact: bool = True, sample_sources: int | None = None,
                     seed=0, n_jobs: int | None = None) -> PathStats:
    """Diameter and mean distance over connected ordered pairs ``s != t``.

    Pairs in different components are left out. In estimate mode BFS runs
    from ``sample_sources`` nodes drawn with ``seed``; the diameter is then a
    lower bound on the exact one. With no connected pair at all the result is
    ``(0, 0.0)`` flagged ``degenerate``.
    """
    n = g.node_count
    if sample_sources is not None:
        check_scalar(sample_sources, "sample_sources", numbers.Integral, min_val=1)
    if exact:
        sources = None
    else:
        k = SAMPLE_SOURCES if sample_sources is None else sample_sources
        rng = check_random_state(seed)
        sources = np.sort(rng.choice(n, size=min(k, n), replace=False)) if n else np.empty(0, np.int64)
    dsum, reach, _, ecc = distance_profile(g, sources, n_jobs)
    pairs = int(reach.sum())
    if pairs == 0:
        return PathStats(0, 0.0, True, not exact, len(reach))
    # integer totals keep the mean independent of summation order
    return PathStats(int(ecc.max()), int(dsum.sum()) / pairs, False, not exact, len(reach))


def local_clustering(g: CoauthorGraph, n_jobs: int | None = None) -> np.ndarray:
    n = g.node_count
    tri = np.zeros(n, dtype=np.int64)
    nodes = np.arange(n, dtype=np.int64)
    if n:
        blocks = np.array_split(nodes, min(n, 64))

        def work(block):
            out = np.empty(len(block), np.int64)
            _kernels.triangle_counts(g.indptr, g.indices, block, out)
            return out

        tri = np.concatenate(list(map_blocks(work, blocks, n_jobs)))
    deg = g.degrees.astype(np.float64)
    c = np.zeros(n)
    ok = deg >= 2
    c[ok] = 2.0 * tri[ok] / (deg[ok] * (deg[ok] - 1.0))
    return c


def avg_clustering(g: CoauthorGraph, exclude_low_degree: bool = False,
                   n_jobs: int | None = None) -> float:
    """Mean local clustering coefficient.

    Nodes with degree below 2 count as 0 unless ``exclude_low_degree`` drops
    them from the mean (returning 0.0 when no node has degree 2 or more).
    """
    if g.node_count == 0:
        raise UndefinedValueError("average clustering is undefined for an empty graph")
    c = local_clustering(g, n_jobs)
    if exclude_low_degree:
        keep = g.degrees >= 2
        return float(c[keep].mean()) if keep.any() else 0.0
    return float(c.mean())


# display names for the one-row CSV export
CSV_COLUMNS = [
    ("node_count", "Number of authors"),
    ("edge_count", "Number of edges"),
    ("modularity", "Modularity"),
    ("diameter", "Network diameter"),
    ("component_count", "Connected components"),
    ("avg_clustering", "Avg. clustering coefficient"),
    ("avg_path_length", "Avg. path length"),
    ("avg_degree", "Avg. degree"),
]


@dataclass(frozen=True)
class NetworkSummary:
    node_count: int
    edge_count: int
    avg_degree: float | None
    diameter: int
    avg_path_length: float
    avg_clustering: float | None
    component_count: int
    modularity: float | None = None
    degenerate: bool = False
    estimate: bool = False
    path_sources: int = 0
    clustering_excludes_low_degree: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([name for _, name in CSV_COLUMNS])
        row = []
        for key, _ in CSV_COLUMNS:
            v = getattr(self, key)
            row.append("" if v is None else repr(v) if isinstance(v, float) else v)
        w.writerow(row)
        return buf.getvalue()


def summarize(g: CoauthorGraph, partition: Partition | None = None, *,
              exact_threshold: int = EXACT_THRESHOLD, sample_sources: int = SAMPLE_SOURCES,
              seed=0, exclude_low_degree: bool = False, n_jobs: int | None = None) -> NetworkSummary:
    """Bundle the whole-network statistics.

    Distances are exact up to ``exact_threshold`` nodes and sampled beyond it
    (``estimate`` is then set). An empty graph yields a summary with
    ``degenerate`` set and undefined averages left as ``None``.
    """
    n = g.node_count
    exact = n <= exact_threshold
    paths = diameter_and_apl(g, exact, sample_sources, seed, n_jobs)
    q = None
    if partition is not None:
        if len(partition.community_of) != n:
            raise ValueError("partition does not belong to this graph")
        q = float(partition.modularity)
    return NetworkSummary(
        node_count=n,
        edge_count=g.edge_count,
        avg_degree=avg_degree(g) if n else None,
        diameter=paths.diameter,
        avg_path_length=paths.avg_path_length,
        avg_clustering=avg_clustering(g, exclude_low_degree, n_jobs) if n else None,
        component_count=connected_components(g).component_count,
        modularity=q,
        degenerate=paths.degenerate,
        estimate=paths.estimate,
        path_sources=paths.sources,
        clustering_excludes_low_degree=exclude_low_degree,
    )


class NetworkSummarizer(BaseEstimator):
    """Estimator wrapper around :func:`summarize`; ``fit(G)`` sets ``summary_``."""

    def __init__(self, exact_threshold=EXACT_THRESHOLD, sample_sources=SAMPLE_SOURCES,
                 random_state=0, exclude_low_degree=False, n_jobs=None):
        self.exact_threshold = exact_threshold
        self.sample_sources = sample_sources
        self.random_state = random_state
        self.exclude_low_degree = exclude_low_degree
        self.n_jobs = n_jobs

    def fit(self, G, y=None, partition=None):
        self.summary_ = summarize(
            check_graph(G), partition, exact_threshold=self.exact_threshold,
            sample_sources=self.sample_sources, seed=self.random_state,
            exclude_low_degree=self.exclude_low_degree, n_jobs=self.n_jobs,
        )
        return self
