"""Cross-measure rank tables, ego networks and affiliation reports."""

from __future__ import annotations

import csv
import io
import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .centrality import MEASURES, CentralityVector
from .graph import CoauthorGraph, induced_subgraph, neighborhood_closure
from .ingest import AffiliationIndex


def rank_order(scores: np.ndarray, labels) -> np.ndarray:
    """Node ids sorted by score descending, ties by ascending author id."""
    scores = np.asarray(scores, dtype=np.float64)
    if len(scores) == 0:
        return np.empty(0, dtype=np.int64)
    # lexsort keys: last is primary
    return np.lexsort((np.asarray(labels, dtype=str), -scores)).astype(np.int64)


def ranks(scores: np.ndarray, labels) -> np.ndarray:
    """1-based whole-graph rank of every node under :func:`rank_order`."""
    order = rank_order(scores, labels)
    out = np.empty(len(order), dtype=np.int64)
    out[order] = np.arange(1, len(order) + 1)
    return out


def top_k(vector: CentralityVector, labels, k: int) -> np.ndarray:
    return rank_order(vector.scores, labels)[:k]


class RankRow(NamedTuple):
    author_id: str
    author_name: str
    degree: float
    degree_rank: int
    betweenness: float
    betweenness_rank: int
    closeness: float
    closeness_rank: int
    pagerank: float
    pagerank_rank: int


@dataclass(frozen=True)
class RankTable:
    rows: list[RankRow]
    sort_measure: str
    k: int

    def to_csv(self) -> str:
        """Display CSV: scores in 3-significant-digit scientific notation."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RankRow._fields)
        for r in self.rows:
            w.writerow([
                r.author_id, r.author_name,
                _fmt_degree(r.degree), r.degree_rank,
                f"{r.betweenness:.2E}", r.betweenness_rank,
                f"{r.closeness:.2E}", r.closeness_rank,
                f"{r.pagerank:.2E}", r.pagerank_rank,
            ])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"sort_measure": self.sort_measure, "k": self.k,
               "rows": [r._asdict() for r in self.rows]}
        return json.dumps(doc, indent=2) + "\n"


def _fmt_degree(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.2E}"


def rank_table(g: CoauthorGraph, vectors: Mapping[str, CentralityVector], sort_measure: str,
               k: int, names: Mapping[str, str] | None = None) -> RankTable:
    """Top-``k`` authors under ``sort_measure`` with every measure's value and rank.

    Ranks are positions over the whole graph, not within the top-k window.
    """
    if sort_measure not in MEASURES:
        raise ValueError(f"sort_measure must be one of {MEASURES}")
    if k < 1:
        raise ValueError("k must be >= 1")
    missing = [m for m in MEASURES if m not in vectors]
    if missing:
        raise ValueError(f"missing centrality vectors: {missing}")
    n = g.node_count
    for m in MEASURES:
        if len(vectors[m].scores) != n:
            raise ValueError(f"{m} vector has {len(vectors[m].scores)} scores for {n} nodes")
    names = names or {}
    labels = g.labels
    all_ranks = {m: ranks(vectors[m].scores, labels) for m in MEASURES}
    rows = []
    for v in top_k(vectors[sort_measure], labels, k):
        cells = []
        for m in MEASURES:
            cells += [float(vectors[m].scores[v]), int(all_ranks[m][v])]
        rows.append(RankRow(labels[v], names.get(labels[v], ""), *cells))
    return RankTable(rows, sort_measure, len(rows))


def ego_network(g: CoauthorGraph, vector: CentralityVector, k: int) -> CoauthorGraph:
    """Top-``k`` authors under ``vector`` plus their coauthors, as an induced subgraph.

    The result carries a boolean ``top_k`` node-data column marking the seeds.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(vector.scores) != g.node_count:
        raise ValueError("vector does not belong to this graph")
    seeds = top_k(vector, g.labels, k)
    flag = np.zeros(g.node_count, dtype=bool)
    flag[seeds] = True
    closure = neighborhood_closure(g, seeds)
    return induced_subgraph(g.with_node_data(top_k=flag), closure)


class AffiliationRow(NamedTuple):
    affiliation_id: str
    affiliation_name: str
    author_id: str
    publication_count: int


@dataclass(frozen=True)
class AffiliationReport:
    rows: list[AffiliationRow]

    def totals(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rows:
            out[r.affiliation_id] = out.get(r.affiliation_id, 0) + r.publication_count
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(AffiliationRow._fields + ("affiliation_total",))
        totals = self.totals()
        for r in self.rows:
            w.writerow([*r, totals[r.affiliation_id]])
        return buf.getvalue()


def affiliation_report(index: AffiliationIndex, authors: Iterable[str],
                       names: Mapping[str, str] | None = None) -> AffiliationReport:
    """Publications of ``authors`` grouped by affiliation.

    Affiliations are ordered by total publications (descending, then id);
    members within an affiliation by count (descending, then author id).
    ``names`` overrides the index's affiliation display names.
    """
    wanted = set(authors)
    display = dict(index.names)
    if names:
        display.update(names)
    groups: dict[str, list[tuple[str, int]]] = defaultdict(list)
    for (author, aff), count in index.entries.items():
        if author in wanted:
            groups[aff].append((author, count))
    totals = {aff: sum(c for _, c in members) for aff, members in groups.items()}
    rows = []
    for aff in sorted(groups, key=lambda a: (-totals[a], a)):
        for author, count in sorted(groups[aff], key=lambda t: (-t[1], t[0])):
            rows.append(AffiliationRow(aff, display.get(aff, ""), author, count))
    return AffiliationReport(rows)
