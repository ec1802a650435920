"""Bibliographic record parsing, filtering and coauthorship projection."""

from __future__ import annotations

import csv
import io
import logging
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import ConfigError
from .graph import CoauthorGraph, build_graph

log = logging.getLogger(__name__)

FIELDS = ("paper_id", "author_id", "author_name", "affiliation_id", "affiliation_name",
          "year", "field_id")
YEAR_RANGE = (1000, 3000)
AUTHOR_CAP = 200


@dataclass(frozen=True, slots=True)
class PaperRecord:
    paper_id: str
    author_id: str
    author_name: str = ""
    affiliation_id: str = ""
    affiliation_name: str = ""
    year: int = 2000
    field_id: str = ""


def _resolve_schema(header: Sequence[str], schema: Mapping[str, str] | None) -> dict[str, int]:
    mapping = {f: f for f in FIELDS}
    if schema:
        unknown = set(schema) - set(FIELDS)
        if unknown:
            raise ConfigError(f"unknown schema fields: {sorted(unknown)}")
        mapping.update(schema)
    positions = {name.strip(): i for i, name in enumerate(header)}
    missing = [f"{f} -> {col!r}" for f, col in mapping.items() if col not in positions]
    if missing:
        raise ConfigError(f"input header lacks mapped columns: {', '.join(missing)}")
    return {f: positions[col] for f, col in mapping.items()}


def parse_records(stream, schema: Mapping[str, str] | None = None,
                  delimiter: str = "\t") -> tuple[list[PaperRecord], int]:
    """Read delimiter-separated rows with a header into :class:`PaperRecord` objects.

    ``schema`` maps logical field names to header names (identity by default).
    Rows with the wrong number of cells, an empty paper or author id, or a
    year that is not an integer in [1000, 3000] are skipped.

    Returns ``(records, skipped_row_count)``.
    """
    reader = csv.reader(stream, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise ConfigError("input has no header row") from None
    cols = _resolve_schema(header, schema)
    width = len(header)
    records = []
    skipped = 0
    for row in reader:
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != width:
            skipped += 1
            continue
        get = {f: row[i].strip() for f, i in cols.items()}
        try:
            year = int(get["year"])
        except ValueError:
            skipped += 1
            continue
        if not get["paper_id"] or not get["author_id"] or not (YEAR_RANGE[0] <= year <= YEAR_RANGE[1]):
            skipped += 1
            continue
        get["year"] = year
        records.append(PaperRecord(**get))
    if skipped:
        log.info("skipped %d malformed row(s)", skipped)
    return records, skipped


def read_records(paths: Sequence[str | os.PathLike], schema=None, delimiter="\t",
                 n_jobs: int | None = None) -> tuple[list[PaperRecord], int]:
    """Parse several files (concurrently if ``n_jobs > 1``) and concatenate in path order."""

    def one(path):
        with open(path, encoding="utf-8", newline="") as f:
            return parse_records(f, schema, delimiter)

    if (n_jobs or 1) > 1 and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(one, paths))
    else:
        results = [one(p) for p in paths]
    records = [r for recs, _ in results for r in recs]
    return records, sum(s for _, s in results)


def filter_records(records: Iterable[PaperRecord], year_min: int, year_max: int,
                   field_id: str | None = None) -> list[PaperRecord]:
    if year_min > year_max:
        raise ValueError(f"year_min ({year_min}) > year_max ({year_max})")
    return [
        r for r in records
        if year_min <= r.year <= year_max and (field_id is None or r.field_id == field_id)
    ]


def paper_authors(records: Iterable[PaperRecord]) -> dict[str, list[str]]:
    """Distinct authors of each paper, in first-listed order."""
    papers: dict[str, dict[str, None]] = defaultdict(dict)
    for r in records:
        papers[r.paper_id][r.author_id] = None
    return {p: list(a) for p, a in papers.items()}


def project_coauthorship(records: Iterable[PaperRecord], author_cap: int | None = AUTHOR_CAP,
                         capped: list | None = None) -> CoauthorGraph:
    """Clique-expand each paper's distinct authors into weighted coauthor edges.

    Every author becomes a node, numbered in ascending author-id order so the
    result does not depend on record order. Papers with more than
    ``author_cap`` authors are logged and contribute nodes but no edges; their
    ids are appended to ``capped`` when a list is supplied.
    """
    papers = paper_authors(records)
    authors = sorted({a for names in papers.values() for a in names})

    def pairs():
        for pid in sorted(papers):
            names = papers[pid]
            if author_cap is not None and len(names) > author_cap:
                log.warning("paper %s has %d authors (cap %d); clique expansion skipped",
                            pid, len(names), author_cap)
                if capped is not None:
                    capped.append(pid)
                continue
            yield from combinations(names, 2)

    return build_graph(pairs(), nodes=authors)


@dataclass
class AffiliationIndex:
    """Distinct-paper publication counts per (author, affiliation)."""

    entries: dict[tuple[str, str], int] = field(default_factory=dict)
    names: dict[str, str] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["author_id", "affiliation_id", "affiliation_name", "publications"])
        for (author, aff) in sorted(self.entries):
            w.writerow([author, aff, self.names.get(aff, ""), self.entries[(author, aff)]])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, stream) -> "AffiliationIndex":
        idx = cls()
        for row in csv.DictReader(stream):
            idx.entries[(row["author_id"], row["affiliation_id"])] = int(row["publications"])
            if row["affiliation_name"]:
                idx.names[row["affiliation_id"]] = row["affiliation_name"]
        return idx


def build_affiliation_index(records: Iterable[PaperRecord]) -> AffiliationIndex:
    papers: dict[tuple[str, str], set[str]] = defaultdict(set)
    names: dict[str, str] = {}
    for r in records:
        if not r.affiliation_id:
            continue
        papers[(r.author_id, r.affiliation_id)].add(r.paper_id)
        if r.affiliation_name and r.affiliation_id not in names:
            names[r.affiliation_id] = r.affiliation_name
    return AffiliationIndex({k: len(v) for k, v in papers.items()}, names)


def author_names(records: Iterable[PaperRecord]) -> dict[str, str]:
    """First non-empty display name seen for each author id."""
    names: dict[str, str] = {}
    for r in records:
        if r.author_name and r.author_id not in names:
            names[r.author_id] = r.author_name
    return names


class CoauthorshipProjector(TransformerMixin, BaseEstimator):
    """Records -> coauthorship graph, with optional year/field filtering.

    After ``fit_transform`` the ``capped_papers_`` attribute lists papers
    whose clique expansion was skipped.
    """

    def __init__(self, author_cap=AUTHOR_CAP, year_min=None, year_max=None, field_id=None):
        self.author_cap = author_cap
        self.year_min = year_min
        self.year_max = year_max
        self.field_id = field_id

    def fit(self, X, y=None):
        if self.author_cap is not None and self.author_cap < 2:
            raise ValueError("author_cap must be at least 2")
        return self

    def transform(self, X) -> CoauthorGraph:
        records = list(X)
        if self.year_min is not None or self.year_max is not None or self.field_id is not None:
            lo = YEAR_RANGE[0] if self.year_min is None else self.year_min
            hi = YEAR_RANGE[1] if self.year_max is None else self.year_max
            records = filter_records(records, lo, hi, self.field_id)
        self.capped_papers_ = []
        self.n_records_ = len(records)
        return project_coauthorship(records, self.author_cap, self.capped_papers_)
