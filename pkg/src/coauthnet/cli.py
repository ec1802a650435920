"""``coauthnet`` command line: ingest -> graph -> metrics -> reports.

Every subcommand reads and writes files under one output directory::

    graph.tsv  authors.csv  affiliations.csv  ingest.json      (ingest)
    centrality/<measure>.csv|.json                             (centrality)
    communities/partition.csv  communities/summary.json        (communities)
    summary.json  summary.csv                                  (stats)
    rank/by_<measure>.csv|.json                                (rank)
    ego/<measure>/...                                          (ego)
    manifest.json                                              (every stage)

Settings come from built-in defaults, then a config file (``--config`` or
``$COAUTHNET_CONFIG``), then command-line flags; later layers win.

Exit codes: 0 success, 1 usage/config error, 2 input I/O or parse failure,
3 PageRank non-convergence.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .centrality import MEASURES, CentralityVector, compute_all
from .community import Partition, detect_communities
from .exceptions import ConfigError, ConvergenceError
from .export import export_graph
from .graph import CoauthorGraph, format_edgelist, read_edgelist
from .ingest import (
    AUTHOR_CAP,
    FIELDS,
    AffiliationIndex,
    author_names,
    build_affiliation_index,
    filter_records,
    project_coauthorship,
    read_records,
)
from .report import affiliation_report, ego_network, rank_table
from .stats import EXACT_THRESHOLD, SAMPLE_SOURCES, summarize

log = logging.getLogger("coauthnet")

CONFIG_ENV = "COAUTHNET_CONFIG"
EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CONVERGENCE = 0, 1, 2, 3


class InputError(Exception):
    """Missing or unreadable stage input (exit code 2)."""


@dataclass
class RunConfig:
    inputs: list[str] = field(default_factory=list)
    schema: dict[str, str] = field(default_factory=dict)
    delimiter: str = "\t"
    graph: str | None = None
    year_min: int | None = None
    year_max: int | None = None
    field_id: str | None = None
    author_cap: int = AUTHOR_CAP
    closeness_mode: str = "component_scaled"
    betweenness_normalized: bool = False
    betweenness_scope: str = "graph"
    damping: float = 0.85
    tol: float = 1e-9
    max_iter: int = 200
    seed: int = 0
    resolution: float = 1.0
    top_k: int = 10
    exact_threshold: int = EXACT_THRESHOLD
    sample_sources: int = SAMPLE_SOURCES
    clustering_exclude_deg1: bool = False
    threads: int = 1
    out: str = "coauthnet-out"

    def validate(self) -> "RunConfig":
        if self.year_min is not None and self.year_max is not None and self.year_min > self.year_max:
            raise ConfigError("year_min must not exceed year_max")
        if self.author_cap < 2:
            raise ConfigError("author_cap must be >= 2")
        if self.closeness_mode not in ("component_scaled", "harmonic"):
            raise ConfigError(f"unknown closeness mode {self.closeness_mode!r}")
        if self.betweenness_scope not in ("graph", "component"):
            raise ConfigError(f"unknown betweenness scope {self.betweenness_scope!r}")
        if not 0.0 < self.damping < 1.0:
            raise ConfigError("damping must lie in (0, 1)")
        if self.tol <= 0 or self.max_iter < 1:
            raise ConfigError("tol must be > 0 and max_iter >= 1")
        if self.resolution <= 0:
            raise ConfigError("resolution must be > 0")
        if self.top_k < 1 or self.sample_sources < 1 or self.threads < 1:
            raise ConfigError("top_k, sample_sources and threads must be >= 1")
        unknown = set(self.schema) - set(FIELDS)
        if unknown:
            raise ConfigError(f"unknown schema fields: {sorted(unknown)}")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    if kind == "bool":
        low = raw.lower()
        if low not in ("1", "0", "true", "false", "yes", "no", "on", "off"):
            raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
        return low in ("1", "true", "yes", "on")
    if kind.startswith("int"):
        if kind.endswith("None") and raw.lower() in ("", "none"):
            return None
        return int(raw)
    if kind == "float":
        return float(raw)
    if kind.startswith("list"):
        return [p.strip() for p in raw.replace("\n", ",").split(",") if p.strip()]
    if kind.startswith("str | None") and raw.lower() in ("", "none"):
        return None
    if key == "delimiter":
        return raw.encode().decode("unicode_escape")
    return raw


def load_config_file(path: str | os.PathLike) -> dict:
    """Read an INI file: keys of ``[coauthnet]`` mirror long flag names
    (underscores), ``[schema]`` maps logical fields to header names."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_file(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"bad config file {path}: {exc}") from exc
    values: dict = {}
    if parser.has_section("coauthnet"):
        for key, raw in parser.items("coauthnet"):
            if key not in _FIELD_TYPES or key == "schema":
                raise ConfigError(f"unknown config key {key!r} in {path}")
            try:
                values[key] = _coerce(key, raw)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from exc
    if parser.has_section("schema"):
        values["schema"] = dict(parser.items("schema"))
    return values


# -- file helpers -------------------------------------------------------------


def atomic_write(path: Path, data: str | bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = data.encode("utf-8") if isinstance(data, str) else data
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require(path: Path, hint: str) -> Path:
    if not path.is_file():
        raise InputError(f"missing input file {path} ({hint})")
    return path


def _digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class Stage:
    """Times one stage and records it in ``manifest.json`` when it finishes."""

    def __init__(self, name: str, cfg: RunConfig, inputs: list):
        self.name, self.cfg, self.inputs = name, cfg, inputs
        self.out = Path(cfg.out)
        self.outputs: list[str] = []

    def write(self, rel: str, data: str | bytes) -> None:
        atomic_write(self.out / rel, data)
        self.outputs.append(rel)

    def __enter__(self):
        self.t0 = time.perf_counter()
        log.info("stage %s: start", self.name)
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            return False
        elapsed = time.perf_counter() - self.t0
        path = self.out / "manifest.json"
        try:
            manifest = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            manifest = {}
        manifest.update({"tool": "coauthnet", "version": __version__, "config": self.cfg.to_dict()})
        digests = manifest.setdefault("inputs", {})
        for p in self.inputs:
            digests[str(p)] = _digest(p)
        manifest.setdefault("stages", {})[self.name] = {
            "wall_time_s": round(elapsed, 6),
            "outputs": self.outputs,
        }
        atomic_write(path, json.dumps(manifest, indent=2) + "\n")
        log.info("stage %s: done in %.3fs (%d files)", self.name, elapsed, len(self.outputs))
        return False


# -- stage loaders ------------------------------------------------------------


def _graph_path(cfg: RunConfig) -> Path:
    return Path(cfg.graph) if cfg.graph else Path(cfg.out) / "graph.tsv"


def load_graph(cfg: RunConfig) -> CoauthorGraph:
    path = _require(_graph_path(cfg), "run `coauthnet ingest` first or pass --graph")
    try:
        return read_edgelist(path)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_vectors(cfg: RunConfig, g: CoauthorGraph) -> dict[str, CentralityVector]:
    vectors = {}
    for m in MEASURES:
        path = _require(Path(cfg.out) / "centrality" / f"{m}.json",
                        "run `coauthnet centrality` first")
        try:
            vectors[m] = CentralityVector.from_json(path.read_text(encoding="utf-8"), g.labels)
        except (ValueError, KeyError) as exc:
            raise InputError(f"{path}: {exc}") from exc
    return vectors


def load_names(cfg: RunConfig) -> dict[str, str]:
    path = Path(cfg.out) / "authors.csv"
    if not path.is_file():
        return {}
    with open(path, encoding="utf-8", newline="") as f:
        return {row["author_id"]: row["author_name"] for row in csv.DictReader(f)}


def load_affiliations(cfg: RunConfig) -> AffiliationIndex | None:
    path = Path(cfg.out) / "affiliations.csv"
    if not path.is_file():
        return None
    with open(path, encoding="utf-8", newline="") as f:
        return AffiliationIndex.from_csv(f)


def load_partition(cfg: RunConfig, g: CoauthorGraph) -> Partition | None:
    path = Path(cfg.out) / "communities" / "summary.json"
    labels_path = Path(cfg.out) / "communities" / "partition.csv"
    if not (path.is_file() and labels_path.is_file()):
        return None
    summary = json.loads(path.read_text(encoding="utf-8"))
    with open(labels_path, encoding="utf-8", newline="") as f:
        by_author = {row["author_id"]: int(row["community_id"]) for row in csv.DictReader(f)}
    if set(by_author) != set(g.labels):
        raise InputError(f"{labels_path} does not match the graph")
    comm = np.array([by_author[lab] for lab in g.labels], dtype=np.int64)
    params = {k: summary[k] for k in ("algorithm", "resolution", "seed", "weighted") if k in summary}
    return Partition(comm, int(summary["community_count"]), float(summary["modularity"]), params)


# -- subcommands --------------------------------------------------------------


def cmd_ingest(cfg: RunConfig) -> None:
    if not cfg.inputs:
        raise ConfigError("ingest needs at least one --input file")
    for p in cfg.inputs:
        _require(Path(p), "input records")
    with Stage("ingest", cfg, cfg.inputs) as st:
        try:
            records, skipped = read_records(cfg.inputs, cfg.schema, cfg.delimiter, cfg.threads)
        except UnicodeDecodeError as exc:
            raise InputError(f"input is not valid UTF-8: {exc}") from exc
        parsed = len(records)
        if cfg.year_min is not None or cfg.year_max is not None or cfg.field_id is not None:
            records = filter_records(
                records,
                cfg.year_min if cfg.year_min is not None else -10**9,
                cfg.year_max if cfg.year_max is not None else 10**9,
                cfg.field_id,
            )
        capped: list[str] = []
        g = project_coauthorship(records, cfg.author_cap, capped)
        index = build_affiliation_index(records)
        names = author_names(records)
        st.write("graph.tsv", format_edgelist(g))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["author_id", "author_name"])
        for lab in g.labels:
            w.writerow([lab, names.get(lab, "")])
        st.write("authors.csv", buf.getvalue())
        st.write("affiliations.csv", index.to_csv())
        report = {
            "rows_parsed": parsed,
            "rows_skipped": skipped,
            "rows_kept": len(records),
            "papers": len({r.paper_id for r in records}),
            "authors": g.node_count,
            "edges": g.edge_count,
            "capped_papers": sorted(capped),
        }
        st.write("ingest.json", json.dumps(report, indent=2) + "\n")


def cmd_centrality(cfg: RunConfig) -> None:
    g = load_graph(cfg)
    with Stage("centrality", cfg, [_graph_path(cfg)]) as st:
        vectors = compute_all(
            g, betweenness_normalized=cfg.betweenness_normalized,
            betweenness_scope=cfg.betweenness_scope, closeness_mode=cfg.closeness_mode,
            damping=cfg.damping, tol=cfg.tol, max_iter=cfg.max_iter, n_jobs=cfg.threads,
        )
        for m, vec in vectors.items():
            st.write(f"centrality/{m}.csv", vec.to_csv(g.labels))
            st.write(f"centrality/{m}.json", vec.to_json(g.labels))


def cmd_communities(cfg: RunConfig) -> None:
    g = load_graph(cfg)
    with Stage("communities", cfg, [_graph_path(cfg)]) as st:
        part = detect_communities(g, cfg.resolution, cfg.seed)
        st.write("communities/partition.csv", part.to_csv(g.labels))
        st.write("communities/summary.json", part.to_json())


def _summary_kwargs(cfg: RunConfig) -> dict:
    return dict(exact_threshold=cfg.exact_threshold, sample_sources=cfg.sample_sources,
                seed=cfg.seed, exclude_low_degree=cfg.clustering_exclude_deg1, n_jobs=cfg.threads)


def cmd_stats(cfg: RunConfig) -> None:
    g = load_graph(cfg)
    with Stage("stats", cfg, [_graph_path(cfg)]) as st:
        summary = summarize(g, load_partition(cfg, g), **_summary_kwargs(cfg))
        if summary.degenerate:
            log.warning("graph has no connected node pair; summary is degenerate")
        st.write("summary.json", summary.to_json())
        st.write("summary.csv", summary.to_csv())


def cmd_rank(cfg: RunConfig) -> None:
    g = load_graph(cfg)
    vectors = load_vectors(cfg, g)
    with Stage("rank", cfg, [_graph_path(cfg)]) as st:
        names = load_names(cfg)
        for m in MEASURES:
            table = rank_table(g, vectors, m, cfg.top_k, names)
            st.write(f"rank/by_{m}.csv", table.to_csv())
            st.write(f"rank/by_{m}.json", table.to_json())


def cmd_ego(cfg: RunConfig) -> None:
    g = load_graph(cfg)
    vectors = load_vectors(cfg, g)
    index = load_affiliations(cfg)
    with Stage("ego", cfg, [_graph_path(cfg)]) as st:
        for m in MEASURES:
            ego = ego_network(g, vectors[m], cfg.top_k)
            parent = [g.index_of(lab) for lab in ego.labels]
            part = detect_communities(ego, cfg.resolution, cfg.seed)
            notes = {name: vec.scores[parent] for name, vec in vectors.items()}
            notes["community"] = part.community_of
            base = f"ego/{m}"
            st.write(f"{base}/graph.graphml", export_graph(ego, "graphml", notes))
            st.write(f"{base}/graph.dot", export_graph(ego, "dot", notes))
            st.write(f"{base}/edges.csv", export_graph(ego, "edge_csv"))
            summary = summarize(ego, part, **_summary_kwargs(cfg))
            st.write(f"{base}/summary.json", summary.to_json())
            st.write(f"{base}/summary.csv", summary.to_csv())
            if index is not None:
                seeds = [lab for lab, flag in zip(ego.labels, ego.node_data["top_k"]) if flag]
                st.write(f"{base}/affiliations.csv", affiliation_report(index, seeds).to_csv())


def cmd_pipeline(cfg: RunConfig) -> None:
    if cfg.inputs:
        cmd_ingest(cfg)
    elif not cfg.graph:
        raise ConfigError("pipeline needs --input record files or --graph")
    cmd_centrality(cfg)
    cmd_communities(cfg)
    cmd_stats(cfg)
    cmd_rank(cfg)
    cmd_ego(cfg)


COMMANDS = {
    "ingest": (cmd_ingest, "parse records and project the coauthorship graph"),
    "stats": (cmd_stats, "whole-network statistics (diameter, clustering, ...)"),
    "centrality": (cmd_centrality, "degree, betweenness, closeness and PageRank"),
    "communities": (cmd_communities, "Louvain community detection"),
    "rank": (cmd_rank, "top-k cross-measure rank tables"),
    "ego": (cmd_ego, "top-k ego networks with exports and summaries"),
    "pipeline": (cmd_pipeline, "run every stage in order"),
}


# -- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _schema_item(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected FIELD=COLUMN")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def _options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    g = p.add_argument_group("input")
    g.add_argument("--config", help=f"INI config file (default: ${CONFIG_ENV})")
    g.add_argument("-i", "--input", dest="inputs", action="append", default=S,
                   help="record file (repeatable)")
    g.add_argument("--col", dest="schema", action="append", type=_schema_item, default=S,
                   metavar="FIELD=COLUMN", help=f"map a logical field ({', '.join(FIELDS)}) to a header")
    g.add_argument("--delimiter", default=S, help="field delimiter (default: TAB)")
    g.add_argument("--graph", default=S, help="pre-projected edge list instead of OUT/graph.tsv")
    g.add_argument("--year-min", type=int, default=S)
    g.add_argument("--year-max", type=int, default=S)
    g.add_argument("--field-id", default=S)
    g.add_argument("--author-cap", type=int, default=S,
                   help=f"skip clique expansion above this many authors (default {AUTHOR_CAP})")
    g = p.add_argument_group("metrics")
    g.add_argument("--closeness-mode", choices=["component_scaled", "harmonic"], default=S)
    g.add_argument("--betweenness-normalized", action="store_true", default=S)
    g.add_argument("--betweenness-scope", choices=["graph", "component"], default=S)
    g.add_argument("--damping", type=float, default=S)
    g.add_argument("--tol", type=float, default=S)
    g.add_argument("--max-iter", type=int, default=S)
    g.add_argument("--seed", type=int, default=S)
    g.add_argument("--resolution", type=float, default=S)
    g.add_argument("-k", "--top-k", type=int, default=S)
    g.add_argument("--exact-threshold", type=int, default=S)
    g.add_argument("--sample-sources", type=int, default=S)
    g.add_argument("--clustering-exclude-deg1", action="store_true", default=S)
    g = p.add_argument_group("run")
    g.add_argument("-o", "--out", default=S, help="output directory")
    g.add_argument("--threads", type=int, default=S, help="worker threads (default 1)")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coauthnet", description="Coauthorship network analytics.")
    parser.add_argument("--version", action="version", version=f"coauthnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _options()
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values: dict = {}
    cfg_path = getattr(ns, "config", None) or os.environ.get(CONFIG_ENV)
    if cfg_path:
        values.update(load_config_file(cfg_path))
    for f in dataclasses.fields(RunConfig):
        if hasattr(ns, f.name):
            v = getattr(ns, f.name)
            if f.name == "schema":
                v = {**values.get("schema", {}), **dict(v)}
            elif f.name == "delimiter":
                v = v.encode().decode("unicode_escape")
            values[f.name] = v
    return RunConfig(**values).validate()


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(ns, "verbose", False) else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(ns)
        COMMANDS[ns.command][0](cfg)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except ConvergenceError as exc:
        log.error("%s", exc)
        return EXIT_CONVERGENCE
    except (InputError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
