"""Graph export to GraphML, DOT and edge CSV."""

from __future__ import annotations

import csv
import io
import os
from typing import Mapping
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .graph import CoauthorGraph, build_graph

FORMATS = ("graphml", "dot", "edge_csv")
GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def _columns(g: CoauthorGraph, annotations: Mapping[str, object] | None) -> dict[str, np.ndarray]:
    cols = dict(g.node_data)
    for name, values in (annotations or {}).items():
        arr = np.asarray(getattr(values, "scores", values))
        if arr.shape != (g.node_count,):
            raise ValueError(f"annotation {name!r} has {arr.shape} values for {g.node_count} nodes")
        cols[name] = arr
    if "label" in cols:
        raise ValueError("'label' is reserved for the author id")
    return cols


def _graphml_type(arr: np.ndarray) -> str:
    if arr.dtype == bool:
        return "boolean"
    if np.issubdtype(arr.dtype, np.integer):
        return "long"
    if np.issubdtype(arr.dtype, np.floating):
        return "double"
    return "string"


def _value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def to_graphml(g: CoauthorGraph, annotations=None) -> str:
    cols = _columns(g, annotations)
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    out.write(f'<graphml xmlns="{GRAPHML_NS}" '
              'xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" '
              f'xsi:schemaLocation="{GRAPHML_NS} {GRAPHML_NS}/1.0/graphml.xsd">\n')
    out.write('  <key id="label" for="node" attr.name="label" attr.type="string"/>\n')
    keys = {}
    for i, (name, arr) in enumerate(cols.items()):
        keys[name] = f"d{i}"
        out.write(f'  <key id="d{i}" for="node" attr.name={quoteattr(name)} '
                  f'attr.type="{_graphml_type(arr)}"/>\n')
    out.write('  <key id="weight" for="edge" attr.name="weight" attr.type="long"/>\n')
    out.write('  <graph id="G" edgedefault="undirected">\n')
    for v in range(g.node_count):
        out.write(f'    <node id="n{v}">\n')
        out.write(f'      <data key="label">{escape(g.labels[v])}</data>\n')
        for name, arr in cols.items():
            out.write(f'      <data key="{keys[name]}">{escape(_value(arr[v]))}</data>\n')
        out.write('    </node>\n')
    for u, v, w in g.edge_array():
        out.write(f'    <edge source="n{u}" target="n{v}">'
                  f'<data key="weight">{w}</data></edge>\n')
    out.write('  </graph>\n</graphml>\n')
    return out.getvalue()


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(g: CoauthorGraph, annotations=None) -> str:
    cols = _columns(g, annotations)
    out = io.StringIO()
    out.write("graph coauthorship {\n")
    for v in range(g.node_count):
        attrs = [f"label={_dot_id(g.labels[v])}"]
        attrs += [f"{_dot_id(name)}={_dot_id(_value(arr[v]))}" for name, arr in cols.items()]
        out.write(f"  n{v} [{', '.join(attrs)}];\n")
    for u, v, w in g.edge_array():
        out.write(f"  n{u} -- n{v} [weight={w}];\n")
    out.write("}\n")
    return out.getvalue()


def to_edge_csv(g: CoauthorGraph) -> str:
    """``source,target,weight`` rows; an isolated node is a row with empty target."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["source", "target", "weight"])
    has_edge = g.degrees > 0
    for v in range(g.node_count):
        if not has_edge[v]:
            w.writerow([g.labels[v], "", ""])
    for u, v, wt in g.edge_array():
        w.writerow([g.labels[u], g.labels[v], int(wt)])
    return buf.getvalue()


def read_edge_csv(stream) -> CoauthorGraph:
    """Inverse of :func:`to_edge_csv` (node order may differ; the graph is isomorphic)."""
    nodes, pairs = [], []
    for row in csv.DictReader(stream):
        src, dst = row["source"], row["target"]
        if not dst:
            nodes.append(src)
            continue
        pairs.extend([(src, dst)] * int(row["weight"] or 1))
    return build_graph(pairs, nodes=nodes)


def export_graph(g: CoauthorGraph, format: str = "graphml", annotations=None,
                 sink: str | os.PathLike | None = None) -> bytes:
    """Serialize ``g`` to UTF-8 bytes, optionally writing them to ``sink``.

    ``annotations`` maps column names to per-node values (arrays or
    :class:`~coauthnet.centrality.CentralityVector`); they become node
    attributes together with any ``node_data`` already on the graph. The
    edge CSV format carries structure only.
    """
    if format == "graphml":
        text = to_graphml(g, annotations)
    elif format == "dot":
        text = to_dot(g, annotations)
    elif format == "edge_csv":
        text = to_edge_csv(g)
    else:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    data = text.encode("utf-8")
    if sink is not None:
        with open(sink, "wb") as f:
            f.write(data)
    return data
