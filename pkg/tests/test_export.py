import io
import xml.etree.ElementTree as ET

import networkx as nx
import numpy as np
import pytest

import oracles
from conftest import clique_edges, int_graph
from coauthnet.centrality import compute_all
from coauthnet.export import GRAPHML_NS, export_graph, read_edge_csv, to_dot, to_edge_csv
from coauthnet.graph import build_graph


def test_dot_triangle(triangle):
    assert to_dot(triangle) == (
        "graph coauthorship {\n"
        '  n0 [label="0"];\n'
        '  n1 [label="1"];\n'
        '  n2 [label="2"];\n'
        "  n0 -- n1 [weight=1];\n"
        "  n0 -- n2 [weight=1];\n"
        "  n1 -- n2 [weight=1];\n"
        "}\n"
    )


def test_dot_escapes_quotes():
    g = build_graph([('a"b', "c")])
    assert 'label="a\\"b"' in to_dot(g)


def test_edge_csv_layout():
    g = build_graph([("a", "b"), ("a", "b")], nodes=["z"])
    assert to_edge_csv(g) == "source,target,weight\nz,,\na,b,2\n"


@pytest.mark.parametrize("seed", range(3))
def test_edge_csv_round_trip(seed):
    n = 40
    edges = oracles.er_edges(n, 0.08, seed)
    pairs = edges + edges[: len(edges) // 3]
    g = int_graph(n, pairs)
    back = read_edge_csv(io.StringIO(to_edge_csv(g)))
    assert set(back.labels) == set(g.labels)
    got = {frozenset((back.labels[u], back.labels[v])): w for u, v, w in back.edges()}
    want = {frozenset((g.labels[u], g.labels[v])): w for u, v, w in g.edges()}
    assert got == want


def test_graphml_well_formed_with_annotations():
    g = int_graph(4, clique_edges(range(3)) + [(2, 3), (2, 3)])
    vecs = compute_all(g)
    data = export_graph(g.with_node_data(top_k=np.array([1, 0, 1, 0], bool)), "graphml",
                        {"pagerank": vecs["pagerank"], "community": np.array([0, 0, 0, 1])})
    root = ET.fromstring(data)
    ns = {"g": GRAPHML_NS}
    assert len(root.findall(".//g:node", ns)) == 4
    assert len(root.findall(".//g:edge", ns)) == 4
    G = nx.read_graphml(io.BytesIO(data))
    assert G.number_of_nodes() == 4 and G.number_of_edges() == 4
    assert G.nodes["n0"]["label"] == "0"
    assert G.nodes["n0"]["top_k"] is True
    assert G.nodes["n3"]["community"] == 1
    assert G.nodes["n2"]["pagerank"] == vecs["pagerank"].scores[2]
    assert G.edges["n2", "n3"]["weight"] == 2


def test_graphml_escapes_labels():
    data = export_graph(build_graph([("<a&b>", "c")]), "graphml")
    G = nx.read_graphml(io.BytesIO(data))
    assert G.nodes["n0"]["label"] == "<a&b>"


def test_export_writes_sink(tmp_path, triangle):
    path = tmp_path / "t.dot"
    data = export_graph(triangle, "dot", sink=path)
    assert path.read_bytes() == data


def test_export_rejects_unknown_format_and_bad_annotation(triangle):
    with pytest.raises(ValueError):
        export_graph(triangle, "gexf")
    with pytest.raises(ValueError):
        export_graph(triangle, "dot", {"x": [1, 2]})
    with pytest.raises(ValueError):
        export_graph(triangle, "dot", {"label": [1, 2, 3]})


def test_export_empty_graph():
    g = build_graph([])
    assert to_dot(g) == "graph coauthorship {\n}\n"
    assert nx.read_graphml(io.BytesIO(export_graph(g))).number_of_nodes() == 0
