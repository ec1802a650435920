import networkx as nx
import numpy as np
import pytest
from sklearn.base import clone

import oracles
from conftest import clique_edges, int_graph, path_edges
from coauthnet.centrality import (
    BetweennessCentrality,
    CentralityVector,
    ClosenessCentrality,
    DegreeCentrality,
    PageRank,
    betweenness_centrality,
    closeness_centrality,
    compute_all,
    degree_centrality,
    distance_profile,
    pagerank,
)
from coauthnet.exceptions import ConvergenceError
from coauthnet.graph import relabel

ER_CASES = [(n, p, seed) for n, p in [(12, 0.3), (25, 0.1), (30, 0.3), (40, 0.6)] for seed in range(3)]


def er_graph(n, p, seed):
    edges = oracles.er_edges(n, p, seed)
    return int_graph(n, edges), edges


def test_degree_counts_distinct_neighbors():
    g = int_graph(3, [(0, 1), (0, 1), (1, 2)])
    v = degree_centrality(g)
    assert v.scores.tolist() == [1.0, 2.0, 1.0]
    assert v.params == {"mode": "raw"}


def test_betweenness_p3(p3):
    assert betweenness_centrality(p3).scores.tolist() == [0.0, 1.0, 0.0]
    assert betweenness_centrality(p3, normalized=True).scores.tolist() == [0.0, 1.0, 0.0]


def test_betweenness_star_center():
    g = int_graph(5, [(0, i) for i in range(1, 5)])
    assert betweenness_centrality(g).scores[0] == 6.0


def test_betweenness_ignores_weights():
    light = int_graph(4, path_edges(4))
    heavy = int_graph(4, path_edges(4) * 3)
    np.testing.assert_array_equal(betweenness_centrality(light).scores,
                                  betweenness_centrality(heavy).scores)


@pytest.mark.parametrize("n,p,seed", ER_CASES)
def test_betweenness_matches_pair_oracle(n, p, seed):
    g, edges = er_graph(n, p, seed)
    expect = oracles.betweenness(oracles.adjacency(n, edges))
    np.testing.assert_allclose(betweenness_centrality(g).scores, expect, rtol=0, atol=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_betweenness_matches_path_enumeration(seed):
    n = 9
    g, edges = er_graph(n, 0.4, seed)
    expect = oracles.enumerate_paths_betweenness(oracles.adjacency(n, edges))
    np.testing.assert_allclose(betweenness_centrality(g).scores, expect, atol=1e-9)


@pytest.mark.parametrize("seed", range(3))
def test_betweenness_cross_check_networkx(seed):
    g, edges = er_graph(30, 0.15, seed)
    G = nx.Graph()
    G.add_nodes_from(range(30))
    G.add_edges_from(edges)
    ref = nx.betweenness_centrality(G, normalized=False)
    np.testing.assert_allclose(betweenness_centrality(g).scores, [ref[v] for v in range(30)],
                               atol=1e-9)


def test_betweenness_normalization_scopes():
    # P3 plus two isolated nodes
    g = int_graph(5, path_edges(3))
    graph_scope = betweenness_centrality(g, normalized=True, scope="graph").scores
    comp_scope = betweenness_centrality(g, normalized=True, scope="component").scores
    assert graph_scope[1] == pytest.approx(1.0 / 6.0)
    assert comp_scope[1] == 1.0
    assert comp_scope[3] == comp_scope[4] == 0.0


def test_betweenness_small_n_normalized_is_zero():
    g = int_graph(2, [(0, 1)])
    assert betweenness_centrality(g, normalized=True).scores.tolist() == [0.0, 0.0]


def test_betweenness_bad_scope(p3):
    with pytest.raises(ValueError):
        betweenness_centrality(p3, scope="global")


@pytest.mark.parametrize("mode", ["component_scaled", "harmonic"])
@pytest.mark.parametrize("n,p,seed", ER_CASES)
def test_closeness_matches_oracle(mode, n, p, seed):
    g, edges = er_graph(n, p, seed)
    expect = oracles.closeness(oracles.adjacency(n, edges), mode)
    np.testing.assert_allclose(closeness_centrality(g, mode).scores, expect, rtol=0, atol=1e-12)


def test_closeness_p3_values(p3):
    s = closeness_centrality(p3).scores
    np.testing.assert_allclose(s, [2 / 3, 1.0, 2 / 3])
    h = closeness_centrality(p3, "harmonic").scores
    np.testing.assert_allclose(h, [0.75, 1.0, 0.75])


def test_closeness_isolated_and_tiny():
    g = int_graph(4, [(0, 1)])
    assert closeness_centrality(g).scores[2] == 0.0
    assert closeness_centrality(int_graph(1, [])).scores.tolist() == [0.0]


def test_closeness_cross_check_networkx():
    g, edges = er_graph(35, 0.08, 7)
    G = nx.Graph()
    G.add_nodes_from(range(35))
    G.add_edges_from(edges)
    ref = nx.closeness_centrality(G, wf_improved=True)
    np.testing.assert_allclose(closeness_centrality(g).scores, [ref[v] for v in range(35)],
                               atol=1e-12)


def test_pagerank_cycle_is_uniform():
    g = int_graph(5, path_edges(5) + [(4, 0)])
    np.testing.assert_allclose(pagerank(g).scores, 0.2, atol=1e-12)


def test_pagerank_p3_against_dense(p3):
    expect = oracles.dense_pagerank(3, path_edges(3))
    np.testing.assert_allclose(pagerank(p3).scores, expect, atol=1e-5)
    np.testing.assert_allclose(pagerank(p3).scores, [0.25676, 0.48649, 0.25676], atol=1e-5)


@pytest.mark.parametrize("seed", range(5))
def test_pagerank_sums_to_one_with_dangling(seed):
    n = 40
    edges = oracles.er_edges(n - 2, 0.05, seed)  # last two nodes stay isolated
    g = int_graph(n, edges)
    s = pagerank(g).scores
    assert abs(s.sum() - 1.0) <= 1e-9
    np.testing.assert_allclose(s, oracles.dense_pagerank(n, edges), atol=1e-7)


def test_pagerank_records_iterations(p3):
    v = pagerank(p3)
    assert 1 <= v.params["iterations"] <= 200
    assert v.params["damping"] == 0.85


def test_pagerank_non_convergence_carries_iterate():
    g = int_graph(6, path_edges(6))
    with pytest.raises(ConvergenceError) as exc:
        pagerank(g, max_iter=1)
    err = exc.value
    assert err.iterations == 1 and err.residual > 1e-9
    assert err.scores.shape == (6,)


@pytest.mark.parametrize("bad", [{"damping": 1.0}, {"damping": 0.0}, {"tol": 0}, {"max_iter": 0}])
def test_pagerank_rejects_bad_params(p3, bad):
    with pytest.raises(ValueError):
        pagerank(p3, **bad)


def test_empty_graph_all_measures():
    g = int_graph(0, [])
    for vec in compute_all(g).values():
        assert vec.scores.shape == (0,)


@pytest.mark.parametrize("seed", range(3))
def test_permutation_equivariance(seed):
    n = 30
    g, _ = er_graph(n, 0.15, seed)
    perm = np.random.default_rng(seed).permutation(n)
    h = relabel(g, perm)
    a, b = compute_all(g), compute_all(h)
    for m in a:
        np.testing.assert_allclose(b[m].scores[perm], a[m].scores, atol=1e-12)


def test_results_identical_across_thread_counts():
    edges = oracles.gnm_edges(600, 1500, 3)
    runs = [compute_all(int_graph(600, edges), n_jobs=j) for j in (1, 2, 8)]
    for other in runs[1:]:
        for m in runs[0]:
            np.testing.assert_array_equal(runs[0][m].scores, other[m].scores)


def test_cached_profile_equals_fresh_bfs():
    edges = oracles.gnm_edges(200, 300, 1)
    g = int_graph(200, edges)
    betweenness_centrality(g)
    cached = distance_profile(g)
    fresh = distance_profile(int_graph(200, edges), np.arange(200))
    for a, b in zip(cached, fresh):
        np.testing.assert_array_equal(a, b)


def test_distance_profile_subset_eccentricity(p5):
    dsum, reach, _, ecc = distance_profile(p5, [0, 2])
    assert dsum.tolist() == [10, 6]
    assert reach.tolist() == [4, 4]
    assert ecc.tolist() == [4, 2]


def test_vector_json_round_trip():
    g = int_graph(4, clique_edges(range(3)))
    v = closeness_centrality(g)
    back = CentralityVector.from_json(v.to_json(g.labels), g.labels)
    np.testing.assert_array_equal(back.scores, v.scores)
    assert back.params == v.params


def test_vector_json_label_mismatch():
    g = int_graph(3, path_edges(3))
    text = degree_centrality(g).to_json(g.labels)
    with pytest.raises(ValueError):
        CentralityVector.from_json(text, ["0", "1", "2", "3"])


def test_vector_csv_header_and_precision(p3):
    text = closeness_centrality(p3).to_csv(p3.labels)
    lines = text.splitlines()
    assert lines[0] == "author_id,score"
    assert float(lines[1].split(",")[1]) == 2 / 3


def test_estimators_fit_transform_and_clone(p3):
    est = BetweennessCentrality(normalized=True)
    assert est.fit_transform(p3).tolist() == [0.0, 1.0, 0.0]
    assert est.n_nodes_ == 3
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "scores_")
    for cls in (DegreeCentrality, ClosenessCentrality, PageRank):
        assert cls().fit(p3).scores_.shape == (3,)


def test_estimator_accepts_adjacency_matrix():
    A = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    np.testing.assert_allclose(ClosenessCentrality().fit_transform(A), [2 / 3, 1.0, 2 / 3])


def test_estimator_transform_before_fit(p3):
    from sklearn.exceptions import NotFittedError
    with pytest.raises(NotFittedError):
        PageRank().transform(p3)
