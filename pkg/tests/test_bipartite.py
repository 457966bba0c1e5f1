"""Node-feature graph generation."""

import numpy as np
import pytest

from hypbench.bipartite import BipartiteEdgeSet, feature_matrix_view, generate_bipartite
from hypbench.calibration import adjust_hidden_degrees_bipartite
from hypbench.model import (
    BipartiteParams,
    Placements,
    angular_distance,
    connection_probability_bipartite,
)
from hypbench.sampling import SeedSpec, sample_angles, sample_power_law_kappas


def _both_placements(params, seed=17):
    spec = SeedSpec(seed, "bip", 0, "bipartite-placement")
    kn = sample_power_law_kappas(params.n_nodes, params.gamma_n,
                                 params.mean_node_degree, spec, substream="nodes")
    kf = sample_power_law_kappas(params.n_features, params.gamma_f,
                                 params.mean_feature_degree, spec, substream="features")
    theta_n = sample_angles(params.n_nodes, spec, substream="nodes")
    theta_f = sample_angles(params.n_features, spec, substream="features")
    return (Placements(kappa=kn, theta=theta_n), Placements(kappa=kf, theta=theta_f))


def test_edge_set_validation():
    BipartiteEdgeSet(n_nodes=3, n_features=2, edges=np.array([[0, 0], [0, 1], [2, 1]]))
    with pytest.raises(ValueError):
        BipartiteEdgeSet(n_nodes=3, n_features=2, edges=np.array([[0, 2]]))
    with pytest.raises(ValueError):
        BipartiteEdgeSet(n_nodes=3, n_features=2, edges=np.array([[3, 0]]))
    with pytest.raises(ValueError):
        BipartiteEdgeSet(n_nodes=3, n_features=2, edges=np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        BipartiteEdgeSet(n_nodes=3, n_features=2, edges=np.array([[1, 1], [1, 1]]))


def test_degree_accessors():
    es = BipartiteEdgeSet(n_nodes=3, n_features=2,
                          edges=np.array([[0, 0], [0, 1], [2, 1]]))
    assert np.array_equal(es.node_degrees(), [2, 0, 1])
    assert np.array_equal(es.feature_degrees(), [1, 2])


def test_generation_deterministic_and_row_addressable():
    params = BipartiteParams(n_nodes=150, n_features=60, gamma_n=2.6, gamma_f=2.8,
                             mean_node_degree=4.0, beta_b=2.0)
    nodes, feats = _both_placements(params)
    spec = SeedSpec(17, "bip", 0, "bipartite-edges")
    e1 = generate_bipartite(nodes, feats, params, spec)
    e2 = generate_bipartite(nodes, feats, params, spec)
    assert np.array_equal(e1.edges, e2.edges)
    for u in (0, 42, 149):
        d = angular_distance(nodes.theta[u], feats.theta)
        p = connection_probability_bipartite(nodes.kappa[u], feats.kappa, d, params)
        hits = spec.row_generator(u).random(60) < p
        actual = e1.edges[e1.edges[:, 0] == u, 1]
        assert np.array_equal(actual, np.nonzero(hits)[0])


def test_zero_degree_features_are_kept():
    params = BipartiteParams(n_nodes=40, n_features=30, gamma_n=2.5, gamma_f=2.5,
                             mean_node_degree=1.0, beta_b=3.0)
    nodes, feats = _both_placements(params)
    edges = generate_bipartite(nodes, feats, params,
                               SeedSpec(17, "bip", 0, "bipartite-edges"))
    assert edges.feature_degrees().shape == (30,)
    assert edges.node_degrees().shape == (40,)


def test_feature_matrix_view():
    es = BipartiteEdgeSet(n_nodes=3, n_features=2,
                          edges=np.array([[0, 0], [0, 1], [2, 1]]))
    m = feature_matrix_view(es)
    assert m.shape == (3, 2)
    assert m.nnz == 3
    dense = m.toarray()
    assert np.array_equal(dense, [[1, 1], [0, 0], [0, 1]])


def test_realized_means_track_both_targets():
    params = BipartiteParams(n_nodes=500, n_features=200, gamma_n=2.7, gamma_f=2.7,
                             mean_node_degree=5.0, beta_b=2.0)
    spec = SeedSpec(23, "bipmean", 0, "bipartite-placement")
    kn = sample_power_law_kappas(500, 2.7, 5.0, spec, substream="nodes")
    kf = sample_power_law_kappas(200, 2.7, params.mean_feature_degree, spec,
                                 substream="features")
    an, af, _ = adjust_hidden_degrees_bipartite(kn, kf, params)
    nodes = Placements(kappa=an, theta=sample_angles(500, spec, substream="nodes"))
    feats = Placements(kappa=af, theta=sample_angles(200, spec, substream="features"))
    edges = generate_bipartite(nodes, feats, params,
                               SeedSpec(23, "bipmean", 0, "bipartite-edges"))
    mean_node = len(edges) / 500
    mean_feat = len(edges) / 200
    assert mean_node == pytest.approx(5.0, rel=0.12)
    # the feature-side target is fixed by the shared edge count:
    # (N_n / N_f) * mean_node_degree
    assert params.mean_feature_degree == 12.5
    assert mean_feat == pytest.approx(12.5, rel=0.12)


def test_placement_counts_must_match():
    params = BipartiteParams(n_nodes=50, n_features=20, gamma_n=2.5, gamma_f=2.5,
                             mean_node_degree=3.0, beta_b=2.0)
    nodes, feats = _both_placements(params)
    short = Placements(kappa=nodes.kappa[:-1], theta=nodes.theta[:-1])
    with pytest.raises(ValueError):
        generate_bipartite(short, feats, params, SeedSpec(0, "x", 0, "bipartite-edges"))
