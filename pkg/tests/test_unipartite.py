"""Node-graph generation and expected degrees."""

import numpy as np
import pytest

from hypbench.calibration import adjust_hidden_degrees
from hypbench.model import Placements, UnipartiteParams, angular_distance, connection_probability_s1
from hypbench.sampling import SeedSpec, sample_angles, sample_power_law_kappas
from hypbench.unipartite import EdgeSet, expected_degree, generate_unipartite


def _placements(n, params, seed=13):
    spec = SeedSpec(seed, "uni", 0, "unipartite-placement")
    kappa = sample_power_law_kappas(n, params.gamma, params.mean_degree, spec)
    return Placements(kappa=kappa, theta=sample_angles(n, spec))


def test_edge_set_validation():
    EdgeSet(n_nodes=4, edges=np.array([[0, 1], [0, 2], [2, 3]]))
    EdgeSet(n_nodes=4, edges=np.empty((0, 2), dtype=np.int64))
    with pytest.raises(ValueError):
        EdgeSet(n_nodes=4, edges=np.array([[1, 0]]))
    with pytest.raises(ValueError):
        EdgeSet(n_nodes=4, edges=np.array([[0, 1], [0, 1]]))
    with pytest.raises(ValueError):
        EdgeSet(n_nodes=4, edges=np.array([[0, 2], [0, 1]]))
    with pytest.raises(ValueError):
        EdgeSet(n_nodes=4, edges=np.array([[0, 4]]))


def test_edge_set_degrees():
    es = EdgeSet(n_nodes=4, edges=np.array([[0, 1], [0, 2], [2, 3]]))
    assert np.array_equal(es.degrees(), [2, 1, 2, 1])
    assert len(es) == 3


def test_generation_is_deterministic():
    params = UnipartiteParams(n_nodes=250, gamma=2.6, mean_degree=6.0, beta=1.8)
    placements = _placements(250, params)
    spec = SeedSpec(13, "uni", 0, "unipartite-edges")
    e1 = generate_unipartite(placements, params, spec)
    e2 = generate_unipartite(placements, params, spec)
    assert np.array_equal(e1.edges, e2.edges)
    other = generate_unipartite(placements, params,
                                SeedSpec(14, "uni", 0, "unipartite-edges"))
    assert not np.array_equal(e1.edges, other.edges)


def test_rows_are_independent_of_generation_order():
    """Row u's draws can be reproduced standalone, so partial or out-of-order
    evaluation yields the same edges."""
    params = UnipartiteParams(n_nodes=120, gamma=2.6, mean_degree=5.0, beta=2.0)
    placements = _placements(120, params)
    spec = SeedSpec(13, "uni", 0, "unipartite-edges")
    edges = generate_unipartite(placements, params, spec)
    for u in (0, 7, 58):
        d = angular_distance(placements.theta[u], placements.theta[u + 1:])
        p = connection_probability_s1(placements.kappa[u], placements.kappa[u + 1:],
                                      d, params)
        hits = spec.row_generator(u).random(120 - 1 - u) < p
        expected_partners = np.nonzero(hits)[0] + u + 1
        actual_partners = edges.edges[edges.edges[:, 0] == u, 1]
        assert np.array_equal(actual_partners, expected_partners)


def test_placement_count_must_match_params():
    params = UnipartiteParams(n_nodes=50, gamma=2.6, mean_degree=5.0, beta=2.0)
    placements = _placements(49, UnipartiteParams(n_nodes=49, gamma=2.6,
                                                  mean_degree=5.0, beta=2.0))
    with pytest.raises(ValueError):
        generate_unipartite(placements, params, SeedSpec(0, "x", 0, "unipartite-edges"))


def test_expected_degree_at_fixed_angle():
    params = UnipartiteParams(n_nodes=100, gamma=2.5, mean_degree=5.0, beta=2.0)
    placements = Placements(kappa=np.array([2.0, 3.0, 4.0]),
                            theta=np.array([0.0, 0.1, 1.0]))
    manual = sum(
        float(connection_probability_s1(5.0, placements.kappa[j],
                                        angular_distance(0.05, placements.theta[j]),
                                        params))
        for j in range(3))
    assert expected_degree(5.0, placements, params, theta=0.05) == pytest.approx(
        manual, rel=1e-12)


def test_expected_degree_edge_cases():
    params = UnipartiteParams(n_nodes=100, gamma=2.5, mean_degree=5.0, beta=2.0)
    empty = Placements(kappa=np.empty(0), theta=np.empty(0))
    assert expected_degree(3.0, empty, params) == 0.0
    single = Placements(kappa=np.array([2.0]), theta=np.array([1.5]))
    assert expected_degree(3.0, single, params, theta=1.5) == 1.0


def test_expected_degree_marginal_form():
    # without an angle the marginalized value must sit near the average of
    # the fixed-angle values over uniformly placed probes
    params = UnipartiteParams(n_nodes=200, gamma=2.5, mean_degree=5.0, beta=2.0)
    placements = _placements(200, params)
    marginal = expected_degree(4.0, placements, params)
    probes = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    averaged = np.mean([expected_degree(4.0, placements, params, theta=t) for t in probes])
    assert marginal == pytest.approx(averaged, rel=1e-3)


def test_realized_mean_degree_tracks_target():
    params = UnipartiteParams(n_nodes=800, gamma=2.7, mean_degree=8.0, beta=2.0)
    spec = SeedSpec(21, "meandeg", 0, "unipartite-placement")
    raw = sample_power_law_kappas(800, 2.7, 8.0, spec)
    adjusted, _ = adjust_hidden_degrees(raw, params)
    placements = Placements(kappa=adjusted, theta=sample_angles(800, spec))
    edges = generate_unipartite(placements, params,
                                SeedSpec(21, "meandeg", 0, "unipartite-edges"))
    realized = 2 * len(edges) / 800
    assert realized == pytest.approx(8.0, rel=0.12)


def test_isolated_nodes_are_kept():
    params = UnipartiteParams(n_nodes=30, gamma=2.5, mean_degree=1.5, beta=3.0)
    placements = _placements(30, params)
    edges = generate_unipartite(placements, params,
                                SeedSpec(13, "uni", 0, "unipartite-edges"))
    assert edges.n_nodes == 30
    assert edges.degrees().shape == (30,)
