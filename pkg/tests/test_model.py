"""Parameter records, angular geometry, and both connection probability forms."""

import math

import numpy as np
import pytest

from hypbench.model import (
    BipartiteParams,
    LabelParams,
    Placements,
    UnipartiteParams,
    angular_distance,
    connection_probability_bipartite,
    connection_probability_bipartite_h2,
    connection_probability_h2,
    connection_probability_s1,
    to_hyperbolic,
    to_hyperbolic_bipartite,
)


def test_unipartite_params_derived_constants():
    p = UnipartiteParams(n_nodes=100, gamma=2.5, mean_degree=5.0, beta=2.0)
    assert p.radius == pytest.approx(100 / (2 * math.pi), rel=1e-14)
    # coupling constant beta*sin(pi/beta)/(2*pi*mean_degree)
    assert p.mu == pytest.approx(2 * math.sin(math.pi / 2) / (2 * math.pi * 5), rel=1e-14)
    assert p.kappa_min == pytest.approx((0.5 / 1.5) * 5.0, rel=1e-14)


def test_coupling_constant_reference_value():
    # beta=3, mean degree 30: 3*sin(pi/3)/(60*pi)
    p = UnipartiteParams(n_nodes=5000, gamma=2.5, mean_degree=30.0, beta=3.0)
    assert p.mu == pytest.approx(0.013783222385544804, rel=1e-12)


@pytest.mark.parametrize("kwargs", [
    dict(n_nodes=0, gamma=2.5, mean_degree=5.0, beta=2.0),
    dict(n_nodes=10, gamma=2.0, mean_degree=5.0, beta=2.0),
    dict(n_nodes=10, gamma=2.5, mean_degree=0.0, beta=2.0),
    dict(n_nodes=10, gamma=2.5, mean_degree=5.0, beta=1.0),
    dict(n_nodes=10, gamma=float("nan"), mean_degree=5.0, beta=2.0),
])
def test_unipartite_params_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        UnipartiteParams(**kwargs)


def test_bipartite_params_feature_degree_identity():
    p = BipartiteParams(n_nodes=5000, n_features=2000, gamma_n=2.1, gamma_f=3.5,
                        mean_node_degree=3.0, beta_b=1.1)
    assert p.mean_feature_degree == pytest.approx(7.5, abs=0.0)
    assert p.radius == pytest.approx(5000 / (2 * math.pi), rel=1e-14)


def test_label_params_validation():
    LabelParams(n_labels=2, alpha=0.0)
    with pytest.raises(ValueError):
        LabelParams(n_labels=1, alpha=1.0)
    with pytest.raises(ValueError):
        LabelParams(n_labels=3, alpha=float("inf"))


def test_placements_validation():
    Placements(kappa=np.array([1.0, 2.0]), theta=np.array([0.0, 3.0]))
    with pytest.raises(ValueError):
        Placements(kappa=np.array([1.0, -2.0]), theta=np.array([0.0, 3.0]))
    with pytest.raises(ValueError):
        Placements(kappa=np.array([1.0]), theta=np.array([0.0, 3.0]))
    with pytest.raises(ValueError):
        Placements(kappa=np.array([1.0, 2.0]), theta=np.array([0.0, 7.0]))


def test_angular_distance_basic():
    assert angular_distance(0.0, math.pi) == pytest.approx(math.pi)
    assert angular_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2, rel=1e-12)
    assert angular_distance(1.0, 1.0) == 0.0
    a = np.array([0.0, 1.0, 4.0])
    b = np.array([6.0, 1.5, 0.5])
    d = angular_distance(a, b)
    assert np.all(d >= 0) and np.all(d <= math.pi)
    assert np.allclose(d, angular_distance(b, a))


def test_connection_probability_hand_value():
    # N=100, mean degree 5, beta=2: mu = 1/(5*pi), so for kappa=2, kappa'=3,
    # dtheta=0.1 the argument is chi = 25/6 and p = 36/661
    params = UnipartiteParams(n_nodes=100, gamma=2.5, mean_degree=5.0, beta=2.0)
    p = connection_probability_s1(2.0, 3.0, 0.1, params)
    assert p == pytest.approx(36.0 / 661.0, rel=1e-13)


def test_connection_probability_half_at_unit_argument():
    params = UnipartiteParams(n_nodes=100, gamma=2.5, mean_degree=5.0, beta=2.5)
    dtheta = params.mu * 4.0 * 5.0 / params.radius
    assert connection_probability_s1(4.0, 5.0, dtheta, params) == pytest.approx(0.5, rel=1e-12)


def test_connection_probability_zero_distance_is_one():
    params = UnipartiteParams(n_nodes=100, gamma=2.5, mean_degree=5.0, beta=2.0)
    assert connection_probability_s1(2.0, 2.0, 0.0, params) == 1.0
    r = to_hyperbolic(np.array([2.0, 2.0]), params)
    assert connection_probability_h2(r[0], r[1], 0.0, params) == 1.0


def test_extreme_arguments_stay_finite_and_clamped():
    params = UnipartiteParams(n_nodes=10**6, gamma=2.5, mean_degree=2.0, beta=8.0)
    # chi**beta overflows float64 here; the probability must flush to exactly 0
    p_far = connection_probability_s1(1e-30, 1e-30, math.pi, params)
    assert p_far == 0.0
    p_near = connection_probability_s1(1e8, 1e8, 1e-300, params)
    assert p_near == 1.0
    grid = connection_probability_s1(
        np.full(4, 2.0), np.full(4, 2.0), np.array([0.0, 1e-12, 1.0, math.pi]), params)
    assert np.all((grid >= 0.0) & (grid <= 1.0))
    assert not np.any(np.isnan(grid))


def test_circle_and_disk_forms_agree():
    rng = np.random.default_rng(5)
    params = UnipartiteParams(n_nodes=2000, gamma=2.5, mean_degree=8.0, beta=2.3)
    kappa_a = params.kappa_min * (1 - rng.random(2000)) ** (-1 / 1.5)
    kappa_b = params.kappa_min * (1 - rng.random(2000)) ** (-1 / 1.5)
    dtheta = rng.random(2000) * math.pi
    p_circle = connection_probability_s1(kappa_a, kappa_b, dtheta, params)
    r_a = to_hyperbolic(kappa_a, params)
    r_b = to_hyperbolic(kappa_b, params)
    p_disk = connection_probability_h2(r_a, r_b, dtheta, params)
    assert np.max(np.abs(p_circle - p_disk)) <= 1e-9


def test_bipartite_forms_agree():
    rng = np.random.default_rng(6)
    params = BipartiteParams(n_nodes=2000, n_features=500, gamma_n=2.5, gamma_f=3.0,
                             mean_node_degree=4.0, beta_b=1.8)
    kn = params.kappa_n_min * (1 - rng.random(1000)) ** (-1 / 1.5)
    kf = params.kappa_f_min * (1 - rng.random(1000)) ** (-1 / 2.0)
    dtheta = rng.random(1000) * math.pi
    p_circle = connection_probability_bipartite(kn, kf, dtheta, params)
    rn = to_hyperbolic_bipartite(kn, "node", params)
    rf = to_hyperbolic_bipartite(kf, "feature", params)
    p_disk = connection_probability_bipartite_h2(rn, rf, dtheta, params)
    assert np.max(np.abs(p_circle - p_disk)) <= 1e-9


def test_to_hyperbolic_reference_point():
    params = UnipartiteParams(n_nodes=100, gamma=2.5, mean_degree=5.0, beta=2.0)
    assert to_hyperbolic(np.array([params.kappa_min]), params)[0] == pytest.approx(
        params.disk_radius, rel=1e-12)
    with pytest.raises(ValueError):
        to_hyperbolic(np.array([params.kappa_min * 0.5]), params)
    with pytest.raises(ValueError):
        to_hyperbolic_bipartite(np.array([0.01]), "sideways",
                                BipartiteParams(n_nodes=10, n_features=5, gamma_n=2.5,
                                                gamma_f=2.5, mean_node_degree=2.0,
                                                beta_b=2.0))
