"""Geometric kernel for circle-embedded random graphs.

Parameter records with their derived constants, angular geometry, and the
connection probability in both its similarity-space form (hidden degree kappa,
angle theta) and the equivalent hyperbolic-disk form (radial coordinate r).
All functions accept scalars or numpy arrays and are free of shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

# exp() saturates double precision near +-745; beyond this the logistic is 0 or 1
_EXP_CUTOFF = 700.0


def _coupling(beta: float, mean_degree: float) -> float:
    """Coupling constant that fixes the average degree in the large-N limit."""
    return beta * math.sin(math.pi / beta) / (TWO_PI * mean_degree)


def _degree_floor(gamma: float, mean_degree: float) -> float:
    """Lower cutoff of the power-law hidden-degree density for a given mean."""
    return (gamma - 2.0) / (gamma - 1.0) * mean_degree


@dataclass(frozen=True)
class UnipartiteParams:
    """Validated parameters of the node graph, with derived constants.

    Derived values are computed once at construction because they sit in the
    pair-probability inner loops.
    """

    n_nodes: int
    gamma: float
    mean_degree: float
    beta: float
    mu: float = field(init=False)
    radius: float = field(init=False)
    kappa_min: float = field(init=False)
    disk_radius: float = field(init=False)

    def __post_init__(self) -> None:
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 2:
            raise ValueError(f"n_nodes must be an integer >= 2, got {self.n_nodes}")
        if not (self.gamma > 2.0):
            raise ValueError(
                f"gamma must be > 2 (power-law degree floor is undefined otherwise), got {self.gamma}"
            )
        if not (self.beta > 1.0):
            raise ValueError(
                f"beta must be > 1 (the coupling constant is undefined otherwise), got {self.beta}"
            )
        if not (self.mean_degree > 0.0):
            raise ValueError(f"mean_degree must be positive, got {self.mean_degree}")
        object.__setattr__(self, "n_nodes", int(self.n_nodes))
        object.__setattr__(self, "mu", _coupling(self.beta, self.mean_degree))
        object.__setattr__(self, "radius", self.n_nodes / TWO_PI)
        object.__setattr__(self, "kappa_min", _degree_floor(self.gamma, self.mean_degree))
        object.__setattr__(
            self,
            "disk_radius",
            2.0 * math.log(2.0 * self.radius / (self.mu * self.kappa_min**2)),
        )


@dataclass(frozen=True)
class BipartiteParams:
    """Validated parameters of the node-feature graph, with derived constants.

    The circle radius is set by the node count alone; features live on the
    same circle. The mean feature degree follows from edge counting:
    n_features * mean_feature_degree == n_nodes * mean_node_degree.
    """

    n_nodes: int
    n_features: int
    gamma_n: float
    gamma_f: float
    mean_node_degree: float
    beta_b: float
    mu_b: float = field(init=False)
    radius: float = field(init=False)
    mean_feature_degree: float = field(init=False)
    kappa_n_min: float = field(init=False)
    kappa_f_min: float = field(init=False)
    bipartite_disk_radius: float = field(init=False)

    def __post_init__(self) -> None:
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 2:
            raise ValueError(f"n_nodes must be an integer >= 2, got {self.n_nodes}")
        if int(self.n_features) != self.n_features or self.n_features < 1:
            raise ValueError(f"n_features must be a positive integer, got {self.n_features}")
        for name, value in (("gamma_n", self.gamma_n), ("gamma_f", self.gamma_f)):
            if not (value > 2.0):
                raise ValueError(
                    f"{name} must be > 2 (power-law degree floor is undefined otherwise), got {value}"
                )
        if not (self.beta_b > 1.0):
            raise ValueError(
                f"beta_b must be > 1 (the coupling constant is undefined otherwise), got {self.beta_b}"
            )
        if not (self.mean_node_degree > 0.0):
            raise ValueError(f"mean_node_degree must be positive, got {self.mean_node_degree}")
        object.__setattr__(self, "n_nodes", int(self.n_nodes))
        object.__setattr__(self, "n_features", int(self.n_features))
        object.__setattr__(self, "mu_b", _coupling(self.beta_b, self.mean_node_degree))
        object.__setattr__(self, "radius", self.n_nodes / TWO_PI)
        object.__setattr__(
            self, "mean_feature_degree", self.n_nodes / self.n_features * self.mean_node_degree
        )
        object.__setattr__(self, "kappa_n_min", _degree_floor(self.gamma_n, self.mean_node_degree))
        object.__setattr__(
            self, "kappa_f_min", _degree_floor(self.gamma_f, self.mean_feature_degree)
        )
        object.__setattr__(
            self,
            "bipartite_disk_radius",
            2.0 * math.log(2.0 * self.radius / (self.mu_b * self.kappa_n_min * self.kappa_f_min)),
        )


@dataclass(frozen=True)
class LabelParams:
    """Label-assignment parameters: class count and homophily strength."""

    n_labels: int
    alpha: float

    def __post_init__(self) -> None:
        if int(self.n_labels) != self.n_labels or self.n_labels < 2:
            raise ValueError(f"n_labels must be an integer >= 2, got {self.n_labels}")
        if not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha}")
        object.__setattr__(self, "n_labels", int(self.n_labels))


@dataclass(frozen=True)
class Placements:
    """Per-entity hidden degrees and angular coordinates, as parallel arrays."""

    kappa: np.ndarray
    theta: np.ndarray

    def __post_init__(self) -> None:
        kappa = np.asarray(self.kappa, dtype=np.float64)
        theta = np.asarray(self.theta, dtype=np.float64)
        if kappa.ndim != 1 or theta.ndim != 1 or kappa.size != theta.size:
            raise ValueError("kappa and theta must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(kappa)) and np.all(np.isfinite(theta))):
            raise ValueError("placements must be finite")
        if np.any(kappa <= 0.0):
            raise ValueError("hidden degrees must be positive")
        if np.any(theta < 0.0) or np.any(theta >= TWO_PI):
            raise ValueError("angles must lie in [0, 2*pi)")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "theta", theta)

    def __len__(self) -> int:
        return self.kappa.size


def _as_float_array(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def _scalar_or_array(result: np.ndarray, scalar: bool):
    return float(result) if scalar else result


def angular_distance(theta_a, theta_b):
    """Shorter arc angle between two circle positions, in [0, pi].

    Inputs outside [0, 2*pi) are reduced modulo 2*pi first.
    """
    a = _as_float_array(theta_a, "theta_a")
    b = _as_float_array(theta_b, "theta_b")
    scalar = a.ndim == 0 and b.ndim == 0
    diff = np.abs(np.mod(a, TWO_PI) - np.mod(b, TWO_PI))
    result = np.pi - np.abs(np.pi - diff)
    return _scalar_or_array(result, scalar)


def _logistic_from_log_chi(log_chi: np.ndarray, beta: float) -> np.ndarray:
    """1/(1 + chi**beta) evaluated from ln(chi), safe across the double range."""
    z = beta * log_chi
    out = np.empty_like(z)
    hi = z > _EXP_CUTOFF
    lo = z < -_EXP_CUTOFF
    mid = ~(hi | lo)
    out[hi] = 0.0
    out[lo] = 1.0
    out[mid] = 1.0 / (1.0 + np.exp(z[mid]))
    return out


def _gravity_probability(effective_distance: np.ndarray, beta: float) -> np.ndarray:
    """Connection probability 1/(1 + d**beta) with d = R*dtheta/(mu*k*k')."""
    d = np.asarray(effective_distance, dtype=np.float64)
    out = np.ones(d.shape, dtype=np.float64)
    pos = d > 0.0
    out[pos] = _logistic_from_log_chi(np.log(d[pos]), beta)
    return np.clip(out, 0.0, 1.0)


def connection_probability_s1(kappa_a, kappa_b, delta_theta, params: UnipartiteParams):
    """Pair connection probability in the similarity-space form.

    Exactly 1 at delta_theta == 0.
    """
    ka = _as_float_array(kappa_a, "kappa_a")
    kb = _as_float_array(kappa_b, "kappa_b")
    dt = _as_float_array(delta_theta, "delta_theta")
    scalar = ka.ndim == 0 and kb.ndim == 0 and dt.ndim == 0
    chi = params.radius * dt / (params.mu * ka * kb)
    return _scalar_or_array(_gravity_probability(chi, params.beta), scalar)


def connection_probability_bipartite(kappa_n, kappa_f, delta_theta, params: BipartiteParams):
    """Node-feature connection probability in the similarity-space form."""
    kn = _as_float_array(kappa_n, "kappa_n")
    kf = _as_float_array(kappa_f, "kappa_f")
    dt = _as_float_array(delta_theta, "delta_theta")
    scalar = kn.ndim == 0 and kf.ndim == 0 and dt.ndim == 0
    chi = params.radius * dt / (params.mu_b * kn * kf)
    return _scalar_or_array(_gravity_probability(chi, params.beta_b), scalar)


def radial_coordinate(kappa, kappa_ref: float, disk_radius: float):
    """Hyperbolic radius r = disk_radius - 2*ln(kappa/kappa_ref).

    The reference value kappa_ref maps to the disk boundary. Any consistent
    (kappa_ref, disk_radius) pair preserves the probability identity below.
    """
    k = _as_float_array(kappa, "kappa")
    scalar = k.ndim == 0
    if np.any(k <= 0.0):
        raise ValueError("kappa must be positive")
    return _scalar_or_array(disk_radius - 2.0 * np.log(k / kappa_ref), scalar)


def to_hyperbolic(kappa, params: UnipartiteParams):
    """Map hidden degree to hyperbolic radius inside the nominal disk."""
    k = _as_float_array(kappa, "kappa")
    if np.any(k < params.kappa_min):
        raise ValueError(f"kappa below the lower cutoff {params.kappa_min}")
    return radial_coordinate(k, params.kappa_min, params.disk_radius)


def to_hyperbolic_bipartite(kappa, side: str, params: BipartiteParams):
    """Map a node-side or feature-side hidden degree to hyperbolic radius."""
    if side == "node":
        floor = params.kappa_n_min
    elif side == "feature":
        floor = params.kappa_f_min
    else:
        raise ValueError(f"side must be 'node' or 'feature', got {side!r}")
    k = _as_float_array(kappa, "kappa")
    if np.any(k < floor):
        raise ValueError(f"kappa below the {side}-side lower cutoff {floor}")
    return radial_coordinate(k, floor, params.bipartite_disk_radius)


def _disk_probability(r_a, r_b, delta_theta, beta: float, disk_radius: float):
    ra = _as_float_array(r_a, "r_a")
    rb = _as_float_array(r_b, "r_b")
    dt = _as_float_array(delta_theta, "delta_theta")
    scalar = ra.ndim == 0 and rb.ndim == 0 and dt.ndim == 0
    ra, rb, dt = np.broadcast_arrays(ra, rb, dt)
    out = np.ones(dt.shape, dtype=np.float64)
    pos = dt > 0.0
    # x - disk_radius equals 2*ln(chi) of the similarity form, so halving the
    # exponent slope recovers the identical logistic
    x = ra[pos] + rb[pos] + 2.0 * np.log(dt[pos] / 2.0)
    out[pos] = _logistic_from_log_chi(0.5 * (x - disk_radius), beta)
    return _scalar_or_array(np.clip(out, 0.0, 1.0), scalar)


def connection_probability_h2(r_a, r_b, delta_theta, params: UnipartiteParams):
    """Pair connection probability in the hyperbolic-disk form.

    Equals connection_probability_s1 on radii produced by to_hyperbolic;
    delta_theta == 0 returns 1 by convention (the similarity form's limit).
    """
    return _disk_probability(r_a, r_b, delta_theta, params.beta, params.disk_radius)


def connection_probability_bipartite_h2(r_n, r_f, delta_theta, params: BipartiteParams):
    """Hyperbolic-disk form of the node-feature connection probability."""
    return _disk_probability(r_n, r_f, delta_theta, params.beta_b, params.bipartite_disk_radius)
