"""Node-graph generation by independent pair trials.

Every unordered node pair is connected independently with the gravity-law
probability. The uniform draw for pair (u, v) is draw (v-u-1) of row u's
keyed stream, so results never depend on evaluation order or partitioning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calibration import mean_pair_probability
from .model import Placements, UnipartiteParams, angular_distance, connection_probability_s1
from .sampling import SeedSpec


@dataclass(frozen=True)
class EdgeSet:
    """Undirected simple graph as a sorted (u, v) pair array with u < v."""

    n_nodes: int
    edges: np.ndarray

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.n_nodes:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise ValueError("edges must satisfy u < v")
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            if not np.array_equal(order, np.arange(len(edges))):
                raise ValueError("edges must be sorted lexicographically")
            if len(np.unique(edges[:, 0] * self.n_nodes + edges[:, 1])) != len(edges):
                raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", edges)

    def __len__(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n_nodes)


def generate_unipartite(placements: Placements, params: UnipartiteParams,
                        stream: SeedSpec) -> EdgeSet:
    """Draw the node graph for the given placements.

    Probabilities use the parameter record's coupling constant; hidden-degree
    adjustment, when wanted, happens before this call (see calibration).
    """
    n = params.n_nodes
    if len(placements) != n:
        raise ValueError(f"expected {n} placements, got {len(placements)}")
    kappa, theta = placements.kappa, placements.theta
    scale = params.radius / params.mu
    rows = []
    cols = []
    for u in range(n - 1):
        others = theta[u + 1:]
        d = np.abs(others - theta[u])
        np.minimum(d, 2.0 * np.pi - d, out=d)
        chi = d * (scale / kappa[u]) / kappa[u + 1:]
        # chi**beta overflows to inf for remote pairs; that is exactly p = 0
        with np.errstate(over="ignore"):
            p = 1.0 / (1.0 + chi**params.beta)
        hit = stream.row_generator(u).random(n - 1 - u) < p
        (picked,) = np.nonzero(hit)
        if picked.size:
            rows.append(np.full(picked.size, u, dtype=np.int64))
            cols.append(picked + (u + 1))
    if rows:
        edges = np.column_stack([np.concatenate(rows), np.concatenate(cols)])
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    return EdgeSet(n_nodes=n, edges=edges)


def expected_degree(kappa: float, placements: Placements, params: UnipartiteParams,
                    theta: float | None = None) -> float:
    """Expected degree of a node with hidden degree kappa against placements.

    With a theta, sums the exact pair probabilities at the realized angular
    distances. Without one, marginalizes over a uniform angular position
    (closed form). Sums over every placement given; callers exclude the node
    itself by passing the others.
    """
    if len(placements) == 0:
        return 0.0
    if theta is None:
        probs = mean_pair_probability(
            kappa * placements.kappa, params.mu, params.beta, params.radius
        )
    else:
        d = angular_distance(theta, placements.theta)
        probs = connection_probability_s1(kappa, placements.kappa, d, params)
    return float(np.sum(probs))
