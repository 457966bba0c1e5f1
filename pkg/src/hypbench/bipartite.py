"""Node-feature graph generation by independent pair trials.

Each (node, feature) pair is tested independently with the bipartite
gravity-law probability. Row u of the keyed stream carries the draws for
node u against every feature, in feature order, so the result is
independent of evaluation order and worker partitioning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .model import BipartiteParams, Placements
from .sampling import SeedSpec


@dataclass(frozen=True)
class BipartiteEdgeSet:
    """Node-feature incidences as a sorted (node, feature) pair array."""

    n_nodes: int
    n_features: int
    edges: np.ndarray

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges[:, 0].min() < 0 or edges[:, 0].max() >= self.n_nodes:
                raise ValueError("node index out of range")
            if edges[:, 1].min() < 0 or edges[:, 1].max() >= self.n_features:
                raise ValueError("feature index out of range")
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            if not np.array_equal(order, np.arange(len(edges))):
                raise ValueError("edges must be sorted lexicographically")
            if len(np.unique(edges[:, 0] * self.n_features + edges[:, 1])) != len(edges):
                raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", edges)

    def __len__(self) -> int:
        return len(self.edges)

    def node_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.n_nodes)

    def feature_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 1], minlength=self.n_features)


def generate_bipartite(node_placements: Placements, feature_placements: Placements,
                       params: BipartiteParams, stream: SeedSpec) -> BipartiteEdgeSet:
    """Draw the node-feature graph for the given placements."""
    if len(node_placements) != params.n_nodes:
        raise ValueError(
            f"expected {params.n_nodes} node placements, got {len(node_placements)}"
        )
    if len(feature_placements) != params.n_features:
        raise ValueError(
            f"expected {params.n_features} feature placements, got {len(feature_placements)}"
        )
    kn, tn = node_placements.kappa, node_placements.theta
    kf, tf = feature_placements.kappa, feature_placements.theta
    scale = params.radius / params.mu_b
    n_feat = params.n_features
    rows = []
    cols = []
    for u in range(params.n_nodes):
        d = np.abs(tf - tn[u])
        np.minimum(d, 2.0 * np.pi - d, out=d)
        chi = d * (scale / kn[u]) / kf
        with np.errstate(over="ignore"):
            p = 1.0 / (1.0 + chi**params.beta_b)
        hit = stream.row_generator(u).random(n_feat) < p
        (picked,) = np.nonzero(hit)
        if picked.size:
            rows.append(np.full(picked.size, u, dtype=np.int64))
            cols.append(picked)
    if rows:
        edges = np.column_stack([np.concatenate(rows), np.concatenate(cols)])
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    return BipartiteEdgeSet(n_nodes=params.n_nodes, n_features=params.n_features, edges=edges)


def feature_matrix_view(edges: BipartiteEdgeSet) -> sparse.csr_matrix:
    """Sparse binary node-by-feature incidence matrix."""
    data = np.ones(len(edges), dtype=np.int8)
    return sparse.csr_matrix(
        (data, (edges.edges[:, 0], edges.edges[:, 1])),
        shape=(edges.n_nodes, edges.n_features),
    )
