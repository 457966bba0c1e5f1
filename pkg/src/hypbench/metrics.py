"""Structural metrics for node graphs and node-feature graphs.

Conventions shared by every function here:
- clustering is defined only for entities with at least two neighbors;
  others carry NaN and are excluded from means and spectra
- two neighbors of a bipartite entity count as connected when they share
  at least one counterpart besides the entity itself (co-occurrence >= 2)
- spectra bin x logarithmically with geometric-mean bin centers and omit
  empty bins
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .bipartite import BipartiteEdgeSet, feature_matrix_view
from .sampling import SeedSpec
from .unipartite import EdgeSet

_SWAP_BATCH = 8192
_ATTEMPT_FACTOR = 100


def adjacency(edges: EdgeSet) -> sparse.csr_matrix:
    """Symmetric sparse adjacency matrix with zero diagonal."""
    u, v = edges.edges[:, 0], edges.edges[:, 1]
    data = np.ones(len(edges), dtype=np.int32)
    a = sparse.csr_matrix((data, (u, v)), shape=(edges.n_nodes, edges.n_nodes))
    return a + a.T


def homophily(edges: EdgeSet, labels: np.ndarray) -> float:
    """Mean over non-isolated nodes of the same-label neighbor fraction."""
    if len(edges) == 0:
        raise ValueError("homophily is undefined for a graph with no edges")
    labels = np.asarray(labels)
    if labels.shape != (edges.n_nodes,):
        raise ValueError("labels length must match node count")
    u, v = edges.edges[:, 0], edges.edges[:, 1]
    same = (labels[u] == labels[v]).astype(np.float64)
    deg = edges.degrees()
    num = (np.bincount(u, weights=same, minlength=edges.n_nodes)
           + np.bincount(v, weights=same, minlength=edges.n_nodes))
    connected = deg > 0
    return float(np.mean(num[connected] / deg[connected]))


def local_clustering(edges: EdgeSet) -> np.ndarray:
    """Per-node local clustering coefficient, NaN where degree < 2."""
    a = adjacency(edges)
    deg = edges.degrees().astype(np.float64)
    triangles = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        c = 2.0 * triangles / (deg * (deg - 1.0))
    c[deg < 2] = np.nan
    return c


def clustering_mean(edges: EdgeSet) -> float:
    """Mean local clustering over nodes with degree >= 2."""
    c = local_clustering(edges)
    if np.all(np.isnan(c)):
        raise ValueError("no node has degree >= 2")
    return float(np.nanmean(c))


def bipartite_local_clustering(edges: BipartiteEdgeSet, side: str) -> np.ndarray:
    """Per-entity bipartite clustering for one side, NaN where degree < 2.

    The fraction of an entity's neighbor pairs sharing at least one other
    counterpart.
    """
    if side not in ("nodes", "features"):
        raise ValueError("side must be 'nodes' or 'features'")
    b = feature_matrix_view(edges)
    mat = b if side == "nodes" else b.T.tocsr()
    dense = mat.toarray().astype(np.float32)
    cooc = dense.T @ dense
    n = mat.shape[0]
    out = np.full(n, np.nan)
    indptr, indices = mat.indptr, mat.indices
    for i in range(n):
        nbrs = indices[indptr[i]:indptr[i + 1]]
        k = nbrs.size
        if k < 2:
            continue
        sub = cooc[np.ix_(nbrs, nbrs)]
        linked = (sub >= 2.0).sum() - (np.diag(sub) >= 2.0).sum()
        out[i] = linked / (k * (k - 1.0))
    return out


def bipartite_clustering_mean(edges: BipartiteEdgeSet, side: str) -> float:
    c = bipartite_local_clustering(edges, side)
    if np.all(np.isnan(c)):
        raise ValueError(f"no entity on side '{side}' has degree >= 2")
    return float(np.nanmean(c))


def knn_values(edges: EdgeSet) -> np.ndarray:
    """Per-node mean neighbor degree, NaN for isolated nodes."""
    deg = edges.degrees().astype(np.float64)
    u, v = edges.edges[:, 0], edges.edges[:, 1]
    s = (np.bincount(u, weights=deg[v], minlength=edges.n_nodes)
         + np.bincount(v, weights=deg[u], minlength=edges.n_nodes))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = s / deg
    out[deg == 0] = np.nan
    return out


def knn_values_bipartite(edges: BipartiteEdgeSet, side: str) -> np.ndarray:
    """Per-entity mean counterpart degree for one side, NaN at degree zero."""
    dn = edges.node_degrees().astype(np.float64)
    df = edges.feature_degrees().astype(np.float64)
    u, f = edges.edges[:, 0], edges.edges[:, 1]
    if side == "nodes":
        s = np.bincount(u, weights=df[f], minlength=edges.n_nodes)
        deg = dn
    elif side == "features":
        s = np.bincount(f, weights=dn[u], minlength=edges.n_features)
        deg = df
    else:
        raise ValueError("side must be 'nodes' or 'features'")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = s / deg
    out[deg == 0] = np.nan
    return out


def exponential_binning(x: np.ndarray, y: np.ndarray,
                        base: float = 2.0) -> tuple[np.ndarray, np.ndarray]:
    """Mean of y per logarithmic x bin [base^j, base^(j+1)).

    Returns (centers, means) with geometric-mean centers base^(j+1/2);
    empty bins are omitted. Pairs with NaN y are dropped; x must be
    strictly positive.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same shape")
    if base <= 1.0:
        raise ValueError("base must exceed 1")
    keep = ~np.isnan(y)
    x, y = x[keep], y[keep]
    if x.size == 0:
        return np.empty(0), np.empty(0)
    if np.any(x <= 0):
        raise ValueError("x values must be positive")
    j = np.floor(np.log(x) / np.log(base)).astype(np.int64)
    # float log can land a boundary value in the adjacent bin; repair exactly
    j = np.where(np.power(base, (j + 1).astype(np.float64)) <= x, j + 1, j)
    j = np.where(np.power(base, j.astype(np.float64)) > x, j - 1, j)
    uniq, inv = np.unique(j, return_inverse=True)
    sums = np.bincount(inv, weights=y)
    counts = np.bincount(inv)
    centers = np.power(base, uniq + 0.5)
    return centers, sums / counts


def clustering_spectrum(edges: EdgeSet, base: float = 2.0) -> tuple[np.ndarray, np.ndarray]:
    """Mean local clustering per logarithmic degree bin."""
    c = local_clustering(edges)
    deg = edges.degrees().astype(np.float64)
    keep = deg >= 2
    return exponential_binning(deg[keep], c[keep], base)


def knn_spectrum(edges: EdgeSet, base: float = 2.0) -> tuple[np.ndarray, np.ndarray]:
    """Mean neighbor degree per logarithmic degree bin."""
    k = knn_values(edges)
    deg = edges.degrees().astype(np.float64)
    keep = deg > 0
    return exponential_binning(deg[keep], k[keep], base)


def bipartite_clustering_spectrum(edges: BipartiteEdgeSet, side: str,
                                  base: float = 2.0) -> tuple[np.ndarray, np.ndarray]:
    c = bipartite_local_clustering(edges, side)
    deg = edges.node_degrees() if side == "nodes" else edges.feature_degrees()
    keep = deg >= 2
    return exponential_binning(deg[keep].astype(np.float64), c[keep], base)


def knn_spectrum_bipartite(edges: BipartiteEdgeSet, side: str,
                           base: float = 2.0) -> tuple[np.ndarray, np.ndarray]:
    k = knn_values_bipartite(edges, side)
    deg = edges.node_degrees() if side == "nodes" else edges.feature_degrees()
    keep = deg > 0
    return exponential_binning(deg[keep].astype(np.float64), k[keep], base)


def degree_ccdf(degrees: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Observed degree values and P(K >= value), no binning."""
    degrees = np.asarray(degrees)
    if degrees.size == 0:
        raise ValueError("empty degree sequence")
    values = np.unique(degrees)
    ordered = np.sort(degrees)
    below = np.searchsorted(ordered, values, side="left")
    return values, (degrees.size - below) / degrees.size


def components(edges: EdgeSet) -> tuple[int, float]:
    """Connected component count and giant component node fraction."""
    count, assignment = csgraph.connected_components(adjacency(edges), directed=False)
    giant = np.bincount(assignment).max() / edges.n_nodes
    return int(count), float(giant)


def randomize_bipartite_cm(edges: BipartiteEdgeSet, stream: SeedSpec,
                           swaps_per_edge: int = 10) -> BipartiteEdgeSet:
    """Degree-preserving randomization by repeated edge endpoint swaps.

    Performs swaps_per_edge accepted swaps per edge, rejecting any swap that
    would create a duplicate incidence. Both degree sequences are preserved
    exactly. If the graph is too small or too constrained to reach the
    target, returns what was achieved (possibly the input unchanged) and
    emits a UserWarning.
    """
    if swaps_per_edge < 0:
        raise ValueError("swaps_per_edge must be >= 0")
    m = len(edges)
    target = swaps_per_edge * m
    if target == 0:
        return edges
    if m < 2:
        warnings.warn("graph too small for degree-preserving swaps; returned unchanged")
        return edges
    nodes = edges.edges[:, 0].copy()
    feats = edges.edges[:, 1].copy()
    present = set((edges.edges[:, 0] * edges.n_features + edges.edges[:, 1]).tolist())
    nf = edges.n_features
    gen = stream.generator("cm-swaps")
    accepted = 0
    attempts = 0
    budget = _ATTEMPT_FACTOR * target
    while accepted < target and attempts < budget:
        idx = gen.integers(0, m, size=(_SWAP_BATCH, 2))
        for i, j in idx:
            attempts += 1
            if accepted >= target or attempts > budget:
                break
            if i == j:
                continue
            u1, f1 = nodes[i], feats[i]
            u2, f2 = nodes[j], feats[j]
            if u1 == u2 or f1 == f2:
                continue
            k1 = u1 * nf + f2
            k2 = u2 * nf + f1
            if k1 in present or k2 in present:
                continue
            present.remove(u1 * nf + f1)
            present.remove(u2 * nf + f2)
            present.add(k1)
            present.add(k2)
            feats[i] = f2
            feats[j] = f1
            accepted += 1
    if accepted < target:
        warnings.warn(
            f"randomization stopped at {accepted}/{target} accepted swaps "
            "(attempt budget exhausted)"
        )
    order = np.lexsort((feats, nodes))
    out = np.column_stack([nodes[order], feats[order]])
    return BipartiteEdgeSet(n_nodes=edges.n_nodes, n_features=edges.n_features, edges=out)


@dataclass
class MetricsReport:
    """Scalar metrics plus named spectra tables, all serializable to TSV."""

    scalars: dict[str, float] = field(default_factory=dict)
    tables: dict[str, tuple[list[str], list[np.ndarray]]] = field(default_factory=dict)

    def write_tables(self, directory: str | Path) -> list[Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        written = []
        for name, (header, columns) in sorted(self.tables.items()):
            path = directory / f"{name}.tsv"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("\t".join(header) + "\n")
                for row in zip(*columns):
                    fh.write("\t".join(_format_cell(v) for v in row) + "\n")
            written.append(path)
        path = directory / "summary.tsv"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("metric\tvalue\n")
            for key in sorted(self.scalars):
                fh.write(f"{key}\t{_format_cell(self.scalars[key])}\n")
        written.append(path)
        return written


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".10g")


def compute_report(edges: EdgeSet | None = None,
                   bip_edges: BipartiteEdgeSet | None = None,
                   labels: np.ndarray | None = None,
                   base: float = 2.0) -> MetricsReport:
    """Assemble every metric computable from the inputs provided."""
    report = MetricsReport()
    if edges is not None:
        deg = edges.degrees()
        report.scalars["mean_degree"] = float(deg.mean())
        count, giant = components(edges)
        report.scalars["component_count"] = count
        report.scalars["giant_fraction"] = giant
        vals, ccdf = degree_ccdf(deg)
        report.tables["ccdf_node_degree"] = (["degree", "ccdf"], [vals, ccdf])
        if len(edges):
            report.scalars["clustering_mean"] = clustering_mean(edges)
            c_x, c_y = clustering_spectrum(edges, base)
            report.tables["clustering_spectrum"] = (
                ["degree_bin_center", "mean_clustering"], [c_x, c_y])
            k_x, k_y = knn_spectrum(edges, base)
            report.tables["knn_spectrum"] = (
                ["degree_bin_center", "mean_neighbor_degree"], [k_x, k_y])
        if labels is not None:
            report.scalars["homophily"] = homophily(edges, labels)
    if bip_edges is not None:
        dn = bip_edges.node_degrees()
        df = bip_edges.feature_degrees()
        report.scalars["mean_node_degree"] = float(dn.mean())
        report.scalars["mean_feature_degree"] = float(df.mean())
        nv, nc = degree_ccdf(dn)
        fv, fc = degree_ccdf(df)
        report.tables["ccdf_bipartite_node_degree"] = (["degree", "ccdf"], [nv, nc])
        report.tables["ccdf_feature_degree"] = (["degree", "ccdf"], [fv, fc])
        if len(bip_edges):
            for side, tag in (("nodes", "nodes"), ("features", "features")):
                c = bipartite_local_clustering(bip_edges, side)
                if not np.all(np.isnan(c)):
                    report.scalars[f"bipartite_clustering_mean_{tag}"] = float(np.nanmean(c))
                    b_x, b_y = bipartite_clustering_spectrum(bip_edges, side, base)
                    report.tables[f"bipartite_clustering_{tag}"] = (
                        ["degree_bin_center", "mean_clustering"], [b_x, b_y])
                k_x, k_y = knn_spectrum_bipartite(bip_edges, side, base)
                report.tables[f"knn_bipartite_{tag}"] = (
                    ["degree_bin_center", "mean_counterpart_degree"], [k_x, k_y])
    return report
