"""End-to-end dataset generation.

Orders the stages as: sample raw placements, adjust hidden degrees so
finite-size expected degrees hit the requested means, quantize coordinates
to their on-disk precision, draw edges, assign labels, cut splits, and
assemble the manifest. Coordinates are quantized to 12 significant digits
before any edge is drawn, so a bundle regenerated from its own coordinate
files reproduces the same graphs bit for bit.

Topology stages are keyed by the topology identifier; label and split
stages are keyed by the full identifier. Datasets differing only in label
parameters therefore share their graphs while getting independent labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bipartite import BipartiteEdgeSet, generate_bipartite
from .bundle import DatasetBundle, SplitSpec, make_lp_split, make_nc_split
from .calibration import MatchDiagnostics, adjust_hidden_degrees, adjust_hidden_degrees_bipartite
from .labels import assign_labels
from .metrics import bipartite_local_clustering, clustering_mean, components, homophily
from .model import BipartiteParams, LabelParams, Placements, UnipartiteParams
from .sampling import SeedSpec, sample_angles, sample_power_law_kappas
from .unipartite import EdgeSet, generate_unipartite

FORMAT_VERSION = "1"

_METRIC_LEVELS = ("none", "basic", "full")

_NOTE_INDEPENDENCE = (
    "node hidden degrees in the node-feature graph are drawn independently "
    "of node hidden degrees in the node graph; only angles are shared"
)
_NOTE_MATCHING = (
    "hidden degrees are deterministically adjusted after sampling so that "
    "every entity's finite-size expected degree matches its target and the "
    "realized mean degrees match the requested means"
)


def quantize_significant(values: np.ndarray, digits: int = 12) -> np.ndarray:
    """Round each value to the given count of significant decimal digits.

    Matches the on-disk coordinate precision; quantized values survive a
    write/parse round trip exactly.
    """
    spec = f".{digits}g"
    return np.array([float(format(v, spec)) for v in np.asarray(values, dtype=np.float64)])


@dataclass
class Topology:
    """Graphs and placements shared by datasets that differ only in labels."""

    placements: Placements
    edges: EdgeSet
    uni_diagnostics: MatchDiagnostics
    bip_node_placements: Placements | None = None
    feature_placements: Placements | None = None
    bip_edges: BipartiteEdgeSet | None = None
    bip_diagnostics: MatchDiagnostics | None = None


def generate_topology(uni_params: UnipartiteParams,
                      bip_params: BipartiteParams | None = None, *,
                      master_seed: int, topology_identifier: str,
                      realization: int = 0) -> Topology:
    """Generate the node graph and, optionally, the node-feature graph."""
    if bip_params is not None and bip_params.n_nodes != uni_params.n_nodes:
        raise ValueError("node counts of the two graphs must match")

    place_stream = SeedSpec(master_seed, topology_identifier, realization,
                            "unipartite-placement")
    kappa_raw = sample_power_law_kappas(
        uni_params.n_nodes, uni_params.gamma, uni_params.mean_degree, place_stream)
    theta = quantize_significant(sample_angles(uni_params.n_nodes, place_stream))
    kappa_adj, uni_diag = adjust_hidden_degrees(kappa_raw, uni_params)
    placements = Placements(kappa=quantize_significant(kappa_adj), theta=theta)
    edges = generate_unipartite(
        placements, uni_params,
        SeedSpec(master_seed, topology_identifier, realization, "unipartite-edges"))
    topology = Topology(placements=placements, edges=edges, uni_diagnostics=uni_diag)

    if bip_params is not None:
        bip_stream = SeedSpec(master_seed, topology_identifier, realization,
                              "bipartite-placement")
        kn_raw = sample_power_law_kappas(
            bip_params.n_nodes, bip_params.gamma_n, bip_params.mean_node_degree,
            bip_stream, substream="nodes")
        kf_raw = sample_power_law_kappas(
            bip_params.n_features, bip_params.gamma_f, bip_params.mean_feature_degree,
            bip_stream, substream="features")
        theta_f = quantize_significant(
            sample_angles(bip_params.n_features, bip_stream, substream="features"))
        kn_adj, kf_adj, bip_diag = adjust_hidden_degrees_bipartite(kn_raw, kf_raw, bip_params)
        topology.bip_node_placements = Placements(
            kappa=quantize_significant(kn_adj), theta=theta)
        topology.feature_placements = Placements(
            kappa=quantize_significant(kf_adj), theta=theta_f)
        topology.bip_edges = generate_bipartite(
            topology.bip_node_placements, topology.feature_placements, bip_params,
            SeedSpec(master_seed, topology_identifier, realization, "bipartite-edges"))
        topology.bip_diagnostics = bip_diag
    return topology


def topology_metrics(topology: Topology, level: str = "full") -> dict:
    """Realized metrics that depend only on the topology."""
    if level not in _METRIC_LEVELS:
        raise ValueError(f"metrics level must be one of {_METRIC_LEVELS}")
    out: dict = {}
    if level == "none":
        return out
    edges = topology.edges
    out["mean_degree"] = float(edges.degrees().mean())
    count, giant = components(edges)
    out["component_count"] = count
    out["giant_fraction"] = giant
    if topology.bip_edges is not None:
        out["mean_node_degree"] = float(topology.bip_edges.node_degrees().mean())
        out["mean_feature_degree"] = float(topology.bip_edges.feature_degrees().mean())
    if level == "full":
        deg = edges.degrees()
        if len(edges) and (deg >= 2).any():
            out["clustering_mean"] = clustering_mean(edges)
        if topology.bip_edges is not None and len(topology.bip_edges):
            for side in ("nodes", "features"):
                c = bipartite_local_clustering(topology.bip_edges, side)
                if not np.all(np.isnan(c)):
                    out[f"bipartite_clustering_mean_{side}"] = float(np.nanmean(c))
    return out


def _diag_dict(diag: MatchDiagnostics) -> dict:
    out = {
        "iterations": diag.iterations,
        "residual": diag.residual,
        "scale": diag.scale,
        "capped": diag.capped,
    }
    # feature fields exist only for two-sided adjustments; NaN is not JSON
    if not np.isnan(diag.feature_scale):
        out["feature_scale"] = diag.feature_scale
        out["feature_capped"] = diag.feature_capped
    return out


def _build_manifest(uni_params: UnipartiteParams, bip_params: BipartiteParams | None,
                    label_params: LabelParams | None, topology: Topology,
                    master_seed: int, identifier: str, topology_identifier: str,
                    realization: int, realized: dict,
                    centroid_angles: np.ndarray | None,
                    n_nc_splits: int, n_lp_splits: int) -> dict:
    manifest: dict = {
        "format_version": FORMAT_VERSION,
        "master_seed": master_seed,
        "identifier": identifier,
        "topology_identifier": topology_identifier,
        "realization": realization,
        "params": {
            "unipartite": {
                "n_nodes": uni_params.n_nodes,
                "gamma": uni_params.gamma,
                "mean_degree": uni_params.mean_degree,
                "beta": uni_params.beta,
            },
            "bipartite": None,
            "labels": None,
        },
        "counts": {
            "n_nodes": uni_params.n_nodes,
            "n_edges": len(topology.edges),
        },
        "derived": {
            "mu": uni_params.mu,
            "radius": uni_params.radius,
            "kappa_min": uni_params.kappa_min,
            "disk_radius": uni_params.disk_radius,
        },
        "adjustment": {"unipartite": _diag_dict(topology.uni_diagnostics)},
        "realized": realized,
        "splits": {"nc": n_nc_splits, "lp": n_lp_splits},
        "notes": {"degree_matching": _NOTE_MATCHING},
    }
    if bip_params is not None:
        manifest["params"]["bipartite"] = {
            "n_nodes": bip_params.n_nodes,
            "n_features": bip_params.n_features,
            "gamma_n": bip_params.gamma_n,
            "gamma_f": bip_params.gamma_f,
            "mean_node_degree": bip_params.mean_node_degree,
            "beta_b": bip_params.beta_b,
        }
        manifest["counts"]["n_features"] = bip_params.n_features
        manifest["counts"]["n_bipartite_edges"] = len(topology.bip_edges)
        manifest["derived"].update({
            "mu_b": bip_params.mu_b,
            "bipartite_radius": bip_params.radius,
            "mean_feature_degree": bip_params.mean_feature_degree,
            "kappa_n_min": bip_params.kappa_n_min,
            "kappa_f_min": bip_params.kappa_f_min,
            "bipartite_disk_radius": bip_params.bipartite_disk_radius,
        })
        manifest["adjustment"]["bipartite"] = _diag_dict(topology.bip_diagnostics)
        manifest["notes"]["kappa_independence"] = _NOTE_INDEPENDENCE
    if label_params is not None:
        manifest["params"]["labels"] = {
            "n_labels": label_params.n_labels,
            "alpha": label_params.alpha,
        }
        manifest["counts"]["n_labels"] = label_params.n_labels
        manifest["labels"] = {"centroid_angles": [float(a) for a in centroid_angles]}
    return manifest


def finish_dataset(topology: Topology, uni_params: UnipartiteParams,
                   bip_params: BipartiteParams | None = None,
                   label_params: LabelParams | None = None, *,
                   master_seed: int, identifier: str,
                   topology_identifier: str | None = None, realization: int = 0,
                   split_tasks: tuple[str, ...] = ("nc", "lp"), n_splits: int = 5,
                   metrics_level: str = "full",
                   precomputed_topology_metrics: dict | None = None) -> DatasetBundle:
    """Attach labels, splits, and manifest to an existing topology."""
    if topology_identifier is None:
        topology_identifier = identifier
    if not 0 <= n_splits <= 5:
        raise ValueError("n_splits must be in 0..5")
    for task in split_tasks:
        if task not in ("nc", "lp"):
            raise ValueError(f"unknown split task {task!r}")

    labels = None
    centroids = None
    if label_params is not None:
        assignment = assign_labels(
            topology.placements.theta, label_params,
            SeedSpec(master_seed, identifier, realization, "centroids"))
        labels = assignment
        centroids = assignment.centroid_angles

    realized = dict(precomputed_topology_metrics) if precomputed_topology_metrics is not None \
        else topology_metrics(topology, metrics_level)
    if labels is not None and metrics_level != "none" and len(topology.edges):
        realized["homophily"] = homophily(topology.edges, labels.labels)

    split_stream = SeedSpec(master_seed, identifier, realization, "splits")
    nc_splits = []
    lp_splits = []
    if n_splits:
        if "nc" in split_tasks:
            nc_splits = [make_nc_split(uni_params.n_nodes, SplitSpec("nc", i), split_stream)
                         for i in range(n_splits)]
        if "lp" in split_tasks:
            lp_splits = [make_lp_split(topology.edges, SplitSpec("lp", i), split_stream)
                         for i in range(n_splits)]

    manifest = _build_manifest(
        uni_params, bip_params, label_params, topology, master_seed, identifier,
        topology_identifier, realization, realized, centroids,
        len(nc_splits), len(lp_splits))
    return DatasetBundle(
        uni_params=uni_params, placements=topology.placements, edges=topology.edges,
        manifest=manifest, bip_params=bip_params,
        bip_node_placements=topology.bip_node_placements,
        feature_placements=topology.feature_placements,
        bip_edges=topology.bip_edges, labels=labels,
        nc_splits=nc_splits, lp_splits=lp_splits)


def generate_dataset(uni_params: UnipartiteParams,
                     bip_params: BipartiteParams | None = None,
                     label_params: LabelParams | None = None, *,
                     master_seed: int, identifier: str,
                     topology_identifier: str | None = None, realization: int = 0,
                     split_tasks: tuple[str, ...] = ("nc", "lp"), n_splits: int = 5,
                     metrics_level: str = "full") -> DatasetBundle:
    """Generate a complete dataset bundle."""
    if topology_identifier is None:
        topology_identifier = identifier
    topology = generate_topology(
        uni_params, bip_params, master_seed=master_seed,
        topology_identifier=topology_identifier, realization=realization)
    return finish_dataset(
        topology, uni_params, bip_params, label_params, master_seed=master_seed,
        identifier=identifier, topology_identifier=topology_identifier,
        realization=realization, split_tasks=split_tasks, n_splits=n_splits,
        metrics_level=metrics_level)
