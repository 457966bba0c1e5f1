"""Dataset bundle: in-memory dataset plus its on-disk layout.

A bundle directory holds:
- edges.tsv                   node graph, one "u TAB v" line per edge, u < v
- features.tsv                node-feature graph, one "node TAB feature" line
- labels.tsv                  one "node TAB label" line per node (optional)
- coords_nodes.tsv            node-graph coordinates: id kappa theta r
- coords_nodes_bipartite.tsv  per-node feature-graph coordinates: id kappa theta r
- coords_features.tsv         feature coordinates: id kappa theta r
- splits/nc_<i>.tsv           node split: "node TAB role"
- splits/lp_<i>.tsv           edge split: "u TAB v TAB role"
- manifest.json               parameters, derived constants, realized metrics

All ids are 0-based, every file is newline-terminated, floats carry 12
significant digits. The manifest is written last (atomically), so its
presence marks a complete bundle.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bipartite import BipartiteEdgeSet
from .labels import LabelAssignment
from .model import BipartiteParams, LabelParams, Placements, UnipartiteParams
from .sampling import SeedSpec
from .unipartite import EdgeSet

FORMAT_VERSION = "1"

LP_FRACTIONS = (0.85, 0.05, 0.10)
NC_FRACTIONS = (0.70, 0.15, 0.15)

_MIN_SPLIT_ITEMS = 20
_NEGATIVE_BATCH = 4096


@dataclass(frozen=True)
class SplitSpec:
    """One train/val/test split request.

    task is "nc" (node classification, splits nodes) or "lp" (link
    prediction, splits edges and adds sampled non-edges). index selects one
    of the five reproducible splits per bundle and keys the randomness.
    """

    task: str
    index: int
    fractions: tuple[float, float, float] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.task not in ("nc", "lp"):
            raise ValueError("task must be 'nc' or 'lp'")
        if not 0 <= self.index <= 4:
            raise ValueError("split index must be in 0..4")
        fractions = self.fractions
        if fractions is None:
            fractions = NC_FRACTIONS if self.task == "nc" else LP_FRACTIONS
        fractions = tuple(float(f) for f in fractions)
        if len(fractions) != 3 or any(f <= 0 for f in fractions):
            raise ValueError("fractions must be three positive values")
        if abs(sum(fractions) - 1.0) > 1e-9:
            raise ValueError("fractions must sum to 1")
        object.__setattr__(self, "fractions", fractions)


def make_nc_split(n_nodes: int, spec: SplitSpec, stream: SeedSpec) -> dict[str, np.ndarray]:
    """Partition node ids into train/val/test index arrays."""
    if spec.task != "nc":
        raise ValueError("spec.task must be 'nc'")
    if n_nodes < _MIN_SPLIT_ITEMS:
        raise ValueError(f"need at least {_MIN_SPLIT_ITEMS} nodes to split")
    n_val = round(spec.fractions[1] * n_nodes)
    n_test = round(spec.fractions[2] * n_nodes)
    if n_val == 0 or n_test == 0 or n_val + n_test >= n_nodes:
        raise ValueError("fractions leave an empty part at this size")
    perm = stream.row_generator(spec.index, salt="nc").permutation(n_nodes)
    return {
        "val": np.sort(perm[:n_val]),
        "test": np.sort(perm[n_val:n_val + n_test]),
        "train": np.sort(perm[n_val + n_test:]),
    }


def make_lp_split(edges: EdgeSet, spec: SplitSpec, stream: SeedSpec) -> dict[str, np.ndarray]:
    """Partition edges into train/val/test plus matched non-edge negatives.

    Negatives are uniform distinct node pairs that are not edges, one per
    val/test positive, with val and test negatives disjoint.
    """
    if spec.task != "lp":
        raise ValueError("spec.task must be 'lp'")
    m = len(edges)
    if m < _MIN_SPLIT_ITEMS:
        raise ValueError(f"need at least {_MIN_SPLIT_ITEMS} edges to split")
    n_val = round(spec.fractions[1] * m)
    n_test = round(spec.fractions[2] * m)
    if n_val == 0 or n_test == 0 or n_val + n_test >= m:
        raise ValueError("fractions leave an empty part at this size")
    n = edges.n_nodes
    total_pairs = n * (n - 1) // 2
    needed = n_val + n_test
    if total_pairs - m < needed:
        raise ValueError("graph too dense to sample the requested negatives")
    gen = stream.row_generator(spec.index, salt="lp")
    perm = gen.permutation(m)
    val = edges.edges[np.sort(perm[:n_val])]
    test = edges.edges[np.sort(perm[n_val:n_val + n_test])]
    train = edges.edges[np.sort(perm[n_val + n_test:])]

    positive = set((edges.edges[:, 0] * n + edges.edges[:, 1]).tolist())
    negatives: list[int] = []
    chosen: set[int] = set()
    while len(negatives) < needed:
        cand = gen.integers(0, n, size=(_NEGATIVE_BATCH, 2))
        for a, b in cand:
            if a == b:
                continue
            u, v = (a, b) if a < b else (b, a)
            key = int(u) * n + int(v)
            if key in positive or key in chosen:
                continue
            chosen.add(key)
            negatives.append(key)
            if len(negatives) == needed:
                break
    neg = np.array(negatives, dtype=np.int64)
    neg_pairs = np.column_stack([neg // n, neg % n])
    return {
        "train": train,
        "val": val,
        "test": test,
        "neg_val": neg_pairs[:n_val],
        "neg_test": neg_pairs[n_val:],
    }


@dataclass
class DatasetBundle:
    """Complete generated dataset with its manifest and splits."""

    uni_params: UnipartiteParams
    placements: Placements
    edges: EdgeSet
    manifest: dict
    bip_params: BipartiteParams | None = None
    bip_node_placements: Placements | None = None
    feature_placements: Placements | None = None
    bip_edges: BipartiteEdgeSet | None = None
    labels: LabelAssignment | None = None
    nc_splits: list[dict[str, np.ndarray]] = field(default_factory=list)
    lp_splits: list[dict[str, np.ndarray]] = field(default_factory=list)


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _write_lines(path: Path, lines) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def _coord_lines(placements: Placements, kappa_ref: float, disk_radius: float):
    for i in range(len(placements)):
        kappa = placements.kappa[i]
        r = disk_radius - 2.0 * math.log(kappa / kappa_ref)
        yield f"{i}\t{_fmt(kappa)}\t{_fmt(placements.theta[i])}\t{_fmt(r)}"


def _ensure_reference(manifest: dict, key_ref: str, key_radius: str,
                      placements: Placements, nominal_radius_fn) -> tuple[float, float]:
    derived = manifest.setdefault("derived", {})
    if key_ref not in derived or key_radius not in derived:
        kappa_ref = float(placements.kappa.min())
        derived[key_ref] = kappa_ref
        derived[key_radius] = float(nominal_radius_fn(kappa_ref))
    return derived[key_ref], derived[key_radius]


def write_bundle(bundle: DatasetBundle, directory: str | Path) -> Path:
    """Write every bundle file; the manifest lands last, atomically."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "splits").mkdir(exist_ok=True)

    _write_lines(directory / "edges.tsv",
                 (f"{u}\t{v}" for u, v in bundle.edges.edges))

    up = bundle.uni_params
    kappa_ref, radius_eff = _ensure_reference(
        bundle.manifest, "kappa_ref_nodes", "disk_radius_effective",
        bundle.placements,
        lambda ref: 2.0 * math.log(2.0 * up.radius / (up.mu * ref * ref)),
    )
    _write_lines(directory / "coords_nodes.tsv",
                 _coord_lines(bundle.placements, kappa_ref, radius_eff))

    if bundle.bip_edges is not None:
        bp = bundle.bip_params
        _write_lines(directory / "features.tsv",
                     (f"{u}\t{f}" for u, f in bundle.bip_edges.edges))
        ref_n, radius_b = _ensure_reference(
            bundle.manifest, "kappa_ref_bipartite_nodes", "bipartite_disk_radius_effective",
            bundle.bip_node_placements,
            lambda ref: 2.0 * math.log(
                2.0 * bp.radius
                / (bp.mu_b * ref * bundle.feature_placements.kappa.min())),
        )
        ref_f = bundle.manifest["derived"].setdefault(
            "kappa_ref_features", float(bundle.feature_placements.kappa.min()))
        _write_lines(directory / "coords_nodes_bipartite.tsv",
                     _coord_lines(bundle.bip_node_placements, ref_n, radius_b))
        _write_lines(directory / "coords_features.tsv",
                     _coord_lines(bundle.feature_placements, ref_f, radius_b))

    if bundle.labels is not None:
        _write_lines(directory / "labels.tsv",
                     (f"{i}\t{label}" for i, label in enumerate(bundle.labels.labels)))

    for i, split in enumerate(bundle.nc_splits):
        _write_lines(directory / "splits" / f"nc_{i}.tsv",
                     (f"{node}\t{role}"
                      for role in ("train", "val", "test")
                      for node in split[role]))
    for i, split in enumerate(bundle.lp_splits):
        _write_lines(directory / "splits" / f"lp_{i}.tsv",
                     (f"{u}\t{v}\t{role}"
                      for role in ("train", "val", "test", "neg_val", "neg_test")
                      for u, v in split[role]))

    tmp = directory / "manifest.json.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(bundle.manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, directory / "manifest.json")
    return directory


def _read_pairs(path: Path, n_columns: int) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != n_columns:
                raise ValueError(f"{path}:{lineno}: expected {n_columns} columns")
            try:
                rows.append([int(p) for p in parts])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        return np.empty((0, n_columns), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def _read_coords(path: Path) -> tuple[np.ndarray, np.ndarray]:
    kappas = []
    thetas = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 columns")
            if int(parts[0]) != len(kappas):
                raise ValueError(f"{path}:{lineno}: ids must be consecutive from 0")
            kappas.append(float(parts[1]))
            thetas.append(float(parts[2]))
    return np.array(kappas), np.array(thetas)


def _read_roled(path: Path, n_id_columns: int, roles: tuple[str, ...]) -> dict[str, np.ndarray]:
    buckets: dict[str, list] = {role: [] for role in roles}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != n_id_columns + 1:
                raise ValueError(f"{path}:{lineno}: expected {n_id_columns + 1} columns")
            role = parts[-1]
            if role not in buckets:
                raise ValueError(f"{path}:{lineno}: unknown role {role!r}")
            buckets[role].append([int(p) for p in parts[:-1]])
    out = {}
    for role, rows in buckets.items():
        arr = np.array(rows, dtype=np.int64) if rows else np.empty(
            (0, n_id_columns), dtype=np.int64)
        out[role] = arr[:, 0] if n_id_columns == 1 else arr
    return out


def read_bundle(directory: str | Path) -> DatasetBundle:
    """Reconstruct a bundle from its directory."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise FileNotFoundError(f"{manifest_path}: missing manifest (incomplete bundle?)")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    if manifest.get("format_version") != FORMAT_VERSION:
        raise ValueError(
            f"{manifest_path}: unsupported format_version "
            f"{manifest.get('format_version')!r}")

    pu = manifest["params"]["unipartite"]
    uni_params = UnipartiteParams(
        n_nodes=pu["n_nodes"], gamma=pu["gamma"],
        mean_degree=pu["mean_degree"], beta=pu["beta"])
    kappa, theta = _read_coords(directory / "coords_nodes.tsv")
    placements = Placements(kappa=kappa, theta=theta)
    edge_rows = _read_pairs(directory / "edges.tsv", 2)
    edges = EdgeSet(n_nodes=uni_params.n_nodes, edges=edge_rows)

    bundle = DatasetBundle(
        uni_params=uni_params, placements=placements, edges=edges, manifest=manifest)

    pb = manifest["params"].get("bipartite")
    if pb is not None:
        bundle.bip_params = BipartiteParams(
            n_nodes=pb["n_nodes"], n_features=pb["n_features"],
            gamma_n=pb["gamma_n"], gamma_f=pb["gamma_f"],
            mean_node_degree=pb["mean_node_degree"], beta_b=pb["beta_b"])
        kn, tn = _read_coords(directory / "coords_nodes_bipartite.tsv")
        bundle.bip_node_placements = Placements(kappa=kn, theta=tn)
        kf, tf = _read_coords(directory / "coords_features.tsv")
        bundle.feature_placements = Placements(kappa=kf, theta=tf)
        rows = _read_pairs(directory / "features.tsv", 2)
        bundle.bip_edges = BipartiteEdgeSet(
            n_nodes=bundle.bip_params.n_nodes,
            n_features=bundle.bip_params.n_features, edges=rows)

    pl = manifest["params"].get("labels")
    if pl is not None:
        label_rows = _read_pairs(directory / "labels.tsv", 2)
        if not np.array_equal(label_rows[:, 0], np.arange(uni_params.n_nodes)):
            raise ValueError("labels.tsv: expected one row per node in id order")
        bundle.labels = LabelAssignment(
            labels=label_rows[:, 1],
            centroid_angles=np.array(manifest["labels"]["centroid_angles"]))

    split_counts = manifest.get("splits", {})
    for i in range(split_counts.get("nc", 0)):
        bundle.nc_splits.append(_read_roled(
            directory / "splits" / f"nc_{i}.tsv", 1, ("train", "val", "test")))
    for i in range(split_counts.get("lp", 0)):
        bundle.lp_splits.append(_read_roled(
            directory / "splits" / f"lp_{i}.tsv", 2,
            ("train", "val", "test", "neg_val", "neg_test")))
    return bundle
