"""Load dataset bundle directories into in-memory arrays.

A bundle directory holds a node graph (edges.tsv), an optional node-feature
graph (features.tsv), optional labels (labels.tsv), coordinate tables,
persisted train/val/test splits (splits/), and a manifest (manifest.json)
recording parameters and counts. load() parses every file, validates it
against the manifest, and returns arrays ready for ML pipelines.

The loader is strictly a consumer: it never writes to the bundle, never
draws randomness, and never recomputes splits. Whatever the files say is
what callers get; any internal inconsistency raises an error naming the
offending file.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse

SUPPORTED_FORMAT_VERSION = "1"

_NC_ROLES = ("train", "val", "test")
_LP_ROLES = ("train", "val", "test", "neg_val", "neg_test")


class BundleValidationError(ValueError):
    """A bundle file is malformed or contradicts its manifest."""


@dataclass(frozen=True)
class LoadedDataset:
    """In-memory view of one bundle; every array is read-only.

    nc_splits holds boolean node masks per role ("train", "val", "test");
    lp_splits holds (k, 2) id-pair arrays per role ("train", "val", "test",
    "neg_val", "neg_test"). features is None when the bundle has no
    node-feature graph; labels is None when it has no labels.
    """

    edges: np.ndarray
    features: sparse.csr_matrix | None
    labels: np.ndarray | None
    nc_splits: tuple[dict[str, np.ndarray], ...]
    lp_splits: tuple[dict[str, np.ndarray], ...]
    manifest: dict

    @property
    def n_nodes(self) -> int:
        return self.manifest["counts"]["n_nodes"]

    @property
    def n_features(self) -> int | None:
        return self.manifest["counts"].get("n_features")


def _require_file(path: Path) -> Path:
    if not path.exists():
        raise FileNotFoundError(f"{path}: missing bundle file")
    return path


def _read_int_rows(path: Path, n_columns: int) -> tuple[np.ndarray, list[int]]:
    """Parse a TSV of integer rows; also return each row's line number."""
    rows: list[list[int]] = []
    linenos: list[int] = []
    with open(_require_file(path), "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != n_columns:
                raise BundleValidationError(
                    f"{path}:{lineno}: expected {n_columns} columns")
            try:
                rows.append([int(p) for p in parts])
            except ValueError:
                raise BundleValidationError(
                    f"{path}:{lineno}: non-integer field") from None
            linenos.append(lineno)
    if not rows:
        return np.empty((0, n_columns), dtype=np.int64), linenos
    return np.array(rows, dtype=np.int64), linenos


def _first_bad_pair(pairs: np.ndarray, n_left: int, n_right: int,
                    strict_order: bool) -> int:
    """Index of the first out-of-range (or unordered) pair, or -1."""
    if not len(pairs):
        return -1
    bad = ((pairs[:, 0] < 0) | (pairs[:, 0] >= n_left)
           | (pairs[:, 1] < 0) | (pairs[:, 1] >= n_right))
    if strict_order:
        bad |= pairs[:, 0] >= pairs[:, 1]
    idx = np.flatnonzero(bad)
    return int(idx[0]) if idx.size else -1


def _validate_coords(path: Path, expected_rows: int) -> None:
    """Coordinate tables are id TAB kappa TAB theta TAB r, ids from 0."""
    count = 0
    with open(_require_file(path), "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise BundleValidationError(
                    f"{path}:{lineno}: expected 4 columns")
            try:
                ident = int(parts[0])
                values = [float(p) for p in parts[1:]]
            except ValueError:
                raise BundleValidationError(
                    f"{path}:{lineno}: malformed coordinate row") from None
            if ident != count:
                raise BundleValidationError(
                    f"{path}:{lineno}: ids must be consecutive from 0")
            if not all(math.isfinite(v) for v in values) or values[0] <= 0:
                raise BundleValidationError(
                    f"{path}:{lineno}: non-finite or non-positive coordinate")
            count += 1
    if count != expected_rows:
        raise BundleValidationError(
            f"{path}: manifest implies {expected_rows} rows, file has {count}")


def _read_roled(path: Path, n_id_columns: int,
                roles: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Parse a split file whose last column is the role tag."""
    buckets: dict[str, list[list[int]]] = {role: [] for role in roles}
    with open(_require_file(path), "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != n_id_columns + 1:
                raise BundleValidationError(
                    f"{path}:{lineno}: expected {n_id_columns + 1} columns")
            role = parts[-1]
            if role not in buckets:
                raise BundleValidationError(
                    f"{path}:{lineno}: unknown role {role!r}")
            try:
                buckets[role].append([int(p) for p in parts[:-1]])
            except ValueError:
                raise BundleValidationError(
                    f"{path}:{lineno}: non-integer field") from None
    out = {}
    for role, rows in buckets.items():
        arr = (np.array(rows, dtype=np.int64) if rows
               else np.empty((0, n_id_columns), dtype=np.int64))
        out[role] = arr[:, 0] if n_id_columns == 1 else arr
    return out


def _load_nc_split(path: Path, n_nodes: int) -> dict[str, np.ndarray]:
    parts = _read_roled(path, 1, _NC_ROLES)
    ids = np.concatenate([parts[role] for role in _NC_ROLES])
    if not np.array_equal(np.sort(ids), np.arange(n_nodes)):
        raise BundleValidationError(
            f"{path}: roles must partition the {n_nodes} nodes")
    masks = {}
    for role in _NC_ROLES:
        mask = np.zeros(n_nodes, dtype=bool)
        mask[parts[role]] = True
        masks[role] = mask
    return masks


def _load_lp_split(path: Path, n_nodes: int,
                   edge_keys: np.ndarray) -> dict[str, np.ndarray]:
    parts = _read_roled(path, 2, _LP_ROLES)
    for role in _LP_ROLES:
        if _first_bad_pair(parts[role], n_nodes, n_nodes, strict_order=True) >= 0:
            raise BundleValidationError(f"{path}: invalid {role} pair")
    positives = np.concatenate([parts[r] for r in ("train", "val", "test")])
    pos_keys = np.sort(positives[:, 0] * n_nodes + positives[:, 1])
    if not np.array_equal(pos_keys, edge_keys):
        raise BundleValidationError(
            f"{path}: positives do not partition edges.tsv")
    if (len(parts["neg_val"]) != len(parts["val"])
            or len(parts["neg_test"]) != len(parts["test"])):
        raise BundleValidationError(
            f"{path}: negative counts must match val/test counts")
    negatives = np.concatenate([parts["neg_val"], parts["neg_test"]])
    neg_keys = negatives[:, 0] * n_nodes + negatives[:, 1]
    if np.unique(neg_keys).size != len(negatives):
        raise BundleValidationError(f"{path}: repeated negative pair")
    if np.isin(neg_keys, edge_keys).any():
        raise BundleValidationError(f"{path}: negatives overlap positives")
    return parts


def _manifest_get(manifest: dict, manifest_path: Path, *keys):
    node = manifest
    for key in keys:
        if not isinstance(node, dict) or key not in node:
            raise BundleValidationError(
                f"{manifest_path}: manifest missing {'.'.join(keys)}")
        node = node[key]
    return node


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def load(directory: str | Path) -> LoadedDataset:
    """Parse and validate one bundle directory.

    Raises FileNotFoundError when a file the manifest implies is absent,
    and BundleValidationError when a file is malformed or contradicts the
    manifest; either message names the offending file.
    """
    directory = Path(directory)
    manifest_path = _require_file(directory / "manifest.json")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BundleValidationError(
                f"{manifest_path}: invalid JSON ({exc})") from None
    version = manifest.get("format_version")
    if version != SUPPORTED_FORMAT_VERSION:
        raise BundleValidationError(
            f"{manifest_path}: unsupported format_version {version!r}")

    n_nodes = _manifest_get(manifest, manifest_path, "counts", "n_nodes")
    n_edges = _manifest_get(manifest, manifest_path, "counts", "n_edges")
    if n_nodes != _manifest_get(manifest, manifest_path,
                                "params", "unipartite", "n_nodes"):
        raise BundleValidationError(
            f"{manifest_path}: counts.n_nodes disagrees with params")

    edges_path = directory / "edges.tsv"
    edges, edge_lines = _read_int_rows(edges_path, 2)
    if len(edges) != n_edges:
        raise BundleValidationError(
            f"{edges_path}: manifest says {n_edges} edges, file has {len(edges)}")
    bad = _first_bad_pair(edges, n_nodes, n_nodes, strict_order=True)
    if bad >= 0:
        raise BundleValidationError(
            f"{edges_path}:{edge_lines[bad]}: invalid edge")
    _validate_coords(directory / "coords_nodes.tsv", n_nodes)

    features = None
    if _manifest_get(manifest, manifest_path, "params").get("bipartite") is not None:
        n_feat = _manifest_get(manifest, manifest_path, "counts", "n_features")
        n_bip = _manifest_get(manifest, manifest_path,
                              "counts", "n_bipartite_edges")
        feat_path = directory / "features.tsv"
        pairs, pair_lines = _read_int_rows(feat_path, 2)
        if len(pairs) != n_bip:
            raise BundleValidationError(
                f"{feat_path}: manifest says {n_bip} node-feature edges, "
                f"file has {len(pairs)}")
        bad = _first_bad_pair(pairs, n_nodes, n_feat, strict_order=False)
        if bad >= 0:
            raise BundleValidationError(
                f"{feat_path}:{pair_lines[bad]}: invalid node-feature pair")
        keys = pairs[:, 0] * n_feat + pairs[:, 1]
        if np.unique(keys).size != len(pairs):
            raise BundleValidationError(f"{feat_path}: duplicate node-feature pair")
        features = sparse.csr_matrix(
            (np.ones(len(pairs), dtype=np.int8), (pairs[:, 0], pairs[:, 1])),
            shape=(n_nodes, n_feat))
        _validate_coords(directory / "coords_nodes_bipartite.tsv", n_nodes)
        _validate_coords(directory / "coords_features.tsv", n_feat)

    labels = None
    if _manifest_get(manifest, manifest_path, "params").get("labels") is not None:
        n_labels = _manifest_get(manifest, manifest_path, "counts", "n_labels")
        labels_path = directory / "labels.tsv"
        rows, _ = _read_int_rows(labels_path, 2)
        if len(rows) != n_nodes or not np.array_equal(rows[:, 0],
                                                      np.arange(n_nodes)):
            raise BundleValidationError(
                f"{labels_path}: expected one row per node in id order")
        if rows[:, 1].min() < 0 or rows[:, 1].max() >= n_labels:
            raise BundleValidationError(
                f"{labels_path}: label outside 0..{n_labels - 1}")
        labels = _freeze(rows[:, 1].copy())

    nc_splits = []
    for i in range(_manifest_get(manifest, manifest_path, "splits", "nc")):
        masks = _load_nc_split(directory / "splits" / f"nc_{i}.tsv", n_nodes)
        nc_splits.append({role: _freeze(mask) for role, mask in masks.items()})
    lp_splits = []
    edge_keys = np.sort(edges[:, 0] * n_nodes + edges[:, 1])
    for i in range(_manifest_get(manifest, manifest_path, "splits", "lp")):
        parts = _load_lp_split(directory / "splits" / f"lp_{i}.tsv",
                               n_nodes, edge_keys)
        lp_splits.append({role: _freeze(arr) for role, arr in parts.items()})

    _freeze(edges)
    if features is not None:
        for arr in (features.data, features.indices, features.indptr):
            arr.setflags(write=False)
    return LoadedDataset(edges=edges, features=features, labels=labels,
                         nc_splits=tuple(nc_splits), lp_splits=tuple(lp_splits),
                         manifest=manifest)


def split_views(dataset: LoadedDataset, task: str, index: int) -> dict[str, np.ndarray]:
    """Return one persisted split exactly as loaded, never resampled.

    task "nc" yields boolean node masks; task "lp" yields id-pair arrays
    (positives partitioned into train/val/test plus sampled non-edges).
    """
    if task == "nc":
        group = dataset.nc_splits
    elif task == "lp":
        group = dataset.lp_splits
    else:
        raise ValueError("task must be 'nc' or 'lp'")
    if not 0 <= index < len(group):
        raise IndexError(
            f"bundle has {len(group)} {task} splits, no index {index}")
    return group[index]
