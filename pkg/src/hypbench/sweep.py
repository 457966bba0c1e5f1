"""Parameter sweeps over topology and label factors.

The link-prediction sweep crosses seven two-valued topology factors with
independent realizations. The node-classification sweep adds a label grid
(class count and concentration) on top of the same topology points; all
label variants of one topology point share the same graphs, which the
runner generates once per point.

Every bundle lands in root/<task>/<identifier>/r<realization>. A bundle
whose manifest exists is never regenerated, so an interrupted sweep resumes
where it stopped. Results do not depend on the worker count.
"""

from __future__ import annotations

import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .bundle import write_bundle
from .model import BipartiteParams, LabelParams, UnipartiteParams
from .pipeline import finish_dataset, generate_topology, topology_metrics

_TASKS = ("lp", "nc")


@dataclass(frozen=True)
class SweepGrid:
    """Factor levels for the sweep; defaults reproduce the full study grid."""

    n_nodes: int = 5000
    n_features: int = 2000
    gammas: tuple = (2.1, 3.5)
    gammas_n: tuple = (2.1, 3.5)
    gammas_f: tuple = (2.1, 3.5)
    mean_degrees: tuple = (3.0, 30.0)
    mean_node_degrees: tuple = (3.0, 30.0)
    betas: tuple = (1.1, 3.0)
    betas_b: tuple = (1.1, 3.0)
    n_labels_values: tuple = (2, 3, 6, 10)
    alphas: tuple = (-1.0, 1.0, 5.0, 10.0)
    realizations: int = 10


@dataclass(frozen=True)
class GridPoint:
    """One bundle to generate."""

    uni_params: UnipartiteParams
    bip_params: BipartiteParams
    label_params: LabelParams | None
    identifier: str
    topology_identifier: str
    realization: int


def _identifier(params: dict) -> str:
    return ",".join(f"{key}={params[key]:g}" for key in sorted(params))


def expand_grid(grid: SweepGrid, task: str) -> list[GridPoint]:
    """Enumerate every grid point for a task, in canonical order."""
    if task not in _TASKS:
        raise ValueError(f"task must be one of {_TASKS}")
    points = []
    topo_factors = itertools.product(
        grid.gammas, grid.gammas_n, grid.gammas_f,
        grid.mean_degrees, grid.mean_node_degrees,
        grid.betas, grid.betas_b)
    for gamma, gamma_n, gamma_f, mean_degree, mean_node_degree, beta, beta_b in topo_factors:
        topo_values = {
            "n_nodes": grid.n_nodes, "n_features": grid.n_features,
            "gamma": gamma, "gamma_n": gamma_n, "gamma_f": gamma_f,
            "mean_degree": mean_degree, "mean_node_degree": mean_node_degree,
            "beta": beta, "beta_b": beta_b,
        }
        topo_id = _identifier(topo_values)
        uni = UnipartiteParams(n_nodes=grid.n_nodes, gamma=gamma,
                               mean_degree=mean_degree, beta=beta)
        bip = BipartiteParams(n_nodes=grid.n_nodes, n_features=grid.n_features,
                              gamma_n=gamma_n, gamma_f=gamma_f,
                              mean_node_degree=mean_node_degree, beta_b=beta_b)
        if task == "lp":
            label_combos = [None]
        else:
            label_combos = [
                LabelParams(n_labels=n_labels, alpha=alpha)
                for n_labels, alpha in itertools.product(grid.n_labels_values, grid.alphas)
            ]
        for label_params in label_combos:
            if label_params is None:
                identifier = topo_id
            else:
                identifier = _identifier({
                    **topo_values, "n_labels": label_params.n_labels,
                    "alpha": label_params.alpha})
            for realization in range(grid.realizations):
                points.append(GridPoint(
                    uni_params=uni, bip_params=bip, label_params=label_params,
                    identifier=identifier, topology_identifier=topo_id,
                    realization=realization))
    return points


def bundle_directory(root: str | Path, task: str, point: GridPoint) -> Path:
    return Path(root) / task / point.identifier / f"r{point.realization}"


def _params_row(manifest: dict) -> dict:
    row = {}
    for section in ("unipartite", "bipartite", "labels"):
        values = manifest["params"].get(section)
        if values:
            row.update(values)
    return row


def _summary_row(manifest: dict) -> dict:
    row = {"identifier": manifest["identifier"],
           "realization": manifest["realization"]}
    row.update(_params_row(manifest))
    # realized metrics share names with target params, so prefix them
    for key, value in manifest.get("realized", {}).items():
        row[f"realized_{key}"] = value
    return row


def _run_unit(task: str, points: list[GridPoint], master_seed: int, root: str,
              n_splits: int, metrics_level: str) -> list[dict]:
    """Generate every bundle of one topology point, reusing its graphs."""
    rows = []
    pending = []
    for point in points:
        manifest_path = bundle_directory(root, task, point) / "manifest.json"
        if manifest_path.exists():
            with open(manifest_path, "r", encoding="utf-8") as fh:
                rows.append(_summary_row(json.load(fh)))
        else:
            pending.append(point)
    if not pending:
        return rows
    first = pending[0]
    topology = generate_topology(
        first.uni_params, first.bip_params, master_seed=master_seed,
        topology_identifier=first.topology_identifier, realization=first.realization)
    shared_metrics = topology_metrics(topology, metrics_level)
    split_tasks = ("lp",) if task == "lp" else ("nc",)
    for point in pending:
        bundle = finish_dataset(
            topology, point.uni_params, point.bip_params, point.label_params,
            master_seed=master_seed, identifier=point.identifier,
            topology_identifier=point.topology_identifier,
            realization=point.realization, split_tasks=split_tasks,
            n_splits=n_splits, metrics_level=metrics_level,
            precomputed_topology_metrics=shared_metrics)
        write_bundle(bundle, bundle_directory(root, task, point))
        rows.append(_summary_row(bundle.manifest))
    return rows


def summary_path(root: str | Path, task: str) -> Path:
    return Path(root) / f"{task}_summary.tsv"


def _write_summary(rows: list[dict], path: Path) -> None:
    rows = sorted(rows, key=lambda r: (r["identifier"], r["realization"]))
    keys = set()
    for row in rows:
        keys.update(row)
    keys.discard("identifier")
    keys.discard("realization")
    columns = ["identifier", "realization"] + sorted(keys)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(columns) + "\n")
        for row in rows:
            cells = []
            for column in columns:
                value = row.get(column, "")
                if isinstance(value, float):
                    value = format(value, ".10g")
                cells.append(str(value))
            fh.write("\t".join(cells) + "\n")


def run_sweep(grid: SweepGrid, task: str, master_seed: int, root: str | Path,
              workers: int = 1, n_splits: int = 5, metrics_level: str = "full",
              progress: bool = False) -> Path:
    """Generate every bundle of a sweep and write its summary table.

    Safe to re-run after an interruption: finished bundles are detected by
    their manifest and only read back for the summary.
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    points = expand_grid(grid, task)
    units: dict[tuple[str, int], list[GridPoint]] = {}
    for point in points:
        units.setdefault((point.topology_identifier, point.realization), []).append(point)
    unit_args = [
        (task, unit_points, master_seed, str(root), n_splits, metrics_level)
        for _, unit_points in sorted(units.items())
    ]
    rows: list[dict] = []
    done = 0
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for unit_rows in pool.map(_run_unit, *zip(*unit_args)):
                rows.extend(unit_rows)
                done += 1
                if progress:
                    print(f"sweep {task}: {done}/{len(unit_args)} topology points",
                          file=sys.stderr)
    else:
        for args in unit_args:
            rows.extend(_run_unit(*args))
            done += 1
            if progress:
                print(f"sweep {task}: {done}/{len(unit_args)} topology points",
                      file=sys.stderr)
    path = summary_path(root, task)
    _write_summary(rows, path)
    return path
