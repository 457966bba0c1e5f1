"""Command-line interface.

Subcommands: generate (one bundle), metrics (tables for a bundle), split
(recut one split of an existing bundle), sweep (full parameter sweep),
randomize-cm (degree-preserving null model of a bundle's feature graph).

Exit codes: 0 success, 2 invalid usage or parameters, 3 missing or
unreadable files, 4 runtime failure. Progress goes to stderr; stdout
carries only results.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

from .bundle import SplitSpec, make_lp_split, make_nc_split, read_bundle, write_bundle
from .metrics import compute_report, randomize_bipartite_cm
from .model import BipartiteParams, LabelParams, UnipartiteParams
from .pipeline import generate_dataset
from .sampling import SeedSpec
from .sweep import SweepGrid, expand_grid, run_sweep

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_IO = 3
_EXIT_RUNTIME = 4

# option name -> (config section, config key, parser)
_CONFIG_MAP = {
    "n_nodes": ("unipartite", "n_nodes", int),
    "gamma": ("unipartite", "gamma", float),
    "mean_degree": ("unipartite", "mean_degree", float),
    "beta": ("unipartite", "beta", float),
    "n_features": ("bipartite", "n_features", int),
    "gamma_n": ("bipartite", "gamma_n", float),
    "gamma_f": ("bipartite", "gamma_f", float),
    "mean_node_degree": ("bipartite", "mean_node_degree", float),
    "beta_b": ("bipartite", "beta_b", float),
    "n_labels": ("labels", "n_labels", int),
    "alpha": ("labels", "alpha", float),
    "master_seed": ("run", "master_seed", int),
    "identifier": ("run", "identifier", str),
    "realization": ("run", "realization", int),
    "splits": ("run", "splits", int),
    "split_tasks": ("run", "split_tasks", str),
    "metrics_level": ("run", "metrics_level", str),
}


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise FileNotFoundError(f"config file not found: {path}")
    values = {}
    for option, (section, key, cast) in _CONFIG_MAP.items():
        if parser.has_option(section, key):
            values[option] = cast(parser.get(section, key))
    return values


def _merged(args: argparse.Namespace) -> dict:
    """Config values overridden by any flag given on the command line."""
    values = _load_config(getattr(args, "config", None))
    for option in _CONFIG_MAP:
        flag_value = getattr(args, option, None)
        if flag_value is not None:
            values[option] = flag_value
    return values


def _progress(message: str) -> None:
    print(message, file=sys.stderr)


def _cmd_generate(args: argparse.Namespace) -> int:
    values = _merged(args)
    for required in ("n_nodes", "gamma", "mean_degree", "beta"):
        if required not in values:
            raise ValueError(f"missing required parameter: {required.replace('_', '-')}")
    uni = UnipartiteParams(n_nodes=values["n_nodes"], gamma=values["gamma"],
                           mean_degree=values["mean_degree"], beta=values["beta"])
    bip = None
    if "n_features" in values:
        for required in ("gamma_n", "gamma_f", "mean_node_degree", "beta_b"):
            if required not in values:
                raise ValueError(
                    f"missing required bipartite parameter: {required.replace('_', '-')}")
        bip = BipartiteParams(
            n_nodes=values["n_nodes"], n_features=values["n_features"],
            gamma_n=values["gamma_n"], gamma_f=values["gamma_f"],
            mean_node_degree=values["mean_node_degree"], beta_b=values["beta_b"])
    lab = None
    if "n_labels" in values:
        if "alpha" not in values:
            raise ValueError("missing required label parameter: alpha")
        lab = LabelParams(n_labels=values["n_labels"], alpha=values["alpha"])

    master_seed = values.get("master_seed", 0)
    identifier = values.get("identifier", "dataset")
    realization = values.get("realization", 0)
    n_splits = values.get("splits", 5)
    split_tasks = tuple(t for t in values.get("split_tasks", "nc,lp").split(",") if t)
    metrics_level = values.get("metrics_level", "full")

    if args.dry_run:
        print(f"would generate bundle at {args.out}")
        print(f"nodes\t{uni.n_nodes}")
        if bip is not None:
            print(f"features\t{bip.n_features}")
        if lab is not None:
            print(f"labels\t{lab.n_labels}")
        print(f"splits\t{n_splits} per task {','.join(split_tasks)}")
        return _EXIT_OK

    _progress(f"generating bundle {identifier!r} realization {realization}")
    bundle = generate_dataset(
        uni, bip, lab, master_seed=master_seed, identifier=identifier,
        realization=realization, split_tasks=split_tasks, n_splits=n_splits,
        metrics_level=metrics_level)
    write_bundle(bundle, args.out)
    _progress(f"wrote {args.out}")
    return _EXIT_OK


def _cmd_metrics(args: argparse.Namespace) -> int:
    bundle = read_bundle(args.bundle)
    labels = bundle.labels.labels if bundle.labels is not None else None
    report = compute_report(edges=bundle.edges, bip_edges=bundle.bip_edges,
                            labels=labels, base=args.base)
    written = report.write_tables(args.out)
    _progress(f"wrote {len(written)} tables to {args.out}")
    return _EXIT_OK


def _cmd_split(args: argparse.Namespace) -> int:
    bundle = read_bundle(args.bundle)
    manifest = bundle.manifest
    spec = SplitSpec(task=args.task, index=args.index)
    stream = SeedSpec(manifest["master_seed"], manifest["identifier"],
                      manifest["realization"], "splits")
    if args.task == "nc":
        split = make_nc_split(bundle.uni_params.n_nodes, spec, stream)
        while len(bundle.nc_splits) <= args.index:
            bundle.nc_splits.append(None)
        bundle.nc_splits[args.index] = split
        manifest["splits"]["nc"] = max(manifest["splits"].get("nc", 0), args.index + 1)
    else:
        split = make_lp_split(bundle.edges, spec, stream)
        while len(bundle.lp_splits) <= args.index:
            bundle.lp_splits.append(None)
        bundle.lp_splits[args.index] = split
        manifest["splits"]["lp"] = max(manifest["splits"].get("lp", 0), args.index + 1)
    missing = [i for i, s in enumerate(
        bundle.nc_splits if args.task == "nc" else bundle.lp_splits) if s is None]
    if missing:
        raise ValueError(
            f"split indices {missing} would be left without files; "
            f"cut lower indices first")
    write_bundle(bundle, args.bundle)
    _progress(f"wrote split {args.task}_{args.index} in {args.bundle}")
    return _EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    grid = SweepGrid(realizations=args.realizations, n_nodes=args.n_nodes,
                     n_features=args.n_features)
    if args.dry_run:
        points = expand_grid(grid, args.task)
        topologies = {(p.topology_identifier, p.realization) for p in points}
        print(f"task\t{args.task}")
        print(f"bundles\t{len(points)}")
        print(f"topologies\t{len(topologies)}")
        return _EXIT_OK
    path = run_sweep(grid, args.task, args.master_seed, args.out,
                     workers=args.workers, n_splits=args.splits,
                     metrics_level=args.metrics_level, progress=True)
    _progress(f"summary at {path}")
    return _EXIT_OK


def _cmd_randomize_cm(args: argparse.Namespace) -> int:
    bundle = read_bundle(args.bundle)
    if bundle.bip_edges is None:
        raise ValueError("bundle has no node-feature graph to randomize")
    stream = SeedSpec(args.master_seed, bundle.manifest["identifier"],
                      bundle.manifest["realization"], "bipartite-edges")
    randomized = randomize_bipartite_cm(bundle.bip_edges, stream,
                                        swaps_per_edge=args.swaps_per_edge)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        for u, f in randomized.edges:
            fh.write(f"{u}\t{f}\n")
    _progress(f"wrote randomized incidences to {out}")
    return _EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypbench",
        description="Synthetic graph benchmarks with features and labels "
                    "from circle geometry")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate one dataset bundle")
    gen.add_argument("--out", required=True, help="bundle directory to create")
    gen.add_argument("--config", help="INI config file; flags override it")
    gen.add_argument("--n-nodes", dest="n_nodes", type=int)
    gen.add_argument("--gamma", type=float)
    gen.add_argument("--mean-degree", dest="mean_degree", type=float)
    gen.add_argument("--beta", type=float)
    gen.add_argument("--n-features", dest="n_features", type=int)
    gen.add_argument("--gamma-n", dest="gamma_n", type=float)
    gen.add_argument("--gamma-f", dest="gamma_f", type=float)
    gen.add_argument("--mean-node-degree", dest="mean_node_degree", type=float)
    gen.add_argument("--beta-b", dest="beta_b", type=float)
    gen.add_argument("--n-labels", dest="n_labels", type=int)
    gen.add_argument("--alpha", type=float)
    gen.add_argument("--master-seed", dest="master_seed", type=int)
    gen.add_argument("--identifier")
    gen.add_argument("--realization", type=int)
    gen.add_argument("--splits", type=int)
    gen.add_argument("--split-tasks", dest="split_tasks",
                     help="comma-separated subset of nc,lp")
    gen.add_argument("--metrics-level", dest="metrics_level",
                     choices=("none", "basic", "full"))
    gen.add_argument("--dry-run", action="store_true")
    gen.set_defaults(func=_cmd_generate)

    met = sub.add_parser("metrics", help="compute metric tables for a bundle")
    met.add_argument("--bundle", required=True)
    met.add_argument("--out", required=True, help="directory for the TSV tables")
    met.add_argument("--base", type=float, default=2.0, help="spectrum bin base")
    met.set_defaults(func=_cmd_metrics)

    spl = sub.add_parser("split", help="recut one split of an existing bundle")
    spl.add_argument("--bundle", required=True)
    spl.add_argument("--task", required=True, choices=("nc", "lp"))
    spl.add_argument("--index", required=True, type=int)
    spl.set_defaults(func=_cmd_split)

    swp = sub.add_parser("sweep", help="run a full parameter sweep")
    swp.add_argument("--task", required=True, choices=("lp", "nc"))
    swp.add_argument("--out", required=True, help="sweep root directory")
    swp.add_argument("--master-seed", dest="master_seed", type=int, default=0)
    swp.add_argument("--workers", type=int, default=1)
    swp.add_argument("--splits", type=int, default=5)
    swp.add_argument("--realizations", type=int, default=10)
    swp.add_argument("--n-nodes", dest="n_nodes", type=int, default=5000)
    swp.add_argument("--n-features", dest="n_features", type=int, default=2000)
    swp.add_argument("--metrics-level", dest="metrics_level",
                     choices=("none", "basic", "full"), default="full")
    swp.add_argument("--dry-run", action="store_true")
    swp.set_defaults(func=_cmd_sweep)

    cm = sub.add_parser("randomize-cm",
                        help="degree-preserving feature-graph randomization")
    cm.add_argument("--bundle", required=True)
    cm.add_argument("--out", required=True, help="output TSV of incidences")
    cm.add_argument("--swaps-per-edge", dest="swaps_per_edge", type=int, default=10)
    cm.add_argument("--master-seed", dest="master_seed", type=int, default=0)
    cm.set_defaults(func=_cmd_randomize_cm)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except (FileNotFoundError, NotADirectoryError, PermissionError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_IO
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
