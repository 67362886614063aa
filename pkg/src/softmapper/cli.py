"""Command-line interface: build Mapper graphs, optimize filters, generate
synthetic shapes and export graphs.

Exit codes: 0 success, 1 usage/config error, 2 runtime/numeric failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .clustering import KMeansClusterer, SingleLinkageClusterer, threshold_from_hausdorff
from .cover import sample_assignment, smooth_scheme, standard_scheme, uniform_cover
from .data import FormatError, PointCloud, load_csv, load_off_vertices
from .export import (
    diagram_to_csv,
    export_dot,
    graph_from_json,
    graph_to_json,
    learning_curve_svg,
    trace_to_csv,
)
from .filters import FixedFilter, LinearFilter, diagonal_init
from .mapper import map_comp
from .optimize import OptimConfig, direction_correlation, estimate_risk, optimize
from .persistence import extended_persistence, map_pers_filtration, regular_persistence
from .synthetic import generate_synthetic


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        raise SystemExit_(1, message)


class SystemExit_(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _add_dataset_args(p):
    p.add_argument("--input", help="path to a point cloud file")
    p.add_argument("--format", choices=["csv", "off"], default="csv")
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--shape", choices=["circle", "cylinder", "y_shape", "plane_with_leg"],
                   help="synthetic generator (alternative to --input)")
    p.add_argument("--n", type=int, default=600)
    p.add_argument("--noise", type=float, default=0.0)


def _add_filter_args(p):
    p.add_argument("--filter", choices=["linear", "coord"], default="linear")
    p.add_argument("--theta", help="comma-separated initial parameters (default: diagonal)")
    p.add_argument("--coord", type=int, default=-1,
                   help="coordinate index for the fixed 'coord' filter (default: last)")


def _add_cover_args(p):
    p.add_argument("--resolution", type=int, default=10)
    p.add_argument("--gain", type=float, default=0.3)
    p.add_argument("--delta-rel", type=float, default=1e-2)


def _add_cluster_args(p):
    p.add_argument("--clusterer", choices=["kmeans", "linkage"], default="linkage")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--threshold", type=float)
    p.add_argument("--threshold-factor", type=float,
                   help="set the linkage threshold to factor * subsample Hausdorff distance")
    p.add_argument("--subsample-fraction", type=float, default=1 / 3)


def build_parser() -> _Parser:
    top = _Parser(prog="softmapper")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    for name in ("build", "optimize"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with defaults for any flag")
        _add_dataset_args(p)
        _add_filter_args(p)
        _add_cover_args(p)
        _add_cluster_args(p)
        p.add_argument("--mode", choices=["regular", "extended"], default="extended")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out-dir", default=".")
        p.add_argument("--color-attr", help="attribute name used for node colors")
        if name == "build":
            p.add_argument("--sample", action="store_true",
                           help="sample the smooth scheme instead of the standard assignment")
        else:
            p.add_argument("--epochs", type=int, default=200)
            p.add_argument("--mc-samples", type=int, default=10)
            p.add_argument("--step-size", type=float, default=0.1)
            p.add_argument("--schedule", choices=["constant", "robbins_monro"], default="constant")
            p.add_argument("--noise-std", type=float, default=0.0)
            p.add_argument("--maximize", action="store_true")
            p.add_argument("--scheme", choices=["smooth", "standard"], default="smooth")
            p.add_argument("--reference-direction",
                           help="comma-separated direction to correlate theta_N against")

    p = sub.add_parser("synth")
    p.add_argument("--shape", required=True,
                   choices=["circle", "cylinder", "y_shape", "plane_with_leg"])
    p.add_argument("--n", type=int, default=600)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("export")
    p.add_argument("--graph", required=True, help="mapper.json produced by build")
    p.add_argument("--out", required=True, help="output DOT path")
    return top


def _apply_config_file(argv):
    """Merge --config JSON values as parser defaults; flags override them."""
    if "--config" not in argv:
        return argv, {}
    i = argv.index("--config")
    try:
        path = argv[i + 1]
    except IndexError:
        raise ConfigError("--config needs a path") from None
    try:
        with open(path) as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(values, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return argv, values


def _load_cloud(args) -> PointCloud:
    if args.shape and args.input:
        raise ConfigError("give either --input or --shape, not both")
    if args.shape:
        return generate_synthetic(args.shape, args.n, args.noise, args.seed)
    if not args.input:
        raise ConfigError("one of --input or --shape is required")
    if not Path(args.input).exists():
        raise ConfigError(f"input file not found: {args.input}")
    if args.format == "off":
        return load_off_vertices(args.input)
    return load_csv(args.input, has_header=args.has_header)


def _parse_vector(text, p):
    vec = np.array([float(t) for t in text.split(",")])
    if vec.size != p:
        raise ConfigError(f"expected {p} components, got {vec.size}")
    return vec


def _make_filter(args, cloud):
    if args.filter == "coord":
        idx = args.coord if args.coord >= 0 else cloud.dim - 1
        if not 0 <= idx < cloud.dim:
            raise ConfigError(f"coordinate index {idx} out of range for p={cloud.dim}")
        return FixedFilter(cloud.points[:, idx]), np.zeros(0)
    theta = _parse_vector(args.theta, cloud.dim) if args.theta else diagonal_init(cloud.dim)
    return LinearFilter(), theta


def _make_clusterer(args, cloud):
    if args.clusterer == "kmeans":
        return KMeansClusterer(args.k, seed=args.seed)
    if args.threshold_factor is not None:
        return threshold_from_hausdorff(cloud, args.subsample_fraction,
                                        args.threshold_factor, args.seed)
    if args.threshold is None:
        raise ConfigError("linkage clusterer needs --threshold or --threshold-factor")
    return SingleLinkageClusterer(args.threshold)


def _node_colors(graph, cloud, args, filter_vals):
    source = filter_vals
    if args.color_attr:
        if args.color_attr not in cloud.attributes:
            raise ConfigError(f"unknown attribute {args.color_attr!r}")
        source = cloud.attributes[args.color_attr]
    return np.array([source[list(nd.members)].mean() for nd in graph.nodes])


def _config_hash(args) -> str:
    doc = {k: v for k, v in sorted(vars(args).items()) if k != "config"}
    return hashlib.sha256(json.dumps(doc, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _write_build_outputs(out_dir: Path, cloud, fam, theta, args, sampled_seed=None):
    fv = fam.evaluate(cloud, theta)
    cover = uniform_cover(fv.values, args.resolution, args.gain)
    if sampled_seed is not None:
        span = float(fv.values.max() - fv.values.min())
        delta = args.delta_rel * span if span > 0 else args.delta_rel
        e = sample_assignment(smooth_scheme(fv, cover, delta), sampled_seed)
    else:
        e = standard_scheme(fv, cover).probs.astype(np.uint8)
    clusterer = _make_clusterer(args, cloud)
    graph = map_comp(cloud, e, clusterer)
    fg = map_pers_filtration(graph, fv)
    diagram = extended_persistence(fg) if args.mode == "extended" else regular_persistence(fg)
    colors = _node_colors(graph, cloud, args, fv.values)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "mapper.json").write_text(graph_to_json(graph, fg.node_values, colors))
    (out_dir / "mapper.dot").write_text(export_dot(graph, colors))
    (out_dir / "diagram.csv").write_text(diagram_to_csv(diagram))
    return graph, diagram


def cmd_build(args) -> int:
    cloud = _load_cloud(args)
    fam, theta = _make_filter(args, cloud)
    out_dir = Path(args.out_dir)
    seed = args.seed if args.sample else None
    _write_build_outputs(out_dir, cloud, fam, theta, args, sampled_seed=seed)
    summary = {"seed": args.seed, "config_hash": _config_hash(args), "version": __version__}
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_optimize(args) -> int:
    cloud = _load_cloud(args)
    fam, theta0 = _make_filter(args, cloud)
    if theta0.size == 0:
        raise ConfigError("the 'coord' filter has no parameters to optimize")
    clusterer = _make_clusterer(args, cloud)
    config = OptimConfig(
        epochs=args.epochs,
        mc_samples=args.mc_samples,
        step_size=args.step_size,
        schedule=args.schedule,
        noise_std=args.noise_std,
        seed=args.seed,
        mode=args.mode,
        delta_rel=args.delta_rel,
        resolution=args.resolution,
        gain=args.gain,
        maximize=args.maximize,
        scheme=args.scheme,
    )
    theta_n, trace = optimize(cloud, fam, theta0, clusterer, config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "trace.csv").write_text(trace_to_csv(trace))
    (out_dir / "curve.svg").write_text(learning_curve_svg(trace))
    (out_dir / "theta_final.json").write_text(
        json.dumps({"theta": [float(x) for x in theta_n]}, indent=2) + "\n"
    )
    _write_build_outputs(out_dir / "initial", cloud, fam, theta0, args)
    _write_build_outputs(out_dir / "final", cloud, fam, theta_n, args)
    summary = {
        "seed": args.seed,
        "config_hash": _config_hash(args),
        "version": __version__,
        "final_risk": trace.risks[-1],
        "theta_final": [float(x) for x in theta_n],
    }
    if args.reference_direction:
        ref = _parse_vector(args.reference_direction, cloud.dim)
        summary["reference_correlation"] = direction_correlation(theta_n, ref)
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_synth(args) -> int:
    cloud = generate_synthetic(args.shape, args.n, args.noise, args.seed)
    lines = [",".join(repr(float(x)) for x in row) for row in cloud.points]
    Path(args.out).write_text("\n".join(lines) + "\n")
    return 0


def cmd_export(args) -> int:
    if not Path(args.graph).exists():
        raise ConfigError(f"graph file not found: {args.graph}")
    graph = graph_from_json(Path(args.graph).read_text())
    colors = np.array([float(len(nd.members)) for nd in graph.nodes])
    Path(args.out).write_text(export_dot(graph, colors))
    return 0


_COMMANDS = {"build": cmd_build, "optimize": cmd_optimize, "synth": cmd_synth, "export": cmd_export}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv, config_values = _apply_config_file(argv)
        if config_values:
            for p in parser._subparsers._group_actions[0].choices.values():
                known = {a.dest for a in p._actions}
                p.set_defaults(**{k: v for k, v in config_values.items() if k in known})
            unknown = set(config_values) - {
                a.dest
                for p in parser._subparsers._group_actions[0].choices.values()
                for a in p._actions
            }
            if unknown:
                raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit_ as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ConfigError, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (FloatingPointError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
