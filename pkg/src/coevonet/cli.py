"""Command-line interface.

Subcommands: generate (emit a graph), run (single run with full artifacts),
sweep (theta grid x replicates), analyze (verify stored run artifacts),
fit-degrees (degree-distribution fit report for a stored graph).

Every parameter can come from flags or a JSON config file (--config) whose
keys mirror the flag names with underscores; explicit flags win. Exit codes:
0 success, 2 usage/configuration error, 1 runtime or I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .dynamics import SimulationConfig, WEIGHT_DISSIMILARITY, WEIGHT_SIMILARITY
from .fitting import fit_degree_distribution
from .graph import (ConfigError, GeneratorSpec, NetworkKind, from_edge_text,
                    generate, to_edge_text)
from .harness import (AggregationError, IntegrityError, SweepSpec,
                      analyze_run, config_hash, config_to_dict, run_single,
                      run_sweep, sweep_spec_to_dict)
from .seeding import dynamics_seed, graph_seed


def parse_value_grid(text: str, what: str = "grid") -> tuple[float, ...]:
    """Parse 'start:stop:step' (inclusive) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start_s, stop_s, step_s = text.split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
            if step <= 0:
                raise ValueError("step must be positive")
            values = []
            k = 0
            while True:
                v = round(start + k * step, 10)
                if v > stop + 1e-12:
                    break
                values.append(v)
                k += 1
            return tuple(values)
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse {what} {text!r}: {exc}") from exc


def parse_int_list(text: str, what: str = "list") -> tuple[int, ...]:
    """Parse 'a:b:s' (inclusive integer range) or a comma-separated int list."""
    if not text.strip():
        return ()
    try:
        if ":" in text:
            start_s, stop_s, step_s = text.split(":")
            return tuple(range(int(start_s), int(stop_s) + 1, int(step_s)))
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse {what} {text!r}: {exc}") from exc


def _add_network_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--network", choices=["er", "ba"], default="ba",
                   help="initial network family (default: ba)")
    p.add_argument("--n", type=int, default=500, help="number of nodes")
    p.add_argument("--p", type=float, default=0.01,
                   help="ER link probability (default 0.01)")
    p.add_argument("--m", type=int, default=3,
                   help="BA links per new node (default 3)")


def _add_dynamics_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mu", type=float, default=0.5, help="state update rate")
    p.add_argument("--iters", type=int, default=1000, help="full sweeps to run")
    p.add_argument("--state-dims", type=int, default=4, help="state vector dimension")
    p.add_argument("--state-low", type=float, default=1.0, help="initial state lower bound")
    p.add_argument("--state-high", type=float, default=10.0, help="initial state upper bound")
    p.add_argument("--roulette-weight",
                   choices=[WEIGHT_DISSIMILARITY, WEIGHT_SIMILARITY],
                   default=WEIGHT_DISSIMILARITY,
                   help="how the rewiring roulette weights heterogeneous neighbors")
    p.add_argument("--snapshots", type=str, default="",
                   help="similarity-matrix snapshot iterations, 'a,b,c' or 'a:b:s'")
    p.add_argument("--metric-every", type=int, default=1,
                   help="compute metrics every k-th iteration (0 and final always kept)")
    p.add_argument("--seed", type=int, default=None,
                   help="master seed (required; no silent entropy)")
    p.add_argument("--config", type=str, default=None,
                   help="JSON file with flag defaults (flag names with underscores)")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="coevonet",
        description="Adaptive-network consensus simulator and sweep harness")
    sub = parser.add_subparsers(dest="cmd", required=True)
    subs: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("generate", help="emit a random graph as canonical edge list")
    _add_network_args(p)
    p.add_argument("--seed", type=int, default=None, help="generator seed (required)")
    p.add_argument("--out", type=str, default=None, help="output file (default: stdout)")
    p.add_argument("--config", type=str, default=None)
    subs["generate"] = p

    p = sub.add_parser("run", help="single run with the full artifact set")
    _add_network_args(p)
    _add_dynamics_args(p)
    p.add_argument("--theta", type=float, required=False, default=None,
                   help="similarity threshold in [0, 1]")
    p.add_argument("--out-dir", type=str, default=None,
                   help="run directory (default: out/run_<confighash>)")
    subs["run"] = p

    p = sub.add_parser("sweep", help="theta-grid sweep with replicates")
    _add_network_args(p)
    _add_dynamics_args(p)
    p.add_argument("--theta-grid", type=str, default="0:1:0.05",
                   help="'start:stop:step' or comma list (default 0:1:0.05)")
    p.add_argument("--replicates", type=int, default=30)
    p.add_argument("--parallelism", type=int, default=1, help="worker process cap")
    p.add_argument("--snapshot-reps", type=str, default="",
                   help="replicates that write snapshots (default: all)")
    p.add_argument("--out-dir", type=str, default=None,
                   help="sweep directory (default: out/sweep_<confighash>)")
    subs["sweep"] = p

    p = sub.add_parser("analyze", help="verify and recompute metrics of a stored run")
    p.add_argument("--run-dir", type=str, required=True)
    subs["analyze"] = p

    p = sub.add_parser("fit-degrees", help="degree-distribution fit of a stored graph")
    p.add_argument("--edges", type=str, required=True, help="canonical edge-list file")
    p.add_argument("--out", type=str, default=None, help="output JSON file (default: stdout)")
    subs["fit-degrees"] = p

    return parser, subs


def _apply_config_file(parser: argparse.ArgumentParser,
                       subs: dict[str, argparse.ArgumentParser],
                       argv: list[str], args: argparse.Namespace) -> argparse.Namespace:
    path = getattr(args, "config", None)
    if not path:
        return args
    try:
        overrides = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(overrides, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    sub = subs[args.cmd]
    known = {a.dest for a in sub._actions}
    for key in overrides:
        if key not in known:
            raise ConfigError(f"config file {path}: unknown parameter {key!r}")
    sub.set_defaults(**overrides)
    return parser.parse_args(argv)  # explicit flags still override defaults


def _generator_from_args(args: argparse.Namespace, seed: int) -> GeneratorSpec:
    kind = NetworkKind(args.network)
    return GeneratorSpec(kind=kind, n=args.n, p_c=args.p, m_i=args.m, seed=seed)


def _require_seed(args: argparse.Namespace) -> int:
    if args.seed is None:
        raise ConfigError("--seed is required (no silent entropy)")
    return args.seed


def _cmd_generate(args) -> int:
    seed = _require_seed(args)
    spec = _generator_from_args(args, seed)
    text = to_edge_text(generate(spec))
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _base_config(args, theta: float, master_seed: int) -> SimulationConfig:
    return SimulationConfig(
        generator=_generator_from_args(args, master_seed),
        theta=theta,
        seed=master_seed,
        mu=args.mu,
        iterations=args.iters,
        state_dims=args.state_dims,
        state_low=args.state_low,
        state_high=args.state_high,
        snapshot_iters=parse_int_list(args.snapshots, "--snapshots"),
        roulette_weight=args.roulette_weight,
    )


def _cmd_run(args) -> int:
    master = _require_seed(args)
    if args.theta is None:
        raise ConfigError("--theta is required for run")
    cfg = _base_config(args, args.theta, master)
    cfg = replace(cfg,
                  generator=replace(cfg.generator, seed=graph_seed(master)),
                  seed=dynamics_seed(master))
    cfg.validate()
    out_dir = Path(args.out_dir) if args.out_dir else (
        Path("out") / f"run_{config_hash(config_to_dict(cfg))[:8]}")
    records = run_single(cfg, out_dir, metric_every=args.metric_every,
                         base_seed=master)
    final = records[-1]
    q = "n/a" if final.q_modularity is None else f"{final.q_modularity:.4f}"
    print(f"run complete: {out_dir} (final Q={q}, "
          f"smax_ratio={final.smax_ratio:.4f})")
    return 0


def _cmd_sweep(args) -> int:
    master = _require_seed(args)
    base = _base_config(args, 0.0, master)
    grid = parse_value_grid(args.theta_grid, "--theta-grid")
    snap_reps = parse_int_list(args.snapshot_reps, "--snapshot-reps") or None
    spec = SweepSpec(
        base=base,
        theta_grid=grid,
        replicates=args.replicates,
        parallelism=args.parallelism,
        output_dir=Path(args.out_dir) if args.out_dir else
        Path("out") / f"sweep_{config_hash(sweep_spec_to_dict_for_naming(base, grid, args))[:8]}",
        metric_every=args.metric_every,
        snapshot_replicates=snap_reps,
    )
    summary = run_sweep(spec)
    print(f"sweep complete: {len(spec.theta_grid)} thetas x {spec.replicates} "
          f"replicates -> {summary.output_dir}")
    return 0


def sweep_spec_to_dict_for_naming(base, grid, args) -> dict:
    spec = SweepSpec(base=base, theta_grid=grid, replicates=args.replicates)
    return sweep_spec_to_dict(spec)


def _cmd_analyze(args) -> int:
    report = analyze_run(Path(args.run_dir))
    print(json.dumps(report, indent=1))
    return 0


def _cmd_fit_degrees(args) -> int:
    g = from_edge_text(Path(args.edges).read_text())
    report = fit_degree_distribution(g)
    text = json.dumps(report.to_json_dict(), indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


_DISPATCH = {
    "generate": _cmd_generate,
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "analyze": _cmd_analyze,
    "fit-degrees": _cmd_fit_degrees,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_file(parser, subs, argv, args)
        return _DISPATCH[args.cmd](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IntegrityError, AggregationError, FileExistsError, FileNotFoundError,
            ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
