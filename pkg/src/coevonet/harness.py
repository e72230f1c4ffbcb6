"""Sweep orchestration, per-run artifact persistence, and aggregation.

A sweep executes |theta_grid| x replicates independent runs, each with seeds
derived from the master seed and its (theta_index, replicate) cell, and
writes a deterministic artifact tree:

    <out>/manifest.json
    <out>/aggregate.csv
    <out>/theta_<v>/rep_<k>/series.csv
    <out>/theta_<v>/rep_<k>/final_edges.txt
    <out>/theta_<v>/rep_<k>/final_states.csv
    <out>/theta_<v>/rep_<k>/degree_fit.json
    <out>/theta_<v>/rep_<k>/run.json
    <out>/theta_<v>/rep_<k>/snapshots/sim_<iter>.bin   (at configured iterations)

Everything except the manifest's "execution" section (timings, worker count)
is a pure function of the spec and the master seed, independent of
parallelism.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from . import seeding
from .dynamics import (SimulationConfig, run, states_from_csv, states_to_csv)
from .fitting import fit_degree_distribution
from .graph import ConfigError, from_edge_text, to_edge_text
from .metrics import (detect_communities, has_community_structure, modularity,
                      sim_matrix_to_bytes, similarity_matrix, state_groups)

MANIFEST_NAME = "manifest.json"
AGGREGATE_NAME = "aggregate.csv"

SERIES_COLUMNS = ("theta", "replicate", "iteration", "state_updated",
                  "rewired", "skipped", "q_modularity", "community_flag",
                  "smax_ratio")
AGGREGATE_COLUMNS = ("theta", "metric", "count", "mean", "std", "min",
                     "q1", "median", "q3", "max")


class AggregationError(ValueError):
    """Final-iteration records are missing or inconsistent."""


class IntegrityError(RuntimeError):
    """Stored artifacts do not match their recorded hashes or config."""


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a base run config expanded over a theta grid x replicates.

    `base.seed` acts as the master seed; per-cell graph/dynamics/detection
    seeds are derived from it. `base.theta` is ignored (the grid provides it).
    `metric_every` thins metric computation; iteration 0 and the final
    iteration are always measured. `snapshot_replicates` limits similarity
    snapshots to the listed replicate indices (None = all replicates).
    """

    base: SimulationConfig
    theta_grid: tuple[float, ...]
    replicates: int = 30
    parallelism: int = 1
    output_dir: Path = Path("out")
    metric_every: int = 1
    snapshot_replicates: tuple[int, ...] | None = None

    def validate(self) -> None:
        if not self.theta_grid:
            raise ConfigError("theta grid must not be empty")
        if any(not 0.0 <= t <= 1.0 for t in self.theta_grid):
            raise ConfigError("theta grid values must lie in [0, 1]")
        if any(b <= a for a, b in zip(self.theta_grid, self.theta_grid[1:])):
            raise ConfigError("theta grid must be strictly increasing")
        if self.replicates < 1:
            raise ConfigError(f"replicates must be positive, got {self.replicates}")
        if self.parallelism < 1:
            raise ConfigError(f"parallelism must be positive, got {self.parallelism}")
        if self.metric_every < 1:
            raise ConfigError(f"metric_every must be positive, got {self.metric_every}")
        replace(self.base, theta=0.0).validate()


@dataclass
class SweepRecord:
    """Metric outputs of one (theta, replicate) cell at one iteration."""

    theta: float
    replicate: int
    iteration: int
    q_modularity: float | None
    community_flag: bool | None
    smax_ratio: float
    action_counts: tuple[int, int, int]
    wall_time_ms: int = 0


@dataclass
class SweepSummary:
    output_dir: Path
    manifest_path: Path
    records: list[SweepRecord]
    aggregate_rows: list[dict]


# ---------------------------------------------------------------------------
# Config canonicalization and hashing
# ---------------------------------------------------------------------------

def config_to_dict(cfg: SimulationConfig) -> dict:
    return {
        "generator": {
            "kind": cfg.generator.kind.value,
            "n": cfg.generator.n,
            "p_c": cfg.generator.p_c,
            "m_i": cfg.generator.m_i,
            "seed": cfg.generator.seed,
        },
        "theta": cfg.theta,
        "seed": cfg.seed,
        "mu": cfg.mu,
        "iterations": cfg.iterations,
        "state_dims": cfg.state_dims,
        "state_low": cfg.state_low,
        "state_high": cfg.state_high,
        "snapshot_iters": list(cfg.snapshot_iters),
        "roulette_weight": cfg.roulette_weight,
    }


def sweep_spec_to_dict(spec: SweepSpec) -> dict:
    """Resolved sweep config with every applied default echoed.

    Execution details (parallelism, output path) are deliberately excluded:
    output bytes must not depend on them.
    """
    base = config_to_dict(replace(spec.base, theta=0.0))
    del base["theta"]
    del base["seed"]
    return {
        "kind": "sweep",
        "master_seed": spec.base.seed,
        "theta_grid": list(spec.theta_grid),
        "replicates": spec.replicates,
        "metric_every": spec.metric_every,
        "snapshot_replicates": (None if spec.snapshot_replicates is None
                                else list(spec.snapshot_replicates)),
        "base": base,
    }


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(obj: dict) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def format_theta(theta: float) -> str:
    return f"{theta:g}"


# ---------------------------------------------------------------------------
# Single-run execution with artifact output
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def metric_iterations(iterations: int, metric_every: int) -> set[int]:
    """Iterations at which metrics are computed: 0, every k-th, and the last."""
    its = set(range(0, iterations + 1, metric_every))
    its.add(0)
    its.add(iterations)
    return its


def run_single(cfg: SimulationConfig, out_dir: Path, metric_every: int = 1,
               base_seed: int | None = None, theta_index: int | None = None,
               replicate: int = 0, sweep_hash: str | None = None) -> list[SweepRecord]:
    """Execute one run and write its full artifact set under `out_dir`.

    `base_seed` anchors the detection-seed derivation (defaults to cfg.seed).
    Returns the SweepRecord rows at every measured iteration, final row last.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    snap_dir = out_dir / "snapshots"
    if cfg.snapshot_iters:
        snap_dir.mkdir(exist_ok=True)
    detection_base = base_seed if base_seed is not None else cfg.seed
    measured = metric_iterations(cfg.iterations, metric_every)
    snap_at = set(cfg.snapshot_iters)
    metrics_by_iter: dict[int, tuple[float | None, bool | None, float]] = {}

    def observer(it: int, g, states) -> None:
        if it in measured:
            if g.edge_count > 0:
                part = detect_communities(g, seeding.detection_seed(detection_base, it))
                q = modularity(g, part)
                flag = has_community_structure(q)
            else:
                q, flag = None, None  # undefined on an edgeless graph
            metrics_by_iter[it] = (q, flag, state_groups(states).ratio)
        if it in snap_at:
            blob = sim_matrix_to_bytes(similarity_matrix(states))
            (snap_dir / f"sim_{it}.bin").write_bytes(blob)

    t0 = time.perf_counter()
    result = run(cfg, observers=[observer])
    wall_ms = int((time.perf_counter() - t0) * 1000)

    records = []
    lines = [",".join(SERIES_COLUMNS)]
    for it in range(cfg.iterations + 1):
        counts = tuple(int(c) for c in result.action_counts[it])
        if it in metrics_by_iter:
            q, flag, smax = metrics_by_iter[it]
            records.append(SweepRecord(
                theta=cfg.theta, replicate=replicate, iteration=it,
                q_modularity=q, community_flag=flag, smax_ratio=smax,
                action_counts=counts, wall_time_ms=wall_ms))
            metric_vals = (q, flag, smax)
        else:
            metric_vals = (None, None, None)
        lines.append(",".join([
            _fmt(cfg.theta), _fmt(replicate), _fmt(it),
            _fmt(counts[0]), _fmt(counts[1]), _fmt(counts[2]),
            _fmt(metric_vals[0]), _fmt(metric_vals[1]), _fmt(metric_vals[2]),
        ]))
    (out_dir / "series.csv").write_text("\n".join(lines) + "\n")
    (out_dir / "final_edges.txt").write_text(to_edge_text(result.graph))
    (out_dir / "final_states.csv").write_text(states_to_csv(result.states))

    try:
        fit = fit_degree_distribution(result.graph).to_json_dict()
    except ValueError as exc:
        fit = {"status": "unavailable", "reason": str(exc)}
    (out_dir / "degree_fit.json").write_text(json.dumps(fit, indent=1) + "\n")

    artifacts = ["series.csv", "final_edges.txt", "final_states.csv",
                 "degree_fit.json"]
    artifacts += [f"snapshots/sim_{it}.bin" for it in sorted(snap_at)]
    run_info = {
        "config": config_to_dict(cfg),
        "config_hash": config_hash(config_to_dict(cfg)),
        "sweep_config_hash": sweep_hash,
        "theta_index": theta_index,
        "replicate": replicate,
        "seeds": {
            "base": detection_base,
            "graph": cfg.generator.seed,
            "dynamics": cfg.seed,
        },
        "final_iteration": cfg.iterations,
        "metric_every": metric_every,
        "artifacts": [{"path": p, "sha256": _sha256_file(out_dir / p)}
                      for p in artifacts],
    }
    (out_dir / "run.json").write_text(json.dumps(run_info, indent=1, sort_keys=True) + "\n")
    return records


def cell_config(spec: SweepSpec, theta_index: int, replicate: int) -> tuple[SimulationConfig, int]:
    """Concrete run config for one sweep cell, plus the cell's base seed."""
    base_seed = seeding.cell_seed(spec.base.seed, theta_index, replicate)
    snaps = spec.base.snapshot_iters
    if spec.snapshot_replicates is not None and replicate not in spec.snapshot_replicates:
        snaps = ()
    cfg = replace(
        spec.base,
        theta=spec.theta_grid[theta_index],
        generator=replace(spec.base.generator, seed=seeding.graph_seed(base_seed)),
        seed=seeding.dynamics_seed(base_seed),
        snapshot_iters=snaps,
    )
    return cfg, base_seed


def _run_cell(spec: SweepSpec, theta_index: int, replicate: int,
              sweep_hash: str) -> list[SweepRecord]:
    theta = spec.theta_grid[theta_index]
    cfg, base_seed = cell_config(spec, theta_index, replicate)
    out = Path(spec.output_dir) / f"theta_{format_theta(theta)}" / f"rep_{replicate}"
    return run_single(cfg, out, metric_every=spec.metric_every,
                      base_seed=base_seed, theta_index=theta_index,
                      replicate=replicate, sweep_hash=sweep_hash)


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

def _quantile_stats(values: list[float]) -> dict:
    arr = np.asarray(values, dtype=np.float64)
    q1, med, q3 = np.percentile(arr, [25, 50, 75], method="midpoint")
    return {
        "count": arr.size,
        "mean": float(arr.mean()),
        "std": float(arr.std()),  # population std
        "min": float(arr.min()),
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "max": float(arr.max()),
    }


def aggregate(records: Iterable[SweepRecord]) -> list[dict]:
    """Per-theta box statistics of final-iteration modularity and smax ratio.

    Expects exactly one final-iteration record per (theta, replicate) over
    the full cross product; any gap is an error naming the missing cell.
    """
    records = list(records)
    if not records:
        raise AggregationError("no records to aggregate")
    final_iter = max(rec.iteration for rec in records)
    final = {(rec.theta, rec.replicate): rec
             for rec in records if rec.iteration == final_iter}
    thetas = sorted({rec.theta for rec in records})
    reps = sorted({rec.replicate for rec in records})
    for t in thetas:
        for r in reps:
            if (t, r) not in final:
                raise AggregationError(
                    f"missing final-iteration record for theta={t}, replicate={r}")
    rows = []
    for t in thetas:
        cells = [final[(t, r)] for r in reps]
        if any(c.q_modularity is None for c in cells):
            raise AggregationError(f"modularity undefined for some runs at theta={t}")
        for metric, values in (
                ("q_modularity", [c.q_modularity for c in cells]),
                ("smax_ratio", [c.smax_ratio for c in cells])):
            row = {"theta": t, "metric": metric}
            row.update(_quantile_stats(values))
            rows.append(row)
    return rows


def aggregate_to_csv(rows: list[dict]) -> str:
    lines = [",".join(AGGREGATE_COLUMNS)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in AGGREGATE_COLUMNS))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Sweep orchestration
# ---------------------------------------------------------------------------

def run_sweep(spec: SweepSpec) -> SweepSummary:
    """Execute the full sweep and write the artifact tree.

    Deterministic given (spec, master seed): the same spec yields
    byte-identical artifacts at any parallelism level.
    """
    spec.validate()
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if any(out.iterdir()):
        raise FileExistsError(f"output directory {out} is not empty")
    probe = out / ".write_probe"
    probe.write_text("")  # fail before any run if the directory is unwritable
    probe.unlink()

    resolved = sweep_spec_to_dict(spec)
    sweep_hash = config_hash(resolved)
    cells = [(ti, rep) for ti in range(len(spec.theta_grid))
             for rep in range(spec.replicates)]

    t0 = time.perf_counter()
    results: dict[tuple[int, int], list[SweepRecord]] = {}
    if spec.parallelism == 1:
        for ti, rep in cells:
            try:
                results[(ti, rep)] = _run_cell(spec, ti, rep, sweep_hash)
            except Exception as exc:
                raise RuntimeError(
                    f"run failed at theta={spec.theta_grid[ti]}, replicate={rep}: {exc}"
                ) from exc
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
            futures = {pool.submit(_run_cell, spec, ti, rep, sweep_hash): (ti, rep)
                       for ti, rep in cells}
            for fut in concurrent.futures.as_completed(futures):
                ti, rep = futures[fut]
                try:
                    results[(ti, rep)] = fut.result()
                except Exception as exc:
                    raise RuntimeError(
                        f"run failed at theta={spec.theta_grid[ti]}, replicate={rep}: {exc}"
                    ) from exc
    total_ms = int((time.perf_counter() - t0) * 1000)

    all_records = [rec for key in sorted(results) for rec in results[key]]
    final_records = [rec for rec in all_records if rec.iteration == spec.base.iterations]
    agg_rows = aggregate(final_records)
    (out / AGGREGATE_NAME).write_text(aggregate_to_csv(agg_rows))

    artifact_entries = []
    timings = {}
    for ti, rep in sorted(results):
        theta = spec.theta_grid[ti]
        rel = Path(f"theta_{format_theta(theta)}") / f"rep_{rep}"
        run_info = json.loads((out / rel / "run.json").read_text())
        for item in run_info["artifacts"]:
            artifact_entries.append({
                "path": (rel / item["path"]).as_posix(),
                "sha256": item["sha256"],
                "theta": theta,
                "replicate": rep,
            })
        artifact_entries.append({
            "path": (rel / "run.json").as_posix(),
            "sha256": _sha256_file(out / rel / "run.json"),
            "theta": theta,
            "replicate": rep,
        })
        timings[f"{format_theta(theta)}/{rep}"] = results[(ti, rep)][-1].wall_time_ms
    artifact_entries.append({
        "path": AGGREGATE_NAME,
        "sha256": _sha256_file(out / AGGREGATE_NAME),
        "theta": None,
        "replicate": None,
    })
    artifact_entries.sort(key=lambda e: e["path"])

    manifest = {
        "format_version": 1,
        "config": resolved,
        "config_hash": sweep_hash,
        "artifacts": artifact_entries,
        "aggregate_path": AGGREGATE_NAME,
        "execution": {
            "parallelism": spec.parallelism,
            "total_wall_time_ms": total_ms,
            "cell_wall_time_ms": timings,
        },
    }
    manifest_path = out / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return SweepSummary(output_dir=out, manifest_path=manifest_path,
                        records=all_records, aggregate_rows=agg_rows)


# ---------------------------------------------------------------------------
# Post-hoc verification
# ---------------------------------------------------------------------------

def parse_series_csv(text: str) -> list[SweepRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    if tuple(header) != SERIES_COLUMNS:
        raise IntegrityError(f"unexpected series.csv columns: {header}")
    records = []
    for ln in lines[1:]:
        f = ln.split(",")
        records.append(SweepRecord(
            theta=float(f[0]), replicate=int(f[1]), iteration=int(f[2]),
            q_modularity=float(f[6]) if f[6] else None,
            community_flag=(f[7] == "1") if f[7] else None,
            smax_ratio=float(f[8]) if f[8] else None,
            action_counts=(int(f[3]), int(f[4]), int(f[5])),
        ))
    return records


def analyze_run(run_dir: Path) -> dict:
    """Verify a run directory: artifact hashes, then recompute the final
    metrics from the stored graph and states and compare with series.csv.

    Returns a report dict; raises IntegrityError on hash or value mismatch.
    """
    run_dir = Path(run_dir)
    info = json.loads((run_dir / "run.json").read_text())
    if config_hash(info["config"]) != info["config_hash"]:
        raise IntegrityError(f"{run_dir}: config echo does not match config_hash")
    for item in info["artifacts"]:
        path = run_dir / item["path"]
        if not path.exists():
            raise IntegrityError(f"{run_dir}: missing artifact {item['path']}")
        if _sha256_file(path) != item["sha256"]:
            raise IntegrityError(f"{run_dir}: artifact hash mismatch for {item['path']}")

    g = from_edge_text((run_dir / "final_edges.txt").read_text())
    states = states_from_csv((run_dir / "final_states.csv").read_text())
    final_iter = info["final_iteration"]
    series = parse_series_csv((run_dir / "series.csv").read_text())
    stored = next(r for r in reversed(series) if r.iteration == final_iter)

    if g.edge_count > 0:
        det_seed = seeding.detection_seed(info["seeds"]["base"], final_iter)
        q = modularity(g, detect_communities(g, det_seed))
    else:
        q = None
    smax = state_groups(states).ratio
    report = {
        "run_dir": str(run_dir),
        "final_iteration": final_iter,
        "stored_q": stored.q_modularity,
        "recomputed_q": q,
        "stored_smax": stored.smax_ratio,
        "recomputed_smax": smax,
        "hashes_ok": True,
    }
    if stored.q_modularity != q or stored.smax_ratio != smax:
        raise IntegrityError(
            f"{run_dir}: recomputed metrics disagree with series.csv: {report}")
    return report
