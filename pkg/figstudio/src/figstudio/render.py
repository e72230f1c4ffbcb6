"""The five figure renderers for coevonet sweep artifacts.

Every renderer reads hash-verified files only, never recomputes metrics, and
writes a deterministic PNG (fixed geometry and dpi, config hash embedded in
the PNG metadata and a caption footer). Rendering the same inputs twice
yields byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .manifest import (ArtifactError, SweepArtifacts, parse_aggregate,
                       parse_degrees, parse_series, parse_sim_matrix)
from .style import apply_style, theta_color

import matplotlib.pyplot as plt  # noqa: E402  (style module pins the backend)

FIGURES = ("modularity-trajectories", "modularity-box", "degree-fits",
           "similarity-grid", "smax-by-theta")

# How many thetas the degree-fits overlay picks when none is requested.
DEGREE_FIT_THETA_COUNT = 5


@dataclass
class FigureJob:
    figure: str
    input_dir: Path
    output_path: Path
    style: str = "default"
    theta: float | None = None      # degree-fits / similarity-grid selection
    replicate: int | None = None


def render(job: FigureJob) -> dict:
    """Render one figure job; returns a summary of what was drawn.

    The input directory is read-only; the only file written is
    job.output_path (PNG).
    """
    if job.figure not in FIGURES:
        raise ValueError(f"unknown figure {job.figure!r}; choose from {FIGURES}")
    out = Path(job.output_path)
    if out.suffix.lower() != ".png":
        raise ValueError("output must be a .png file (deterministic raster)")
    apply_style(job.style)
    art = SweepArtifacts(Path(job.input_dir))
    builder = {
        "modularity-trajectories": _modularity_trajectories,
        "modularity-box": _modularity_box,
        "degree-fits": _degree_fits,
        "similarity-grid": _similarity_grid,
        "smax-by-theta": _smax_by_theta,
    }[job.figure]
    fig, extras = builder(art, job)
    fig.text(0.995, 0.005, f"cfg {art.config_hash[:12]}", fontsize=5,
             ha="right", va="bottom", alpha=0.6)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, metadata={
        "Software": "figstudio",
        "Comment": f"sweep-config-hash={art.config_hash}",
    })
    plt.close(fig)
    return {"figure": job.figure, "out": str(out),
            "config_hash": art.config_hash, **extras}


# ---------------------------------------------------------------------------
# Individual figures
# ---------------------------------------------------------------------------

def _modularity_trajectories(art: SweepArtifacts, job: FigureJob):
    """Mean modularity over iterations, one line per theta."""
    fig, ax = plt.subplots()
    by_theta: dict[float, dict[int, list[float]]] = {}
    for theta, rep, rel in art.run_paths("series"):
        series = parse_series(art.verified_text(rel))
        mask = ~np.isnan(series["q_modularity"])
        for it, q in zip(series["iteration"][mask], series["q_modularity"][mask]):
            by_theta.setdefault(theta, {}).setdefault(int(it), []).append(float(q))
    for theta in sorted(by_theta):
        iters = sorted(by_theta[theta])
        means = [float(np.mean(by_theta[theta][it])) for it in iters]
        ax.plot(iters, means, color=theta_color(theta), label=f"{theta:g}")
    ax.set_xlabel("iteration")
    ax.set_ylabel("modularity Q")
    ax.set_title("Community structure over the run (replicate mean per threshold)")
    ax.legend(title="threshold", ncol=3, loc="upper left", framealpha=0.7)
    return fig, {"series": len(by_theta)}


def _modularity_box(art: SweepArtifacts, job: FigureJob):
    """Per-theta box statistics of final modularity, from aggregate.csv."""
    rows = [r for r in parse_aggregate(art.verified_text("aggregate.csv"))
            if r["metric"] == "q_modularity"]
    rows.sort(key=lambda r: r["theta"])
    stats = [{
        "label": f"{r['theta']:g}",
        "med": r["median"], "q1": r["q1"], "q3": r["q3"],
        "whislo": r["min"], "whishi": r["max"],
    } for r in rows]
    fig, ax = plt.subplots()
    ax.bxp(stats, showfliers=False)
    ax.set_xlabel("similarity threshold")
    ax.set_ylabel("final modularity Q")
    ax.set_title("Final community structure by threshold")
    ax.tick_params(axis="x", rotation=60)
    return fig, {"series": len(stats), "box_stats": stats}


def _lognormal_ccdf(k: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    z = (np.log(k) - mu) / (sigma * math.sqrt(2.0))
    return 0.5 * (1.0 - np.vectorize(math.erf)(z))


def _degree_fits(art: SweepArtifacts, job: FigureJob):
    """Log-log degree CCDF with the stored power-law and lognormal overlays.

    One replicate per theta (replicate 0 unless requested); overlay curves
    come from the stored fit parameters, nothing is re-fit here.
    """
    rep = 0 if job.replicate is None else job.replicate
    edges = {t: p for t, r, p in art.run_paths("edges") if r == rep}
    fits = {t: p for t, r, p in art.run_paths("fit") if r == rep}
    if job.theta is not None:
        if job.theta not in edges:
            raise ArtifactError(f"no stored run for theta={job.theta:g}")
        chosen = [job.theta]
    else:
        thetas = sorted(edges)
        idx = np.unique(np.linspace(0, len(thetas) - 1,
                                    min(DEGREE_FIT_THETA_COUNT, len(thetas))).astype(int))
        chosen = [thetas[i] for i in idx]
    fig, ax = plt.subplots()
    drawn = 0
    for theta in chosen:
        deg = parse_degrees(art.verified_text(edges[theta]))
        deg = deg[deg >= 1]
        ks = np.unique(deg)
        ccdf = np.array([(deg >= k).mean() for k in ks])
        color = theta_color(theta)
        ax.loglog(ks, ccdf, "o", ms=3.5, color=color, label=f"{theta:g}")
        fit = json.loads(art.verified_text(fits[theta]))
        if fit.get("status") == "ok":
            grid = np.linspace(ks.min(), ks.max(), 200)
            pl = fit["power_law"]["params"]
            tail = grid[grid >= pl["x_min"]]
            scale = (deg >= pl["x_min"]).mean()
            ax.loglog(tail, scale * (tail / pl["x_min"]) ** (1.0 - pl["alpha"]),
                      "-", color=color, alpha=0.8)
            ln = fit["lognormal"]["params"]
            ax.loglog(grid, _lognormal_ccdf(grid, ln["mu_ln"], ln["sigma_ln"]),
                      "--", color=color, alpha=0.8)
        drawn += 1
    ax.set_xlabel("degree k")
    ax.set_ylabel("P(K >= k)")
    ax.set_title("Degree CCDF with power-law (solid) and lognormal (dashed) fits")
    ax.legend(title="threshold", loc="lower left")
    return fig, {"series": drawn}


def _similarity_grid(art: SweepArtifacts, job: FigureJob):
    """Tile the stored similarity-matrix snapshots of one run."""
    snaps = art.snapshot_paths(theta=job.theta, replicate=job.replicate)
    n_tiles = len(snaps)
    ncols = 3 if n_tiles >= 3 else n_tiles
    nrows = math.ceil(n_tiles / ncols)
    fig, axes = plt.subplots(nrows, ncols, squeeze=False,
                             figsize=(2.4 * ncols, 2.6 * nrows))
    im = None
    for ax in axes.flat:
        ax.set_axis_off()
    for (iteration, rel), ax in zip(snaps, axes.flat):
        mat = parse_sim_matrix(art.verified_bytes(rel))
        ax.set_axis_on()
        im = ax.imshow(mat, vmin=0.0, vmax=1.0, cmap="viridis",
                       interpolation="nearest")
        ax.set_title(f"iteration {iteration}", fontsize=8)
        ax.set_xticks([])
        ax.set_yticks([])
        ax.grid(False)
    fig.suptitle("State similarity matrix over the run", fontsize=10)
    fig.colorbar(im, ax=axes, shrink=0.8, label="similarity")

    # Tile pixel boxes (row0, row1, col0, col1) in the saved PNG, for
    # pixel-level checks; interior-shrunk to exclude spines.
    fig.canvas.draw()
    renderer = fig.canvas.get_renderer()
    height = fig.canvas.get_width_height()[1]
    boxes = []
    for (_, _), ax in zip(snaps, axes.flat):
        bb = ax.get_window_extent(renderer)
        boxes.append((int(height - bb.y1) + 4, int(height - bb.y0) - 4,
                      int(bb.x0) + 4, int(bb.x1) - 4))
    return fig, {"tiles": n_tiles, "tile_pixel_boxes": boxes}


def _smax_by_theta(art: SweepArtifacts, job: FigureJob):
    """Mean +- std of the final largest-state-group ratio per theta."""
    rows = [r for r in parse_aggregate(art.verified_text("aggregate.csv"))
            if r["metric"] == "smax_ratio"]
    rows.sort(key=lambda r: r["theta"])
    thetas = [r["theta"] for r in rows]
    means = [r["mean"] for r in rows]
    stds = [r["std"] for r in rows]
    fig, ax = plt.subplots()
    ax.errorbar(thetas, means, yerr=stds, fmt="o-", capsize=3,
                color=theta_color(0.5))
    ax.set_xlabel("similarity threshold")
    ax.set_ylabel("largest state group / N")
    ax.set_ylim(0.0, 1.05)
    ax.set_title("Final state-group concentration by threshold")
    return fig, {"series": 1, "points": len(rows)}
