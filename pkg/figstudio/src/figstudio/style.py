"""Matplotlib style presets.

Presets pin figure geometry, fonts, and dpi so the same inputs render to
pixel-identical files. Colors are assigned in theta order from a fixed
colormap, keeping figures comparable across sweeps.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")  # headless, deterministic raster output

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
from matplotlib import cm  # noqa: E402

_COMMON = {
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "figure.autolayout": False,
    "font.family": "DejaVu Sans",
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
}

PRESETS: dict[str, dict] = {
    "default": {
        **_COMMON,
        "figure.figsize": (7.0, 4.6),
        "font.size": 10,
        "legend.fontsize": 8,
    },
    "paper": {
        **_COMMON,
        "figure.figsize": (6.2, 4.0),
        "font.size": 9,
        "legend.fontsize": 7,
        "axes.labelsize": 10,
        "axes.titlesize": 10,
    },
}


def apply_style(name: str) -> None:
    if name not in PRESETS:
        raise ValueError(f"unknown style preset {name!r}; "
                         f"choose from {sorted(PRESETS)}")
    plt.rcParams.update(PRESETS[name])


def theta_color(theta: float):
    """Fixed theta -> color mapping (viridis over [0, 1])."""
    return cm.viridis(0.9 * float(theta))
