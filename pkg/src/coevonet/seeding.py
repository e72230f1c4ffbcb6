"""Reproducible seed derivation for sweeps and runs.

A sweep has one master seed. Every (theta_index, replicate) cell, and every
role inside a cell (graph generation, dynamics, community detection), gets
its own 64-bit seed derived by SplitMix64 mixing. Derived seeds depend only
on the master seed and the integer components, so extending a theta grid or
adding replicates never shifts the streams of existing cells.

Mixing constants are the standard SplitMix64 finalizer constants
(Steele, Lea & Flood): 0x9E3779B97F4A7C15, 0xBF58476D1CE4E5B9,
0x94D049BB133111EB.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

# Role tags for the per-cell sub-seeds. A single run started from the CLI
# uses the same derivation with its --seed in place of the cell seed.
ROLE_GRAPH = 1
ROLE_DYNAMICS = 2
ROLE_DETECTION = 3


def splitmix64(x: int) -> int:
    """One SplitMix64 step: advance by the golden gamma and finalize."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(master: int, *components: int) -> int:
    """Fold integer components into a master seed, one SplitMix64 round each."""
    h = master & _MASK64
    for c in components:
        h = splitmix64(h ^ splitmix64(c & _MASK64))
    return h


def cell_seed(master: int, theta_index: int, replicate: int) -> int:
    """Seed of one (theta, replicate) sweep cell."""
    return mix_seed(master, theta_index, replicate)


def graph_seed(base: int) -> int:
    """Seed for graph generation within a cell (or single run)."""
    return mix_seed(base, ROLE_GRAPH)


def dynamics_seed(base: int) -> int:
    """Seed for the state/rewiring stream within a cell (or single run)."""
    return mix_seed(base, ROLE_DYNAMICS)


def detection_seed(base: int, iteration: int) -> int:
    """Seed for community detection at a given iteration of a run."""
    return mix_seed(base, ROLE_DETECTION, iteration)
