"""The coevolution engine: per-node activation and full-run sweeps.

Each activation splits a node's neighbors into homogeneous and heterogeneous
sets by a similarity threshold. A homogeneous majority (ties included) pulls
the node's state toward the homogeneous mean; a heterogeneous majority cuts
one heterogeneous tie by roulette and rewires it to a random non-neighbor.
One iteration is a full sweep over a fresh random permutation of the nodes,
with asynchronous in-place effects.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .graph import ConfigError, GeneratorSpec, Graph, generate

# How the roulette weights heterogeneous neighbors: "dissimilarity" cuts the
# most dissimilar tie preferentially, "similarity" the least dissimilar.
WEIGHT_DISSIMILARITY = "dissimilarity"
WEIGHT_SIMILARITY = "similarity"


class ActionTaken(IntEnum):
    STATE_UPDATED = _kernels.ACT_STATE_UPDATED
    REWIRED = _kernels.ACT_REWIRED
    SKIPPED = _kernels.ACT_SKIPPED


@dataclass
class NeighborPartition:
    """A node's neighbors split by the threshold test."""

    homogeneous: list[int]
    heterogeneous: list[int]


@dataclass(frozen=True)
class SimulationConfig:
    """All parameters of one run. `seed` drives states and activation order;
    the graph is drawn from `generator.seed`."""

    generator: GeneratorSpec
    theta: float
    seed: int
    mu: float = 0.5
    iterations: int = 1000
    state_dims: int = 4
    state_low: float = 1.0
    state_high: float = 10.0
    snapshot_iters: tuple[int, ...] = ()
    roulette_weight: str = WEIGHT_DISSIMILARITY

    def validate(self) -> None:
        self.generator.validate()
        if not 0.0 <= self.theta <= 1.0:
            raise ConfigError(f"theta must be in [0, 1], got {self.theta}")
        if not 0.0 < self.mu <= 0.5:
            raise ConfigError(f"mu must be in (0, 0.5], got {self.mu}")
        if self.iterations < 1:
            raise ConfigError(f"iterations must be positive, got {self.iterations}")
        if self.state_dims < 1:
            raise ConfigError(f"state_dims must be positive, got {self.state_dims}")
        if not self.state_low < self.state_high:
            raise ConfigError(
                f"state range must satisfy low < high, got [{self.state_low}, {self.state_high}]")
        if self.roulette_weight not in (WEIGHT_DISSIMILARITY, WEIGHT_SIMILARITY):
            raise ConfigError(f"unknown roulette weight mode: {self.roulette_weight!r}")
        if any(t < 0 or t > self.iterations for t in self.snapshot_iters):
            raise ConfigError("snapshot iterations must lie in [0, iterations]")


# ---------------------------------------------------------------------------
# Elementary operations (thin wrappers over the jitted kernels)
# ---------------------------------------------------------------------------

def state_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean distance between two state vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"state dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def similarity(a: np.ndarray, b: np.ndarray) -> float:
    """1 / (1 + distance): 1 for identical states, decreasing with distance."""
    return 1.0 / (1.0 + state_distance(a, b))


def categorize(i: int, g: Graph, states: np.ndarray, theta: float) -> NeighborPartition:
    """Split node i's neighbors: similarity >= theta is homogeneous."""
    sims = _kernels.neighbor_similarities(i, g.nbr, g.deg, states)
    nbrs = g.neighbors(i)
    hom = [int(nbrs[t]) for t in range(len(sims)) if sims[t] >= theta]
    het = [int(nbrs[t]) for t in range(len(sims)) if sims[t] < theta]
    return NeighborPartition(homogeneous=hom, heterogeneous=het)


def ca_update(i: int, part: NeighborPartition, states: np.ndarray, mu: float) -> None:
    """Pull node i's state toward the mean of its homogeneous neighbors.

    The mean excludes node i itself. Only row i of `states` changes.
    """
    if not part.homogeneous:
        raise ValueError("ca_update requires a non-empty homogeneous set")
    members = np.asarray(part.homogeneous, dtype=np.int32)
    _kernels.pull_toward_group_mean(i, members, states, mu)


def su_rewire(i: int, part: NeighborPartition, g: Graph, states: np.ndarray,
              rng: np.random.Generator,
              weight_mode: str = WEIGHT_DISSIMILARITY) -> bool:
    """Cut one heterogeneous neighbor of i by roulette, rewire to a random
    non-neighbor. Returns False (graph unchanged) when no valid target exists.
    """
    if not part.heterogeneous:
        raise ValueError("su_rewire requires a non-empty heterogeneous set")
    victims = np.asarray(part.heterogeneous, dtype=np.int32)
    sims = np.array([similarity(states[i], states[int(v)]) for v in victims])
    weights = (1.0 - sims) if weight_mode == WEIGHT_DISSIMILARITY else sims
    target = _kernels.rewire_to_random_target(i, victims, weights, g.nbr, g.deg, rng)
    return target >= 0


def step_node(i: int, g: Graph, states: np.ndarray, cfg: SimulationConfig,
              rng: np.random.Generator) -> ActionTaken:
    """One activation of node i with in-place effects on graph and states."""
    code = _kernels.step_node(
        i, g.nbr, g.deg, states, cfg.theta, cfg.mu,
        cfg.roulette_weight == WEIGHT_DISSIMILARITY, rng)
    return ActionTaken(code)


# ---------------------------------------------------------------------------
# Full runs
# ---------------------------------------------------------------------------

def sample_initial_states(cfg: SimulationConfig, rng: np.random.Generator) -> np.ndarray:
    """N x r matrix of i.i.d. U[state_low, state_high] entries."""
    return rng.uniform(cfg.state_low, cfg.state_high,
                       (cfg.generator.n, cfg.state_dims))


@dataclass
class RunResult:
    """Final graph and states plus per-sweep activation counts.

    `action_counts[t]` holds (state_updated, rewired, skipped) for sweep t;
    row 0 is all zeros (no activations happen at t=0).
    """

    graph: Graph
    states: np.ndarray
    action_counts: np.ndarray


Observer = Callable[[int, Graph, np.ndarray], None]


def run(cfg: SimulationConfig, observers: Sequence[Observer] = (),
        validate: bool = True) -> RunResult:
    """Generate the graph and states, then perform cfg.iterations full sweeps.

    Observers fire with (iteration, graph, states) at t=0 and after every
    sweep. Fully deterministic given the config. `validate=False` skips
    config validation so tests can probe out-of-band parameter values.
    """
    if validate:
        cfg.validate()
    g = generate(cfg.generator)
    rng = np.random.default_rng(cfg.seed)
    states = sample_initial_states(cfg, rng)
    counts = np.zeros((cfg.iterations + 1, 3), dtype=np.int64)
    dissim = cfg.roulette_weight == WEIGHT_DISSIMILARITY
    for obs in observers:
        obs(0, g, states)
    for it in range(1, cfg.iterations + 1):
        order = rng.permutation(cfg.generator.n)
        counts[it] = _kernels.run_sweep(
            order, g.nbr, g.deg, states, cfg.theta, cfg.mu, dissim, rng)
        for obs in observers:
            obs(it, g, states)
    if not np.all(np.isfinite(states)):
        raise RuntimeError("non-finite state values after run")
    return RunResult(graph=g, states=states, action_counts=counts)


# ---------------------------------------------------------------------------
# State CSV round trip (node,a_1,...,a_r)
# ---------------------------------------------------------------------------

def states_to_csv(states: np.ndarray) -> str:
    n, r = states.shape
    lines = ["node," + ",".join(f"a_{k + 1}" for k in range(r))]
    for i in range(n):
        lines.append(f"{i}," + ",".join(repr(float(x)) for x in states[i]))
    return "\n".join(lines) + "\n"


def states_from_csv(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        rows.append([float(x) for x in parts[1:]])
    return np.array(rows, dtype=np.float64)
