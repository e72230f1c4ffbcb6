"""Undirected simple-graph storage and random-graph generators.

The adjacency lives in a fixed-capacity int32 matrix plus a degree vector so
the jitted simulation kernels can mutate it without allocating. Row i holds
the neighbors of node i in insertion order; membership tests are O(degree)
scans, which is cheap at the degree scales this model runs at.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._kernels import graph_rewire


class ConfigError(ValueError):
    """A user-supplied parameter is invalid."""


class NetworkKind(str, Enum):
    ERDOS_RENYI = "er"
    BARABASI_ALBERT = "ba"


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one random-graph draw.

    `p_c` is the ER link probability; `m_i` the number of edges each new BA
    node attaches. Only the field matching `kind` is used.
    """

    kind: NetworkKind
    n: int
    p_c: float = 0.0
    m_i: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigError(f"node count must be positive, got {self.n}")
        if self.kind == NetworkKind.ERDOS_RENYI:
            if not 0.0 <= self.p_c <= 1.0:
                raise ConfigError(f"link probability must be in [0, 1], got {self.p_c}")
        elif self.kind == NetworkKind.BARABASI_ALBERT:
            if self.m_i < 1 or self.m_i >= self.n:
                raise ConfigError(
                    f"links per new node must satisfy 1 <= m < n, got m={self.m_i}, n={self.n}")
        else:
            raise ConfigError(f"unknown network kind: {self.kind!r}")


class Graph:
    """Mutable undirected simple graph on nodes 0..n-1.

    Invariants: no self-loops, no duplicate edges, symmetric adjacency, and
    edge_count equal to half the sum of degrees. Rewiring conserves the edge
    count by construction.
    """

    __slots__ = ("node_count", "edge_count", "deg", "nbr")

    def __init__(self, node_count: int):
        if node_count < 1:
            raise ConfigError(f"node count must be positive, got {node_count}")
        self.node_count = node_count
        self.edge_count = 0
        self.deg = np.zeros(node_count, dtype=np.int32)
        self.nbr = np.zeros((node_count, max(node_count - 1, 1)), dtype=np.int32)

    def neighbors(self, u: int) -> np.ndarray:
        """Neighbors of u in insertion order (a read-only view)."""
        return self.nbr[u, : self.deg[u]]

    def degree(self, u: int) -> int:
        return int(self.deg[u])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.nbr[u]
        for t in range(self.deg[u]):
            if row[t] == v:
                return True
        return False

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop rejected: ({u}, {v})")
        if self.has_edge(u, v):
            raise ValueError(f"duplicate edge rejected: ({u}, {v})")
        self.nbr[u, self.deg[u]] = v
        self.deg[u] += 1
        self.nbr[v, self.deg[v]] = u
        self.deg[v] += 1
        self.edge_count += 1

    def rewire(self, u: int, old: int, new: int) -> None:
        """Replace edge (u, old) with (u, new); edge count is conserved.

        Preconditions are enforced here because a violation means a logic
        error in the caller, never a recoverable condition.
        """
        if not self.has_edge(u, old):
            raise ValueError(f"rewire: edge ({u}, {old}) does not exist")
        if new == u:
            raise ValueError(f"rewire: target equals source node {u}")
        if self.has_edge(u, new):
            raise ValueError(f"rewire: edge ({u}, {new}) already exists")
        graph_rewire(self.nbr, self.deg, u, old, new)

    def copy(self) -> "Graph":
        g = Graph(self.node_count)
        g.edge_count = self.edge_count
        g.deg = self.deg.copy()
        g.nbr = self.nbr.copy()
        return g

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, sorted ascending."""
        out = []
        for u in range(self.node_count):
            row = self.nbr[u]
            for t in range(self.deg[u]):
                v = int(row[t])
                if u < v:
                    out.append((u, v))
        out.sort()
        return out

    def degrees(self) -> np.ndarray:
        return self.deg[: self.node_count].astype(np.int64)

    def check_invariants(self) -> None:
        """Full-scan structural check; raises AssertionError on violation."""
        total = 0
        for u in range(self.node_count):
            seen = set()
            for t in range(self.deg[u]):
                v = int(self.nbr[u, t])
                assert v != u, f"self-loop at node {u}"
                assert 0 <= v < self.node_count, f"neighbor {v} out of range"
                assert v not in seen, f"duplicate neighbor {v} of node {u}"
                seen.add(v)
                assert self.has_edge(v, u), f"asymmetric edge ({u}, {v})"
            total += self.deg[u]
        assert total == 2 * self.edge_count, (
            f"degree sum {total} != 2 * edge_count {2 * self.edge_count}")


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def generate_er(spec: GeneratorSpec) -> Graph:
    """G(n, p): every unordered pair is an edge independently with prob p_c."""
    if spec.kind != NetworkKind.ERDOS_RENYI:
        raise ConfigError(f"generate_er called with kind {spec.kind!r}")
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    g = Graph(spec.n)
    if spec.n < 2 or spec.p_c == 0.0:
        return g
    iu, ju = np.triu_indices(spec.n, k=1)
    mask = rng.random(iu.size) < spec.p_c
    for u, v in zip(iu[mask], ju[mask]):
        g.add_edge(int(u), int(v))
    return g


def generate_ba(spec: GeneratorSpec) -> Graph:
    """Preferential attachment from a fully connected core of m_i nodes.

    Each new node draws attachment targets proportionally to current degree
    (repeated-node list), rejecting duplicates until m_i distinct targets
    are found.
    """
    if spec.kind != NetworkKind.BARABASI_ALBERT:
        raise ConfigError(f"generate_ba called with kind {spec.kind!r}")
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n, m = spec.n, spec.m_i
    g = Graph(n)
    for u in range(m):
        for v in range(u + 1, m):
            g.add_edge(u, v)
    # Node id repeated once per unit of degree; uniform draws from this list
    # implement degree-proportional attachment.
    repeated: list[int] = []
    for u in range(m):
        repeated.extend([u] * (m - 1))
    if m == 1:
        # Degenerate core: a single node with degree 0 can never be drawn
        # from the repeated list, so seed it explicitly.
        repeated.append(0)
    for new in range(m, n):
        targets: list[int] = []
        chosen: set[int] = set()
        while len(targets) < m:
            cand = repeated[int(rng.integers(0, len(repeated)))]
            if cand not in chosen:
                chosen.add(cand)
                targets.append(cand)
        for t in targets:
            g.add_edge(new, t)
        repeated.extend(targets)
        repeated.extend([new] * m)
        if m == 1 and new == m:
            # Remove the bootstrap entry so node 0 is not over-weighted.
            repeated.remove(0)
    return g


def generate(spec: GeneratorSpec) -> Graph:
    if spec.kind == NetworkKind.ERDOS_RENYI:
        return generate_er(spec)
    if spec.kind == NetworkKind.BARABASI_ALBERT:
        return generate_ba(spec)
    raise ConfigError(f"unknown network kind: {spec.kind!r}")


# ---------------------------------------------------------------------------
# Canonical edge-list serialization
# ---------------------------------------------------------------------------

def to_edge_text(g: Graph) -> str:
    """Canonical text form: header line, then 'u v' per edge, u < v, sorted."""
    lines = [f"# nodes={g.node_count} edges={g.edge_count}"]
    for u, v in g.edges():
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def from_edge_text(text: str) -> Graph:
    """Parse the canonical edge-list format produced by `to_edge_text`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("edge list missing '# nodes=N edges=M' header")
    header = lines[0].lstrip("#").split()
    meta = dict(item.split("=") for item in header)
    g = Graph(int(meta["nodes"]))
    for ln in lines[1:]:
        u, v = ln.split()
        g.add_edge(int(u), int(v))
    if g.edge_count != int(meta["edges"]):
        raise ValueError(
            f"edge list header claims {meta['edges']} edges, found {g.edge_count}")
    return g
