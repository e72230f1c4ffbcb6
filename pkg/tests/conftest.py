"""Shared fixtures and independent oracles."""

from __future__ import annotations

import numpy as np
import pytest

from coevonet import Graph


def modularity_oracle(g: Graph, labels) -> float:
    """Literal double sum of the modularity definition over ordered pairs.

    Q = (1/2Y) * sum_ij (a_ij - g_i g_j / 2Y) * [C_i == C_j], including i=j.
    Deliberately O(N^2); kept independent of the production implementation.
    """
    labels = np.asarray(labels)
    n = g.node_count
    a = np.zeros((n, n))
    for u, v in g.edges():
        a[u, v] = 1.0
        a[v, u] = 1.0
    deg = a.sum(axis=1)
    two_y = 2.0 * g.edge_count
    q = 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] == labels[j]:
                q += a[i, j] - deg[i] * deg[j] / two_y
    return q / two_y


def graph_from_edges(n: int, edges) -> Graph:
    g = Graph(n)
    for u, v in edges:
        g.add_edge(u, v)
    return g


def clique_edges(nodes) -> list[tuple[int, int]]:
    nodes = list(nodes)
    return [(nodes[i], nodes[j]) for i in range(len(nodes))
            for j in range(i + 1, len(nodes))]


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.node_count
    comps = []
    for s in range(g.node_count):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in g.neighbors(u):
                v = int(v)
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(comp)
    return comps


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
