"""Jitted inner loops shared by the public operations and the sweep engine.

These functions are the single source of truth for per-activation behavior:
`dynamics.py` exposes thin wrappers around them, and `run_sweep` composes
them for full sweeps. The graph is represented as a padded int32 neighbor
matrix plus a degree vector (see `graph.Graph`); all randomness comes from
the numpy Generator passed in, consumed in a fixed order.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Action codes returned by step_node (mirrored by dynamics.ActionTaken).
ACT_STATE_UPDATED = 0
ACT_REWIRED = 1
ACT_SKIPPED = 2


@njit(cache=True)
def neighbor_similarities(i, nbr, deg, states):
    """Similarity of node i to each of its neighbors, in adjacency order."""
    k = deg[i]
    r = states.shape[1]
    sims = np.empty(k, np.float64)
    for t in range(k):
        j = nbr[i, t]
        dd = 0.0
        for q in range(r):
            x = states[i, q] - states[j, q]
            dd += x * x
        sims[t] = 1.0 / (1.0 + np.sqrt(dd))
    return sims


@njit(cache=True)
def pull_toward_group_mean(i, members, states, mu):
    """Move node i's state toward the mean state of `members` by factor mu.

    The mean is over `members` only; node i itself never contributes.
    """
    r = states.shape[1]
    m = members.size
    for q in range(r):
        acc = 0.0
        for t in range(m):
            acc += states[members[t], q]
        states[i, q] += mu * (acc / m - states[i, q])


@njit(cache=True)
def graph_rewire(nbr, deg, u, old, new):
    """Replace edge (u, old) with (u, new) in the padded adjacency.

    Removal shifts the remainder of the row left (insertion order is
    preserved); the new neighbor is appended at the end of the row.
    Preconditions are the caller's responsibility.
    """
    du = deg[u]
    pos = -1
    for t in range(du):
        if nbr[u, t] == old:
            pos = t
            break
    for t in range(pos, du - 1):
        nbr[u, t] = nbr[u, t + 1]
    nbr[u, du - 1] = new

    do = deg[old]
    pos = -1
    for t in range(do):
        if nbr[old, t] == u:
            pos = t
            break
    for t in range(pos, do - 1):
        nbr[old, t] = nbr[old, t + 1]
    deg[old] = do - 1

    deg[new] += 1
    nbr[new, deg[new] - 1] = u


@njit(cache=True)
def roulette_pick(weights, rng):
    """Index sampled proportionally to `weights` (cumulative scan).

    Falls back to a uniform pick if the total weight is zero; with the
    weight definitions used by the engine that branch is unreachable.
    """
    total = 0.0
    for t in range(weights.size):
        total += weights[t]
    if total <= 0.0:
        return int(rng.integers(0, weights.size))
    u = rng.random() * total
    c = 0.0
    for t in range(weights.size):
        c += weights[t]
        if c >= u:
            return t
    return weights.size - 1


@njit(cache=True)
def rewire_to_random_target(i, victims, weights, nbr, deg, rng):
    """Cut one roulette-selected neighbor of i, reattach to a random non-neighbor.

    The target is uniform over nodes that are neither i nor current neighbors
    of i, found by rejection sampling. Returns the target id, or -1 (graph
    untouched) when node i is already adjacent to every other node.
    """
    n = nbr.shape[0]
    if deg[i] >= n - 1:
        return -1
    victim = victims[roulette_pick(weights, rng)]
    while True:
        t = int(rng.integers(0, n))
        if t == i:
            continue
        hit = False
        for s in range(deg[i]):
            if nbr[i, s] == t:
                hit = True
                break
        if not hit:
            graph_rewire(nbr, deg, i, victim, t)
            return t


@njit(cache=True)
def step_node(i, nbr, deg, states, theta, mu, dissimilarity_weights, rng):
    """One activation of node i; returns an ACT_* code.

    Neighbors with similarity >= theta form the homogeneous set. If they are
    at least as many as the heterogeneous ones, the node's state is pulled
    toward their mean; otherwise one heterogeneous neighbor is cut by
    roulette and the edge rewired to a random non-neighbor.
    """
    k = deg[i]
    if k == 0:
        return ACT_SKIPPED
    sims = neighbor_similarities(i, nbr, deg, states)
    nhom = 0
    for t in range(k):
        if sims[t] >= theta:
            nhom += 1
    if nhom >= k - nhom:
        if nhom == 0:
            # Unreachable for k > 0 (nhom >= k - nhom forces nhom > 0); kept
            # so every activation still maps to exactly one action.
            return ACT_SKIPPED
        members = np.empty(nhom, np.int32)
        p = 0
        for t in range(k):
            if sims[t] >= theta:
                members[p] = nbr[i, t]
                p += 1
        pull_toward_group_mean(i, members, states, mu)
        return ACT_STATE_UPDATED
    nhet = k - nhom
    victims = np.empty(nhet, np.int32)
    weights = np.empty(nhet, np.float64)
    p = 0
    for t in range(k):
        if sims[t] < theta:
            victims[p] = nbr[i, t]
            if dissimilarity_weights:
                weights[p] = 1.0 - sims[t]
            else:
                weights[p] = sims[t]
            p += 1
    if rewire_to_random_target(i, victims, weights, nbr, deg, rng) >= 0:
        return ACT_REWIRED
    return ACT_SKIPPED


@njit(cache=True)
def run_sweep(order, nbr, deg, states, theta, mu, dissimilarity_weights, rng):
    """Activate every node once, in the given order, with in-place effects.

    Returns the (state_updated, rewired, skipped) activation counts.
    """
    updated = 0
    rewired = 0
    skipped = 0
    for oi in range(order.size):
        a = step_node(order[oi], nbr, deg, states, theta, mu,
                      dissimilarity_weights, rng)
        if a == ACT_STATE_UPDATED:
            updated += 1
        elif a == ACT_REWIRED:
            rewired += 1
        else:
            skipped += 1
    return updated, rewired, skipped
