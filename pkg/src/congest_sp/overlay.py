"""Sublinear-time approximate SSSP through a landmark overlay.

Random landmarks split every long shortest path into stretches of at most
``h`` hops.  A multi-source bounded-hop run from the landmarks gives the
weights of a virtual network on them.  After shortcutting that network
down to a small shortest-path diameter, the source's distances to all
landmarks are computed by running the bounded-hop algorithm on it, where
one virtual round is one global broadcast over a BFS tree.  Each node
then combines its own landmark estimates with the landmarks' distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import INF, DistanceTable, WeightedGraph, bfs_hops, hop_diameter
from .rounding import EstimateTable, default_eps, make_scale_family, multi_source_bounded_hop
from .shortcuts import k_smallest_edges, shortcuts_from_union
from .sim import BFSTree, Simulator, broadcast_all, build_bfs_tree

LANDMARK_STREAM = 31


@dataclass
class OverlayNetwork:
    """Virtual weighted graph on a set of landmark nodes.

    ``graph`` is indexed by position in ``members``.  ``estimates`` holds
    the bounded-hop run that produced the edge weights, so every base node
    still knows its estimate to every landmark.
    """

    members: list[int]
    graph: WeightedGraph
    h: int
    eps: Fraction
    estimates: EstimateTable | None = None
    spd_bound: int | None = None
    index: dict[int, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {v: i for i, v in enumerate(self.members)}

    def weight(self, u: int, v: int):
        """Virtual edge weight between base nodes ``u`` and ``v`` (``INF`` if absent)."""
        a, b = self.index[u], self.index[v]
        return self.graph.adj[a].get(b, INF)

    def virtual_edges(self):
        for a, b, w in self.graph.edges:
            yield self.members[a], self.members[b], w


def sample_landmarks(n: int, alpha, source: int, seed: int) -> list[int]:
    """Each node joins with probability ``alpha / n``; the source always joins."""
    if not 0 < alpha <= n:
        raise ValueError(f"alpha must lie in (0, n], got {alpha}")
    rng = np.random.default_rng([seed, LANDMARK_STREAM])
    picked = rng.random(n) < alpha / n
    picked[source] = True
    return [int(v) for v in np.flatnonzero(picked)]


def build_overlay(sim: Simulator, graph: WeightedGraph, landmarks: Sequence[int], h: int, eps=None, seed=None) -> OverlayNetwork:
    """Overlay whose edges are the ``h``-hop estimates between landmark pairs."""
    members = sorted(set(landmarks))
    if not members:
        raise ValueError("need at least one landmark")
    eps = default_eps(graph.n) if eps is None else Fraction(eps)
    table = multi_source_bounded_hop(sim, graph, members, h, eps, seed, phase="overlay_edges")
    edges = []
    for i, a in enumerate(members):
        row = table.row(a)
        for j in range(i + 1, len(members)):
            b = members[j]
            w = min(row[b], table.row(b)[a])
            if w != INF:
                edges.append((i, j, w))
    return OverlayNetwork(members, WeightedGraph(len(members), edges), h, eps, estimates=table)


def reduce_overlay_spd(sim: Simulator, overlay: OverlayNetwork, beta: int, tree: BFSTree) -> OverlayNetwork:
    """Shortcut the overlay through each member's ``beta`` nearest members.

    Every member broadcasts its ``beta`` lightest virtual edges; from their
    union all members compute the same nearest sets.  Distances are kept
    and the shortest-path diameter drops below ``4 |members| / beta``.
    """
    if beta < 1:
        raise ValueError("beta must be at least 1")
    og = overlay.graph
    size = og.n
    if size <= 1:
        return OverlayNetwork(overlay.members, og, overlay.h, overlay.eps, overlay.estimates, spd_bound=1)
    b = min(beta, size - 1)
    items = []
    kept = {}
    for i in range(size):
        for _, j, w in k_smallest_edges(og, i, b) if og.adj[i] else []:
            items.append((overlay.members[i], (i, j, w)))
            kept[(min(i, j), max(i, j))] = w
    broadcast_all(sim, tree, items, phase="overlay_lightest_edges")
    union = WeightedGraph(size, ((i, j, w) for (i, j), w in kept.items()))
    near = shortcuts_from_union(union, b)
    weight = {(a, c): w for a, c, w in og.edges}
    for i, j, d in near.edges():
        key = (min(i, j), max(i, j))
        if key not in weight or d < weight[key]:
            weight[key] = d
    reduced = WeightedGraph(size, ((a, c, w) for (a, c), w in weight.items()))
    return OverlayNetwork(
        overlay.members, reduced, overlay.h, overlay.eps, overlay.estimates, spd_bound=math.ceil(4 * size / b)
    )


def sssp_on_overlay(
    sim: Simulator,
    graph: WeightedGraph,
    overlay: OverlayNetwork,
    source: int,
    eps=None,
    tree: BFSTree | None = None,
) -> dict[int, Fraction]:
    """Bounded-hop estimates from ``source`` on the overlay.

    Each virtual round costs ``2 * depth`` rounds to agree on how many
    members speak in it, plus a :func:`broadcast_all` of their messages
    when that number is positive.  Returns base node -> estimate.
    """
    members = overlay.members
    size = len(members)
    if source not in overlay.index:
        raise ValueError("source must be an overlay member")
    if tree is None:
        tree = build_bfs_tree(sim, graph, source)
    if size == 1:
        return {source: Fraction(0)}
    eps = overlay.eps if eps is None else Fraction(eps)
    bound = overlay.spd_bound if overlay.spd_bound is not None else size - 1
    hv = max(1, min(size - 1, bound))
    og = overlay.graph
    fam = make_scale_family(og, hv, eps)
    K = fam.K
    s_idx = overlay.index[source]
    best: dict[int, Fraction] = {}
    count_cost = 2 * tree.depth
    for sc in fam.scales:
        rw = [{x: sc.rounded(w) for x, w in og.adj[a].items()} for a in range(size)]
        dist = {s_idx: 0}
        speaking: dict[int, list[int]] = {0: [s_idx]}
        sim.charge((K + 1) * count_cost, "overlay_round_count")
        for t in range(K + 1):
            now = sorted({a for a in speaking.pop(t, ()) if dist[a] == t})
            if not now:
                continue
            broadcast_all(sim, tree, [(members[a], (a, t)) for a in now], phase="overlay_round")
            for a in now:
                est = sc.estimate(t)
                if members[a] not in best or est < best[members[a]]:
                    best[members[a]] = est
                for x, w in rw[a].items():
                    c = t + w
                    if c <= K and c < dist.get(x, INF):
                        dist[x] = c
                        speaking.setdefault(c, []).append(x)
    return best


@dataclass
class SublinearTable(DistanceTable):
    alpha: int = 0
    beta: int = 0
    h: int = 0
    landmarks: list = field(default_factory=list)


def sublinear_parameters(n: int, hop_diam: int) -> tuple[int, int, int]:
    """``(alpha, beta, h)`` for ``n`` nodes and hop diameter ``hop_diam``."""
    logn = math.log2(n) if n > 1 else 1.0
    dd = max(hop_diam, 1)
    alpha = max(1, math.ceil(math.sqrt(n) / dd**0.25 * logn))
    alpha = min(alpha, n)
    beta = min(alpha, math.ceil(math.sqrt(dd)))
    h = max(1, min(max(n - 1, 1), math.ceil(n * logn / alpha)))
    return alpha, beta, h


def sublinear_sssp(
    sim: Simulator,
    graph: WeightedGraph,
    source: int,
    seed: int | None = None,
    eps=None,
    hop_diam: int | None = None,
) -> SublinearTable:
    """Approximate SSSP whose output never undercuts the true distance.

    It stays within ``(1 + eps)**3`` of it whenever every shortest path
    meets a landmark at least once per ``h`` hops.
    """
    n = graph.n
    eps = default_eps(n) if eps is None else Fraction(eps)
    seed = sim.config.seed if seed is None else seed
    if hop_diam is None:
        hop_diam = hop_diameter(graph)
    alpha, beta, h = sublinear_parameters(n, hop_diam)
    landmarks = sample_landmarks(n, alpha, source, seed)
    tree = build_bfs_tree(sim, graph, source)
    overlay = build_overlay(sim, graph, landmarks, h, eps, seed)
    reduced = reduce_overlay_spd(sim, overlay, beta, tree)
    from_source = sssp_on_overlay(sim, graph, reduced, source, eps, tree)
    broadcast_all(sim, tree, sorted(from_source.items()), phase="overlay_results")
    table = overlay.estimates
    row = []
    for u in range(n):
        best = table.row(source)[u]
        for v, dv in from_source.items():
            cand = table.row(v)[u] + dv
            if cand < best:
                best = cand
        row.append(best)
    return SublinearTable([source], [row], alpha=alpha, beta=beta, h=h, landmarks=landmarks)


def hitting_fraction(graph: WeightedGraph, source: int, landmarks: Sequence[int], window: int) -> float:
    """Share of BFS-tree paths from ``source`` with a landmark in every ``window`` consecutive hops.

    A path passes when no stretch of ``window`` consecutive nodes after
    the source avoids the landmarks; the source itself counts as one.
    """
    marks = set(landmarks) | {source}
    hops = bfs_hops(graph, source)
    parent = {}
    for u in sorted(range(graph.n), key=lambda x: hops[x]):
        if u != source:
            parent[u] = min(v for v in graph.adj[u] if hops[v] == hops[u] - 1)
    gap = {source: 0}
    ok = {source: True}
    for u in sorted(parent, key=lambda x: hops[x]):
        p = parent[u]
        gap[u] = 0 if u in marks else gap[p] + 1
        ok[u] = ok[p] and gap[u] < window
    targets = [u for u in range(graph.n) if u != source]
    return sum(ok[u] for u in targets) / len(targets) if targets else 1.0
