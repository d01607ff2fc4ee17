"""Shortest paths on fully connected networks.

Exact SSSP: every node broadcasts its ``k = ceil(sqrt n)`` lightest edges,
after which all nodes know the same union graph and can compute every
k-nearest set locally.  Lowering each edge to the true distance whenever
one endpoint is among the other's k nearest keeps distances intact and
brings the shortest-path diameter under ``4 sqrt n``, so that many rounds
of Bellman-Ford finish the job.

Approximate APSP adds random sources, a multi-source bounded-hop run from
them, and a local shortest-path computation on a graph ``G_u`` assembled
at each node from everything it has heard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotCompleteError
from .graph import INF, DistanceTable, WeightedGraph, dijkstra_row
from .rounding import default_eps, multi_source_bounded_hop
from .shortcuts import ShortcutSet, k_smallest_edges, shortcuts_from_union
from .sim import NodeProgram, Simulator, bellman_ford_sssp

SAMPLE_STREAM = 23


class _ItemBroadcast(NodeProgram):
    """Broadcast the ``j``-th item in round ``j``; keep every item heard."""

    def __init__(self, items: list):
        self.items = items
        self.heard: list = []

    def step(self, rnd, inbox):
        self.heard.extend(inbox)
        if rnd < len(self.items):
            return [(None, self.items[rnd])]
        return []

    def next_wakeup(self, rnd):
        return rnd + 1 if rnd + 1 < len(self.items) else None


class _Unicast(NodeProgram):
    """Send ``values[v]`` to each neighbor ``v`` in round 0."""

    def __init__(self, values: dict):
        self.values = values
        self.heard: list = []

    def step(self, rnd, inbox):
        self.heard.extend(inbox)
        return list(self.values.items()) if rnd == 0 else []


def _broadcast_lists(sim: Simulator, graph: WeightedGraph, items: list[list], phase: str) -> list[list]:
    programs = [_ItemBroadcast(items[u]) for u in range(graph.n)]
    sim.run(graph, programs, phase=phase)
    return [p.heard for p in programs]


def _require_complete(graph: WeightedGraph) -> None:
    if not graph.is_complete():
        raise NotCompleteError(f"graph on {graph.n} nodes has {graph.m} of {graph.n * (graph.n - 1) // 2} edges")


def clique_k(n: int) -> int:
    return max(1, min(n - 1, math.isqrt(n - 1) + 1 if n > 1 else 1))


def _phase_one(sim: Simulator, graph: WeightedGraph, k: int):
    """Broadcast the k lightest edges at each node and derive the shortcut weights."""
    items = [k_smallest_edges(graph, u, k) for u in range(graph.n)]
    heard = _broadcast_lists(sim, graph, items, "lightest_edges")
    # Every node heard the same edge set; the local computation is identical
    # at all of them, so it is done once here.
    known = {(min(a, b), max(a, b)): w for u in range(graph.n) for _, (a, b, w) in heard[u]}
    known.update({(min(a, b), max(a, b)): w for row in items for a, b, w in row})
    union = WeightedGraph(graph.n, ((a, b, w) for (a, b), w in known.items()))
    near = shortcuts_from_union(union, k)
    w1 = [dict(graph.adj[u]) for u in range(graph.n)]
    for u, v, d in near.edges():
        w1[u][v] = min(w1[u][v], d)
        w1[v][u] = min(w1[v][u], d)
    return near, w1


def clique_sssp_exact(sim: Simulator, graph: WeightedGraph, source: int) -> DistanceTable:
    """Exact distances from ``source`` on a complete graph in ``O(sqrt n)`` rounds."""
    _require_complete(graph)
    n = graph.n
    if n == 1:
        return DistanceTable.single(source, [0])
    k = clique_k(n)
    _, w1 = _phase_one(sim, graph, k)
    rounds = math.ceil(4 * math.sqrt(n))
    dist = bellman_ford_sssp(sim, graph, source, rounds, in_weights=w1, phase="bellman_ford")
    return DistanceTable.single(source, dist)


@dataclass
class CliqueLocalView:
    """What the nodes know when the local computation starts.

    ``w_out[u][v]`` is the tightened weight of ``u -> v``; ``estimates[r]``
    is the row of bounded-hop estimates from sampled node ``r``.
    """

    n: int
    k: int
    nearest: ShortcutSet
    w_out: list[dict]
    sample: list[int]
    estimates: dict[int, list] = field(default_factory=dict)


def build_gu(view: CliqueLocalView, u: int) -> WeightedGraph:
    """The graph ``G_u`` node ``u`` runs Dijkstra on; parallel edges keep the minimum."""
    best: dict[tuple[int, int], object] = {}

    def add(a, b, w):
        if a == b or w == INF:
            return
        key = (min(a, b), max(a, b))
        if key not in best or w < best[key]:
            best[key] = w

    for v, w in view.w_out[u].items():
        add(u, v, w)
    for x, row in enumerate(view.nearest.nearest):
        if x != u:
            for y, d in row:
                add(x, y, d)
    for r in view.sample:
        for v, d in enumerate(view.estimates[r]):
            add(r, v, d)
    return WeightedGraph(view.n, ((a, b, w) for (a, b), w in best.items()))


@dataclass
class CliqueApproxTable(DistanceTable):
    view: CliqueLocalView | None = None


def sample_size(n: int) -> int:
    return min(n, math.ceil(math.sqrt(n) * math.log2(n))) if n > 1 else 1


def clique_apsp_approx(sim: Simulator, graph: WeightedGraph, eps=None, seed: int | None = None) -> CliqueApproxTable:
    """All-pairs estimates within ``2 + 2 eps + eps**2`` when the sample hits every k-nearest set."""
    _require_complete(graph)
    n = graph.n
    eps = default_eps(n) if eps is None else eps
    if n == 1:
        return CliqueApproxTable([0], [[0]])
    k = clique_k(n)
    near, w1 = _phase_one(sim, graph, k)
    # each node shares its k nearest nodes and their distances
    _broadcast_lists(sim, graph, [near.nearest[u] for u in range(n)], "nearest_sets")
    # node v tightens w'(u -> v) through the k nearest of u
    w_in = [dict(w1[v]) for v in range(n)]
    for u in range(n):
        for z, dz in near.nearest[u]:
            adj_z = graph.adj[z]
            for v in range(n):
                if v != u and v != z:
                    c = dz + adj_z[v]
                    if c < w_in[v][u]:
                        w_in[v][u] = c
    # one round of unicasts tells u the value v computed for u -> v
    programs = [_Unicast({u: w for u, w in w_in[v].items()}) for v in range(n)]
    sim.run(graph, programs, phase="tightened_weights")
    w_out = [{v: w for v, w in p.heard} for p in programs]

    base = sim.config.seed if seed is None else seed
    rng = np.random.default_rng([base, SAMPLE_STREAM])
    sample = sorted(int(x) for x in rng.choice(n, size=sample_size(n), replace=False))
    h = math.ceil(4 * math.sqrt(n))
    table = multi_source_bounded_hop(sim, graph, sample, h, eps, seed, in_weights=w_in, phase="sampled_sources")
    # every node sends its estimate from each sampled source to everyone
    rows = [[(r, table.row(r)[v]) for r in sample] for v in range(n)]
    _broadcast_lists(sim, graph, rows, "sample_estimates")

    view = CliqueLocalView(n, k, near, w_out, sample, {r: table.row(r) for r in sample})
    values = [dijkstra_row(build_gu(view, u), u) for u in range(n)]
    return CliqueApproxTable(list(range(n)), values, view=view)
