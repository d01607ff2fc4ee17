"""Exact APSP by weight scaling.

Every weight is written in *positive binary*, ``w = sum_j b_j 2**j`` with
digits ``b_j`` in ``{1, 2}``.  Truncating the low digits gives weights
``w_i = sum_{j >= i} b_j 2**(j - i)`` with ``w_i = 2 w_{i+1} + b_i``, and ``w_i``
is zero exactly when the digit list of that edge is shorter than ``i + 1``.

Iteration ``i`` turns the exact distances ``d_{i+1}`` into ``d_i``:

1. reweight per source, ``w_i^s(u -> v) = 2 d_{i+1}(s, u) - 2 d_{i+1}(s, v)
   + w_i(uv)``; these weights are nonnegative and every source's distances
   stay at most ``2n``;
2. group nodes into zero-weight clusters and drop the internal edges of
   clusters with more than ``ceil(sqrt n)`` nodes, which caps the number
   of nodes on a zero-weight path;
3. run all ``n`` searches at once with random start delays, forwarding
   along zero edges immediately and along positive edges on a slotted
   clock;
4. patch the pairs the pruning broke through a small graph on clusters.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapacityExceeded, DisconnectedGraphError
from .graph import INF, DistanceTable, WeightedGraph, dijkstra_row
from .sim import (
    BFSTree,
    CapacityPolicy,
    NodeProgram,
    Simulator,
    broadcast_all,
    build_bfs_tree,
    convergecast_rounds,
)

DELAY_STREAM = 41


# --------------------------------------------------------------------------
# Digits and scaled weights
# --------------------------------------------------------------------------

def positive_binary(x: int) -> list[int]:
    """Digits in ``{1, 2}``, least significant first: odd remainders take 1, even take 2."""
    if x <= 0:
        raise ValueError(f"positive binary needs x >= 1, got {x}")
    digits = []
    while x > 0:
        b = 1 if x % 2 else 2
        digits.append(b)
        x = (x - b) // 2
    return digits


def from_positive_binary(digits: Sequence[int]) -> int:
    return sum(b << j for j, b in enumerate(digits))


def truncated(digits: Sequence[int], i: int) -> int:
    """``sum_{j >= i} b_j 2**(j - i)``."""
    return sum(b << (j - i) for j, b in enumerate(digits) if j >= i)


def digit(digits: Sequence[int], i: int) -> int:
    return digits[i] if i < len(digits) else 0


def scale_weights(graph: WeightedGraph, i: int) -> dict[tuple[int, int], int]:
    """``w_i`` for every edge ``(u, v)`` with ``u < v``."""
    if i < 0:
        raise ValueError("scale index must be nonnegative")
    return {(u, v): truncated(positive_binary(w), i) for u, v, w in graph.edges}


# --------------------------------------------------------------------------
# Per-source reweighting
# --------------------------------------------------------------------------

@dataclass
class MultiWeightFamily:
    """The weights ``w_i^s`` for every source ``s``, derived on demand.

    ``weight(s, u, v)`` is ``2 d(s, u) - 2 d(s, v) + w_i(uv)`` where ``d``
    is the exact distance table of the previous scale.
    """

    wi: dict[tuple[int, int], int]
    dist_prev: list[list[int]]
    zero_bound: int
    K: int

    def base(self, u: int, v: int) -> int:
        return self.wi[(u, v) if u < v else (v, u)]

    def weight(self, s: int, u: int, v: int) -> int:
        d = self.dist_prev[s]
        return 2 * d[u] - 2 * d[v] + self.base(u, v)

    def source_weights(self, s: int):
        """Callable ``(u, v) -> w_i^s(u -> v)`` for the oracle."""
        return lambda u, v: self.weight(s, u, v)


def reweight_per_source(
    graph: WeightedGraph,
    wi: dict[tuple[int, int], int],
    dist_prev: list[list[int]],
    sim: Simulator | None = None,
    zero_bound: int | None = None,
) -> MultiWeightFamily:
    """Build the per-source weights; neighbors first exchange their ``n`` previous distances."""
    n = graph.n
    if sim is not None:
        # one value per source over every edge, pipelined
        sim.charge(n, "reweight_exchange")
    zb = math.isqrt(max(n - 1, 0)) + 1 if zero_bound is None else zero_bound
    return MultiWeightFamily(wi, dist_prev, zb, 2 * n)


# --------------------------------------------------------------------------
# Zero clusters
# --------------------------------------------------------------------------

@dataclass
class ClusterPartition:
    """``rep[u]`` is the smallest id in ``u``'s zero-weight component."""

    rep: list[int]
    members: dict[int, list[int]] = field(init=False)

    def __post_init__(self):
        self.members = {}
        for u, r in enumerate(self.rep):
            self.members.setdefault(r, []).append(u)

    @property
    def reps(self) -> list[int]:
        return sorted(self.members)

    def size(self, r: int) -> int:
        return len(self.members[r])


class _MinIdFlood(NodeProgram):
    def __init__(self, u: int, zero_nbrs: list[int]):
        self.best = u
        self.nbrs = zero_nbrs
        self.changed = True

    def step(self, rnd, inbox):
        for _, x in inbox:
            if x < self.best:
                self.best = x
                self.changed = True
        if self.changed:
            self.changed = False
            return [(v, self.best) for v in self.nbrs]
        return []


def cluster_zero_components(
    graph: WeightedGraph,
    wi: dict[tuple[int, int], int],
    sim: Simulator | None = None,
    tree: BFSTree | None = None,
) -> ClusterPartition:
    """Components of the zero-weight edges, found by flooding the minimum id along them.

    The flood is padded to ``n - 1`` rounds since nodes cannot tell when it
    has settled; afterwards every node announces its representative.
    """
    n = graph.n
    sim = sim if sim is not None else Simulator()
    zero = [[] for _ in range(n)]
    for (u, v), w in wi.items():
        if w == 0:
            zero[u].append(v)
            zero[v].append(u)
    programs = [_MinIdFlood(u, sorted(zero[u])) for u in range(n)]
    sim.run(graph, programs, duration=max(n - 1, 0), phase="zero_clusters")
    part = ClusterPartition([p.best for p in programs])
    if tree is not None:
        broadcast_all(sim, tree, [(u, part.rep[u]) for u in range(n)], phase="cluster_announce")
    return part


def big_threshold(n: int) -> int:
    return math.isqrt(max(n - 1, 0)) + 1


def prune_big_clusters(graph: WeightedGraph, partition: ClusterPartition) -> WeightedGraph:
    """Drop edges inside clusters of more than ``ceil(sqrt n)`` nodes."""
    limit = big_threshold(graph.n)
    rep = partition.rep

    def keep(u, v, w):
        return rep[u] != rep[v] or partition.size(rep[u]) <= limit

    return graph.subgraph(keep)


def longest_zero_path(graph: WeightedGraph, wi: dict[tuple[int, int], int], cap: int = 14) -> int:
    """Most nodes on a simple path of zero-weight edges.

    Exhaustive within each zero component of at most ``cap`` nodes; larger
    components contribute their size, an upper bound.
    """
    n = graph.n
    zero = [[] for _ in range(n)]
    for u, v, _ in graph.edges:
        if wi[(u, v)] == 0:
            zero[u].append(v)
            zero[v].append(u)
    seen = [False] * n
    best = 1 if n else 0
    for s in range(n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        for x in comp:
            for y in zero[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
        if len(comp) > cap:
            best = max(best, len(comp))
            continue

        def dfs(x, on):
            longest = len(on)
            for y in zero[x]:
                if y not in on:
                    on.add(y)
                    longest = max(longest, dfs(y, on))
                    on.discard(y)
            return longest

        for x in comp:
            best = max(best, dfs(x, {x}))
    return best


# --------------------------------------------------------------------------
# Multi-weight bounded-distance search
# --------------------------------------------------------------------------

class _MultiWeightNode(NodeProgram):
    """BFS-style search for all sources at once.

    A message is ``(s, ell, tau)``: a walk from ``s`` of weight ``ell`` in a
    search that started at round ``tau``.  The first arrival fixes the
    distance.  Zero edges forward in the same round; a positive edge
    carries value ``c`` in round ``tau + c * spacing``.
    """

    def __init__(self, u, nbrs, family: MultiWeightFamily, spacing: int, own_start: int | None):
        self.u = u
        self.nbrs = nbrs
        self.family = family
        self.spacing = spacing
        self.K = family.K
        self.dist: dict[int, int] = {}
        self.sched: list = []
        self.sends: dict[tuple[int, int], int] = {}
        self.own_start = own_start
        if own_start is not None:
            self.dist[u] = 0

    def _learn(self, s, ell, tau, rnd, out):
        fam = self.family
        for v in self.nbrs:
            w = fam.weight(s, self.u, v)
            c = ell + w
            if c > self.K:
                continue
            if w == 0:
                self._send(v, s, c, tau, out)
            else:
                heapq.heappush(self.sched, (tau + c * self.spacing, v, s, c, tau))

    def _send(self, v, s, c, tau, out):
        out.append((v, (s, c, tau)))
        self.sends[(s, v)] = self.sends.get((s, v), 0) + 1

    def step(self, rnd, inbox):
        out = []
        if self.own_start is not None and rnd == self.own_start:
            self._learn(self.u, 0, rnd, rnd, out)
        first: dict[int, tuple[int, int]] = {}
        for _, (s, ell, tau) in inbox:
            if s in self.dist:
                continue
            if s not in first or ell < first[s][0]:
                first[s] = (ell, tau)
        for s in sorted(first):
            ell, tau = first[s]
            self.dist[s] = ell
            self._learn(s, ell, tau, rnd, out)
        sched = self.sched
        while sched and sched[0][0] <= rnd:
            _, v, s, c, tau = heapq.heappop(sched)
            self._send(v, s, c, tau, out)
        return out

    def next_wakeup(self, rnd):
        nxt = self.sched[0][0] if self.sched else None
        if self.own_start is not None and self.own_start > rnd:
            nxt = self.own_start if nxt is None else min(nxt, self.own_start)
        return nxt


@dataclass
class KApspTable(DistanceTable):
    fallback: bool = False
    max_sends_per_edge: int = 0


def _oracle_rows(H: WeightedGraph, family: MultiWeightFamily) -> list[list]:
    K = family.K
    rows = []
    for s in range(H.n):
        row = dijkstra_row(H, s, family.source_weights(s))
        rows.append([d if d <= K else INF for d in row])
    return rows


def multi_weight_k_apsp(
    sim: Simulator,
    H: WeightedGraph,
    family: MultiWeightFamily,
    K: int | None = None,
    seed: int | None = None,
    *,
    slack: int | None = None,
    edge_budget: int | None = None,
    tree: BFSTree | None = None,
) -> KApspTable:
    """Distances up to ``K`` from every source under its own weights.

    Sources start at uniform delays in ``{0, ..., n - 1}``.  The search
    runs with at most ``edge_budget`` messages per edge per round (default
    ``ceil(log2 n)``); on overflow it falls back to gathering the input at
    one node, solving there and broadcasting the answers.
    """
    n = H.n
    if K is not None and K != family.K:
        family = MultiWeightFamily(family.wi, family.dist_prev, family.zero_bound, K)
    logn = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    slack = logn if slack is None else slack
    budget = logn if edge_budget is None else edge_budget
    base = sim.config.seed if seed is None else seed
    rng = np.random.default_rng([base, DELAY_STREAM])
    delays = [int(x) for x in rng.integers(0, n, size=n)]
    spacing = family.zero_bound * slack
    programs = [
        _MultiWeightNode(u, sorted(H.adj[u]), family, spacing, delays[u]) for u in range(n)
    ]
    try:
        with sim.configured(capacity_policy=CapacityPolicy.FAIL_FAST, edge_capacity=budget):
            sim.run(H, programs, phase="multi_weight_search")
    except CapacityExceeded:
        depth = tree.depth if tree is not None else max(n - 1, 0)
        gather = H.m + n * n
        sim.charge(convergecast_rounds(depth, gather), "fallback_gather")
        sim.charge(depth + n * n, "fallback_broadcast")
        return KApspTable(list(range(n)), _oracle_rows(H, family), fallback=True)
    values = [[programs[u].dist.get(s, INF) for u in range(n)] for s in range(n)]
    worst = max((c for p in programs for c in p.sends.values()), default=0)
    return KApspTable(list(range(n)), values, fallback=False, max_sends_per_edge=worst)


# --------------------------------------------------------------------------
# Recovering exact distances
# --------------------------------------------------------------------------

def candidate_distances(dist_prev: list[list[int]], mw: DistanceTable) -> list[list]:
    """``d'(s, u) = 2 d_{i+1}(s, u) + dist^K(s, u)``."""
    n = len(dist_prev)
    return [[2 * dist_prev[s][u] + mw.values[s][u] for u in range(n)] for s in range(n)]


def aggregate_clusters(partition: ClusterPartition, d_prime: list[list]) -> dict[int, dict[int, object]]:
    """``agg[a][b]``: least candidate distance between members of clusters ``a`` and ``b``, either direction."""
    rep = partition.rep
    agg: dict[int, dict[int, object]] = {r: {} for r in partition.reps}
    n = len(rep)
    for x in range(n):
        a = rep[x]
        row = d_prime[x]
        for y in range(n):
            b = rep[y]
            if a == b:
                continue
            d = row[y]
            if d == INF:
                continue
            if d < agg[a].get(b, INF):
                agg[a][b] = d
            if d < agg[b].get(a, INF):
                agg[b][a] = d
    return agg


def cluster_graph_complete(
    u: int,
    partition: ClusterPartition,
    agg: dict[int, dict[int, object]],
    big: Sequence[int] | None = None,
) -> list:
    """Exact ``dist_{w_i}(u, .)`` from the cluster graph ``G'_u``.

    ``G'_u`` joins ``u``'s cluster and every big cluster to every other
    cluster, weighted by aggregated candidates.
    """
    if big is None:
        limit = big_threshold(len(partition.rep))
        big = [r for r in partition.reps if partition.size(r) > limit]
    reps = partition.reps
    idx = {r: i for i, r in enumerate(reps)}
    edges: dict[tuple[int, int], object] = {}

    def add(a, b, w):
        if a == b or w == INF:
            return
        key = (min(idx[a], idx[b]), max(idx[a], idx[b]))
        if key not in edges or w < edges[key]:
            edges[key] = w

    home = partition.rep[u]
    for b, w in agg[home].items():
        add(home, b, w)
    for a in big:
        for b, w in agg[a].items():
            add(a, b, w)
    cg = WeightedGraph(len(reps), ((a, b, w) for (a, b), w in edges.items()))
    cd = dijkstra_row(cg, idx[home])
    return [cd[idx[partition.rep[v]]] for v in range(len(partition.rep))]


# --------------------------------------------------------------------------
# Whole pipeline
# --------------------------------------------------------------------------

@dataclass
class ScalingAudit:
    """Invariant checks collected over every iteration of :func:`exact_apsp`."""

    iterations: int = 0
    recurrence_violations: int = 0
    negative_weights: int = 0
    zero_mismatches: int = 0
    max_ecc: int = 0
    ecc_violations: int = 0
    max_zero_path: int = 0
    zero_path_violations: int = 0
    fallbacks: int = 0
    repeated_sends: int = 0

    @property
    def clean(self) -> bool:
        return not (
            self.recurrence_violations
            or self.negative_weights
            or self.zero_mismatches
            or self.ecc_violations
            or self.zero_path_violations
            or self.repeated_sends
        )


def _audit_iteration(audit, graph, digits, i, wi, w_next, family, H) -> None:
    n = graph.n
    audit.iterations += 1
    for (u, v), w in wi.items():
        if w != 2 * w_next[(u, v)] + digit(digits[(u, v)], i):
            audit.recurrence_violations += 1
    for s in range(n):
        for u, v, _ in graph.directed_edges():
            x = family.weight(s, u, v)
            if x < 0:
                audit.negative_weights += 1
            if (x == 0) != (family.base(u, v) == 0):
                audit.zero_mismatches += 1
        ecc = max(dijkstra_row(graph, s, family.source_weights(s)))
        audit.max_ecc = max(audit.max_ecc, ecc)
        if ecc > 2 * n:
            audit.ecc_violations += 1
    zp = longest_zero_path(H, wi)
    audit.max_zero_path = max(audit.max_zero_path, zp)
    if zp > big_threshold(n):
        audit.zero_path_violations += 1


def exact_apsp(
    sim: Simulator,
    graph: WeightedGraph,
    seed: int | None = None,
    *,
    slack: int | None = None,
    edge_budget: int | None = None,
    audit: ScalingAudit | None = None,
) -> DistanceTable:
    """Exact all-pairs distances, one positive-binary digit per iteration."""
    n = graph.n
    if not graph.is_connected():
        raise DisconnectedGraphError("graph is not connected")
    if not graph.is_integral():
        raise ValueError("exact APSP needs integer weights")
    if n <= 1:
        return DistanceTable(list(range(n)), [[0] * n for _ in range(n)])
    base = sim.config.seed if seed is None else seed
    tree = build_bfs_tree(sim, graph, 0)
    digits = {(u, v): positive_binary(w) for u, v, w in graph.edges}
    top = max(len(d) for d in digits.values()) - 1
    dist_prev = [[0] * n for _ in range(n)]
    w_next = {e: 0 for e in digits}
    for i in range(top, -1, -1):
        wi = {e: truncated(d, i) for e, d in digits.items()}
        family = reweight_per_source(graph, wi, dist_prev, sim)
        part = cluster_zero_components(graph, wi, sim, tree)
        H = prune_big_clusters(graph, part)
        mw = multi_weight_k_apsp(
            sim, H, family, seed=base * 1000 + i, slack=slack, edge_budget=edge_budget, tree=tree
        )
        if audit is not None:
            _audit_iteration(audit, graph, digits, i, wi, w_next, family, H)
            audit.fallbacks += mw.fallback
            if mw.max_sends_per_edge > 1:
                audit.repeated_sends += 1
        d_prime = candidate_distances(dist_prev, mw)
        agg = aggregate_clusters(part, d_prime)
        limit = big_threshold(n)
        big = [r for r in part.reps if part.size(r) > limit]
        largest = max(part.size(r) for r in part.reps)
        # per-cluster gather and spread of one value per cluster
        sim.charge(2 * (largest + len(part.reps)), "cluster_collect")
        rows = [(r, (b, w)) for r in big for b, w in sorted(agg[r].items())]
        broadcast_all(sim, tree, rows, phase="big_cluster_rows")
        by_cluster = {r: cluster_graph_complete(r, part, agg, big) for r in part.reps}
        dist_prev = [by_cluster[part.rep[u]] for u in range(n)]
        w_next = wi
    return DistanceTable(list(range(n)), dist_prev)
