"""k-nearest sets, k-smallest-edge sets and the k-shortcut graph.

Adding an edge of weight ``dist(u, v)`` from every node ``u`` to each of
its ``k`` nearest nodes leaves all distances unchanged but shrinks the
shortest-path diameter below ``4n/k``.  The ``k`` nearest nodes of every
node can be found from the union of the ``k`` lightest edges at each node,
which is what lets distributed algorithms build the shortcuts cheaply.

Ties are broken by ascending node id throughout.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .graph import WeightedGraph


def k_nearest(graph: WeightedGraph, u: int, k: int) -> list[tuple[int, object]]:
    """The ``k`` nodes closest to ``u`` (excluding ``u``) as ``(node, dist)``.

    Dijkstra with a ``(dist, id)`` heap settles nodes in exactly that
    order because every weight is positive, so the first ``k`` settled
    nodes are the answer.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    out: list[tuple[int, object]] = []
    if k == 0:
        return out
    dist = {u: 0}
    done = set()
    heap = [(0, u)]
    adj = graph.adj
    while heap and len(out) < k:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x != u:
            out.append((x, d))
        for y, w in adj[x].items():
            nd = d + w
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return out


def k_smallest_edges(graph: WeightedGraph, u: int, k: int) -> list[tuple[int, int, object]]:
    """The ``min(k, deg u)`` lightest edges at ``u`` as ``(u, v, w)``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ranked = sorted(graph.adj[u].items(), key=lambda vw: (vw[1], vw[0]))
    return [(u, v, w) for v, w in ranked[:k]]


def union_graph(graph: WeightedGraph, k: int) -> WeightedGraph:
    """Subgraph keeping every edge that is among the ``k`` lightest at either endpoint."""
    keep = {}
    for u in range(graph.n):
        for _, v, w in k_smallest_edges(graph, u, k):
            keep[(min(u, v), max(u, v))] = w
    return WeightedGraph(graph.n, ((u, v, w) for (u, v), w in keep.items()))


@dataclass
class ShortcutSet:
    """``nearest[u]`` lists ``u``'s ``k`` nearest nodes with their distances."""

    k: int
    nearest: list[list[tuple[int, object]]]

    def members(self, u: int) -> set[int]:
        return {v for v, _ in self.nearest[u]}

    def edges(self):
        for u, row in enumerate(self.nearest):
            for v, d in row:
                yield u, v, d


def shortcut_set(graph: WeightedGraph, k: int) -> ShortcutSet:
    return ShortcutSet(k, [k_nearest(graph, u, k) for u in range(graph.n)])


def shortcuts_from_union(graph_k: WeightedGraph, k: int) -> ShortcutSet:
    """k-nearest sets computed on the union of the k lightest edges.

    They coincide, distances included, with the sets on the full graph:
    the predecessor of a k-nearest node on its shortest path is also
    k-nearest and reaches it through one of its own k lightest edges.
    """
    return shortcut_set(graph_k, k)


def shortcut_graph(graph: WeightedGraph, k: int) -> WeightedGraph:
    """Base edges plus ``(u, v, dist(u, v))`` for each ``v`` among the ``k`` nearest of ``u``.

    Parallel edges collapse to the smaller weight.
    """
    if not 1 <= k <= max(graph.n - 1, 1):
        raise ValueError(f"k must lie in 1..n-1, got {k}")
    weight = {(min(u, v), max(u, v)): w for u, v, w in graph.edges}
    for u, v, d in shortcut_set(graph, k).edges():
        key = (min(u, v), max(u, v))
        if key not in weight or d < weight[key]:
            weight[key] = d
    return WeightedGraph(graph.n, ((u, v, w) for (u, v), w in weight.items()))
