"""Weighted graphs, distance tables and the sequential oracles.

Every distributed algorithm in the package is checked against the functions
here: :func:`dijkstra`, :func:`hop_bounded_distances`,
:func:`shortest_path_diameter` and :func:`eccentricity_stats`.
"""

from __future__ import annotations

import hashlib
import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DisconnectedGraphError, GraphFormatError

#: Distance of an unreachable node.  Saturates under ``+`` and compares
#: greater than every finite distance.
INF = math.inf

_INT64_LIMIT = 2**63 - 1


class WeightedGraph:
    """Undirected simple graph with positive edge weights.

    Nodes are ``0..n-1``.  Edges are stored once as ``(u, v, w)`` with
    ``u < v``; :attr:`adj` gives the symmetric directed view.  Weights of
    input networks are positive integers; overlay graphs built by the
    algorithms may carry exact rationals.
    """

    __slots__ = ("n", "edges", "adj", "_weight", "_digest")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, "int | Fraction"]] = ()):
        if n < 0:
            raise ValueError("node count must be nonnegative")
        self.n = n
        self.adj: list[dict[int, int | Fraction]] = [dict() for _ in range(n)]
        self._weight: dict[tuple[int, int], int | Fraction] = {}
        self._digest: str | None = None
        for u, v, w in edges:
            self._add(u, v, w)
        self.edges: list[tuple[int, int, int | Fraction]] = sorted(
            (u, v, w) for (u, v), w in self._weight.items()
        )
        if self.edges and self.n * self.max_weight > _INT64_LIMIT:
            raise ValueError("n * max weight exceeds the 64-bit distance range")

    def _add(self, u: int, v: int, w) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
        if u == v:
            raise ValueError(f"self-loop at node {u}")
        if isinstance(w, bool) or not isinstance(w, Rational):
            raise TypeError(f"weight of edge ({u}, {v}) must be an int or Fraction, got {w!r}")
        if w <= 0:
            raise ValueError(f"weight of edge ({u}, {v}) must be positive, got {w}")
        key = (min(u, v), max(u, v))
        if key in self._weight:
            raise ValueError(f"duplicate edge {key}")
        if isinstance(w, Fraction) and w.denominator == 1:
            w = int(w)
        self._weight[key] = w
        self.adj[u][v] = w
        self.adj[v][u] = w

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def max_weight(self):
        return max((w for _, _, w in self.edges), default=0)

    def weight(self, u: int, v: int):
        return self._weight[(min(u, v), max(u, v))]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._weight

    def neighbors(self, u: int) -> list[int]:
        return sorted(self.adj[u])

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def directed_edges(self) -> Iterator[tuple[int, int, int | Fraction]]:
        for u, v, w in self.edges:
            yield u, v, w
            yield v, u, w

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def is_integral(self) -> bool:
        return all(isinstance(w, int) for _, _, w in self.edges)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return all(d != INF for d in bfs_hops(self, 0))

    def reweighted(self, fn) -> "WeightedGraph":
        """Copy with every weight replaced by ``fn(u, v, w)``."""
        return WeightedGraph(self.n, ((u, v, fn(u, v, w)) for u, v, w in self.edges))

    def subgraph(self, keep) -> "WeightedGraph":
        """Copy keeping the edges for which ``keep(u, v, w)`` is true."""
        return WeightedGraph(self.n, ((u, v, w) for u, v, w in self.edges if keep(u, v, w)))

    def digest(self) -> str:
        """Stable content hash, used to cache oracle results."""
        if self._digest is None:
            h = hashlib.sha256(f"{self.n}\n".encode())
            for u, v, w in self.edges:
                h.update(f"{u} {v} {w}\n".encode())
            self._digest = h.hexdigest()
        return self._digest

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightedGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.digest())

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


@dataclass
class DistanceTable:
    """Rows of distances from each source to every node.

    ``values[i][v]`` is the distance from ``sources[i]`` to ``v``: an int,
    a :class:`~fractions.Fraction` for approximate outputs, or :data:`INF`.
    """

    sources: list[int]
    values: list[list]
    _index: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.sources) != len(self.values):
            raise ValueError("one row per source required")
        self._index = {s: i for i, s in enumerate(self.sources)}

    @classmethod
    def single(cls, source: int, row: Sequence) -> "DistanceTable":
        return cls([source], [list(row)])

    def row(self, source: int) -> list:
        return self.values[self._index[source]]

    def __getitem__(self, key: tuple[int, int]):
        s, v = key
        return self.values[self._index[s]][v]

    def __len__(self) -> int:
        return len(self.sources)

    @property
    def n(self) -> int:
        return len(self.values[0]) if self.values else 0

    def to_array(self) -> np.ndarray:
        """Float copy, ``inf`` for unreachable entries."""
        return np.array([[float(x) for x in row] for row in self.values], dtype=float)

    def is_triangle_consistent(self, graph: WeightedGraph) -> bool:
        for row in self.values:
            for u, v, w in graph.directed_edges():
                if row[v] > row[u] + w:
                    return False
        return True


@dataclass
class AsymWeightFn:
    """Nonnegative weight per directed edge of a base graph."""

    graph: WeightedGraph
    w: dict[tuple[int, int], int]

    def __post_init__(self):
        for u, v, _ in self.graph.directed_edges():
            if (u, v) not in self.w:
                raise ValueError(f"missing weight for directed edge {u}->{v}")
            if self.w[(u, v)] < 0:
                raise ValueError(f"negative weight on {u}->{v}")

    def __getitem__(self, uv: tuple[int, int]) -> int:
        return self.w[uv]


# --------------------------------------------------------------------------
# Oracles
# --------------------------------------------------------------------------

def dijkstra_row(graph: WeightedGraph, source: int, weight=None) -> list:
    """Exact distances from ``source``; ``weight(u, v)`` overrides edge weights.

    The override may be asymmetric and may contain zeros.
    """
    dist = [INF] * graph.n
    dist[source] = 0
    heap = [(0, source)]
    done = [False] * graph.n
    adj = graph.adj
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u].items():
            if weight is not None:
                w = weight(u, v)
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def dijkstra(graph: WeightedGraph, source: int) -> DistanceTable:
    """Exact single-source distances; unreachable nodes get :data:`INF`."""
    return DistanceTable.single(source, dijkstra_row(graph, source))


def all_pairs(graph: WeightedGraph) -> DistanceTable:
    """Exact all-pairs distances by ``n`` Dijkstra runs."""
    return DistanceTable(list(range(graph.n)), [dijkstra_row(graph, s) for s in range(graph.n)])


def hop_bounded_row(graph: WeightedGraph, source: int, h: int) -> list:
    if h < 0:
        raise ValueError("hop bound must be nonnegative")
    dist = [INF] * graph.n
    dist[source] = 0
    frontier = {source}
    for _ in range(h):
        if not frontier:
            break
        new = dist[:]
        changed = set()
        for u in frontier:
            du = dist[u]
            for v, w in graph.adj[u].items():
                if du + w < new[v]:
                    new[v] = du + w
                    changed.add(v)
        dist = new
        frontier = changed
    return dist


def hop_bounded_distances(graph: WeightedGraph, source: int, h: int) -> DistanceTable:
    """Exact ``h``-hop distances by ``h`` rounds of Bellman-Ford relaxation."""
    return DistanceTable.single(source, hop_bounded_row(graph, source, h))


def bfs_hops(graph: WeightedGraph, source: int) -> list:
    dist = [INF] * graph.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in graph.adj[u]:
            if dist[v] == INF:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _edge_arrays(graph: WeightedGraph):
    src, dst, wts = [], [], []
    for u, v, w in graph.directed_edges():
        src.append(u)
        dst.append(v)
        wts.append(float(w))
    return np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp), np.array(wts)


def _require_connected(graph: WeightedGraph) -> None:
    if not graph.is_connected():
        raise DisconnectedGraphError("graph is not connected")


def shortest_path_diameter(graph: WeightedGraph) -> int:
    """Smallest ``h`` for which ``h``-hop distances equal true distances.

    Runs the all-sources hop-limited relaxation in lockstep until it stops
    changing.  Floats are exact here because distances stay below 2**53.
    """
    _require_connected(graph)
    n = graph.n
    if n <= 1:
        return 0
    src, dst, wts = _edge_arrays(graph)
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    h = 0
    while True:
        cand = dist[:, src] + wts
        new = dist.copy()
        np.minimum.at(new.T, dst, cand.T)
        if np.array_equal(new, dist):
            return h
        dist = new
        h += 1


def hop_diameter(graph: WeightedGraph) -> int:
    _require_connected(graph)
    return max((max(bfs_hops(graph, s)) for s in range(graph.n)), default=0)


def eccentricity_stats(graph: WeightedGraph) -> tuple:
    """``(weighted diameter, weighted radius, hop diameter)``."""
    _require_connected(graph)
    if graph.n == 0:
        raise ValueError("empty graph")
    ecc = [max(dijkstra_row(graph, s)) for s in range(graph.n)]
    return max(ecc), min(ecc), hop_diameter(graph)


# --------------------------------------------------------------------------
# Text format
# --------------------------------------------------------------------------

def parse_graph(text: str) -> WeightedGraph:
    """Parse the ``n m`` / ``u v w`` edge-list format."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((lineno, line.split()))
    if not lines:
        raise GraphFormatError("missing header line 'n m'")
    lineno, header = lines[0]
    if len(header) != 2:
        raise GraphFormatError(f"line {lineno}: header must be 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as exc:
        raise GraphFormatError(f"line {lineno}: {exc}") from None
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(body)}")
    edges = []
    for lineno, parts in body:
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"line {lineno}: expected 'u v w' with base-10 integers")
        edges.append(tuple(int(p) for p in parts))
    try:
        return WeightedGraph(n, edges)
    except (ValueError, TypeError) as exc:
        raise GraphFormatError(str(exc)) from None


def format_graph(graph: WeightedGraph) -> str:
    if not graph.is_integral():
        raise ValueError("text format holds integer weights only")
    out = [f"{graph.n} {graph.m}"]
    out.extend(f"{u} {v} {w}" for u, v, w in graph.edges)
    return "\n".join(out) + "\n"


def read_graph(path: str | Path) -> WeightedGraph:
    return parse_graph(Path(path).read_text())


def write_graph(graph: WeightedGraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(graph))


# --------------------------------------------------------------------------
# Comparisons against an oracle
# --------------------------------------------------------------------------

def ratio_range(approx: DistanceTable, exact: DistanceTable) -> tuple:
    """Smallest and largest ``approx / exact`` over pairs with ``0 < exact < INF``.

    An infinite estimate of a finite distance counts as ratio ``INF``;
    ``(1, 1)`` is returned when no pair qualifies.
    """
    lo = hi = None
    for s in approx.sources:
        a_row, e_row = approx.row(s), exact.row(s)
        for a, e in zip(a_row, e_row):
            if e == INF or e == 0:
                continue
            r = INF if a == INF else Fraction(a) / Fraction(e)
            lo = r if lo is None or r < lo else lo
            hi = r if hi is None or r > hi else hi
    return (Fraction(1), Fraction(1)) if lo is None else (lo, hi)


def dominates(approx: DistanceTable, exact: DistanceTable) -> bool:
    """True when every estimate is at least the exact value."""
    return all(
        a >= e for s in approx.sources for a, e in zip(approx.row(s), exact.row(s))
    )


def within_factor(approx: DistanceTable, exact: DistanceTable, factor) -> bool:
    """``exact <= approx <= factor * exact`` pointwise (INF only where exact is INF)."""
    for s in approx.sources:
        for a, e in zip(approx.row(s), exact.row(s)):
            if e == INF:
                continue
            if a < e or a > factor * e:
                return False
    return True


def oracle_table(graph: WeightedGraph, sources: Iterable[int]) -> DistanceTable:
    sources = list(sources)
    return DistanceTable(sources, [dijkstra_row(graph, s) for s in sources])
