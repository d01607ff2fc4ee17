"""Round-synchronous CONGEST execution engine.

A run steps one :class:`NodeProgram` per node.  Messages sent in round ``r``
sit in the receiver's inbox at round ``r + 1``.  Idle rounds are skipped:
a node is stepped only in round 0, when its inbox is nonempty, or at a
round it asked for through :meth:`NodeProgram.next_wakeup`.

A :class:`Simulator` chains several runs on one global clock and keeps a
cumulative :class:`SimTrace`, so composed algorithms report a single round
count and congestion profile.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .errors import CapacityExceeded, DisconnectedGraphError, MaxRoundsExceeded
from .graph import WeightedGraph


class CapacityPolicy(str, Enum):
    RECORD_ONLY = "record_only"
    FAIL_FAST = "fail_fast"
    QUEUE = "queue"


@dataclass(frozen=True)
class SimConfig:
    """Engine settings.

    ``edge_capacity`` is the number of messages one directed edge may carry
    per round.  Under ``RECORD_ONLY`` it is only compared against, never
    enforced; ``FAIL_FAST`` raises on the first overflow and ``QUEUE``
    holds excess messages in a per-edge FIFO.
    """

    edge_capacity: int = 1
    capacity_policy: CapacityPolicy = CapacityPolicy.RECORD_ONLY
    max_rounds: int = 50_000_000
    seed: int = 0
    record_loads: bool = False

    def __post_init__(self):
        if self.edge_capacity < 1:
            raise ValueError("edge_capacity must be at least 1")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        object.__setattr__(self, "capacity_policy", CapacityPolicy(self.capacity_policy))


@dataclass
class SimTrace:
    """Round count and congestion evidence of one or more runs.

    ``load_histogram[x]`` counts (round, directed edge) slots that carried
    exactly ``x`` messages.  ``per_round_edge_load`` is filled only when
    the config asks for it.  Rounds added through :meth:`Simulator.charge`
    appear in ``total_rounds`` and ``phases`` but carry no load records.
    """

    seed: int = 0
    total_rounds: int = 0
    max_edge_load: int = 0
    messages: int = 0
    load_histogram: dict[int, int] = field(default_factory=dict)
    per_round_edge_load: dict[int, dict[tuple[int, int], int]] | None = None
    failure: tuple[int, tuple[int, int]] | None = None
    phases: list[tuple[str, int]] = field(default_factory=list)

    def phase_rounds(self, name: str) -> int:
        return sum(r for p, r in self.phases if p == name)

    def phase_totals(self) -> dict[str, int]:
        """Rounds per phase name, in order of first appearance."""
        out: dict[str, int] = {}
        for p, r in self.phases:
            out[p] = out.get(p, 0) + r
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "rounds": self.total_rounds,
            "max_edge_load": self.max_edge_load,
            "loads": {str(k): v for k, v in sorted(self.load_histogram.items())},
            "seed": self.seed,
            "failure": None
            if self.failure is None
            else {"round": self.failure[0], "edge": list(self.failure[1])},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class NodeProgram:
    """Per-node state machine driven by the engine.

    Subclasses override :meth:`step`.  It receives the round number local
    to the current run and the inbox as a list of ``(sender, payload)``
    pairs, and returns ``(target, payload)`` pairs where ``target`` is a
    neighbor id or ``None`` for one copy to every neighbor.  Spurious
    wakeups with an empty inbox must be harmless.
    """

    halted = False

    def step(self, rnd: int, inbox: list) -> list:
        return []

    def next_wakeup(self, rnd: int) -> int | None:
        """Earliest later round at which to step even without mail."""
        return None


class Simulator:
    """Global clock plus cumulative trace shared by the phases of an algorithm."""

    def __init__(self, config: SimConfig | None = None):
        self.config = config or SimConfig()
        self.clock = 0
        self.trace = SimTrace(seed=self.config.seed)
        if self.config.record_loads:
            self.trace.per_round_edge_load = {}

    def rng(self, *keys: int) -> np.random.Generator:
        """Independent reproducible stream for ``(seed, *keys)``."""
        return np.random.default_rng([self.config.seed, *keys])

    def charge(self, rounds: int, phase: str) -> int:
        """Advance the clock for a step whose cost is known in closed form."""
        if rounds < 0:
            raise ValueError("cannot charge negative rounds")
        return self._close(rounds, phase)

    def run(
        self,
        graph: WeightedGraph,
        programs: Sequence[NodeProgram],
        *,
        duration: int | None = None,
        phase: str = "run",
    ) -> int:
        """Execute ``programs`` to quiescence and return the rounds consumed.

        Rounds consumed is one past the last round in which anything was
        sent, raised to ``duration`` when a fixed schedule is given.
        """
        if len(programs) != graph.n:
            raise ValueError(f"need {graph.n} programs, got {len(programs)}")
        cfg = self.config
        queued = cfg.capacity_policy is CapacityPolicy.QUEUE
        adj = graph.adj
        nbrs = [list(a) for a in adj]
        inbox: dict[int, list] = {}
        wake: dict[int, set[int]] = {}
        wake_heap: list[int] = []
        queues: dict[tuple[int, int], deque] = {}
        last_send = -1
        r = 0
        nodes: Sequence[int] = range(graph.n)
        while True:
            if r >= cfg.max_rounds:
                raise MaxRoundsExceeded(cfg.max_rounds)
            nxt: dict[int, list] = {}
            bcast: dict[int, int] = {}
            uni: dict[tuple[int, int], int] = {}
            for u in nodes:
                prog = programs[u]
                if prog.halted:
                    continue
                out = prog.step(r, inbox.get(u, []))
                if out:
                    for target, payload in out:
                        if target is None:
                            if queued:
                                for v in nbrs[u]:
                                    queues.setdefault((u, v), deque()).append(payload)
                                continue
                            bcast[u] = bcast.get(u, 0) + 1
                            msg = (u, payload)
                            for v in nbrs[u]:
                                box = nxt.get(v)
                                if box is None:
                                    nxt[v] = [msg]
                                else:
                                    box.append(msg)
                        else:
                            if target not in adj[u]:
                                raise ValueError(f"node {u} sent to non-neighbor {target}")
                            if queued:
                                queues.setdefault((u, target), deque()).append(payload)
                                continue
                            uni[(u, target)] = uni.get((u, target), 0) + 1
                            box = nxt.get(target)
                            if box is None:
                                nxt[target] = [(u, payload)]
                            else:
                                box.append((u, payload))
                w = prog.next_wakeup(r)
                if w is not None:
                    if w <= r:
                        raise ValueError(f"node {u} asked to wake at {w} in round {r}")
                    bucket = wake.get(w)
                    if bucket is None:
                        wake[w] = {u}
                        heapq.heappush(wake_heap, w)
                    else:
                        bucket.add(u)
            if queued and queues:
                uni = self._drain(queues, nxt)
            if bcast or uni:
                last_send = r
                try:
                    self._account(r, bcast, uni, nbrs)
                except CapacityExceeded:
                    self._close(r + 1, phase)
                    raise
            inbox = nxt
            if inbox or (queued and queues):
                r += 1
            else:
                while wake_heap and wake_heap[0] <= r:
                    wake.pop(heapq.heappop(wake_heap), None)
                if not wake_heap:
                    break
                r = wake_heap[0]
            woken = wake.pop(r, None)
            if woken is not None:
                heapq.heappop(wake_heap)
                nodes = sorted(woken.union(inbox))
            else:
                nodes = sorted(inbox)
        rounds = last_send + 1
        if duration is not None:
            rounds = max(rounds, duration)
        return self._close(rounds, phase)

    def _close(self, rounds: int, phase: str) -> int:
        self.clock += rounds
        self.trace.total_rounds += rounds
        self.trace.phases.append((phase, rounds))
        return rounds

    @contextmanager
    def configured(self, **changes):
        """Temporarily run with some config fields replaced."""
        old = self.config
        self.config = replace(old, **changes)
        try:
            yield self
        finally:
            self.config = old

    def _drain(self, queues, nxt) -> dict[tuple[int, int], int]:
        cap = self.config.edge_capacity
        sent: dict[tuple[int, int], int] = {}
        for edge in sorted(queues):
            q = queues[edge]
            u, v = edge
            k = 0
            while q and k < cap:
                nxt.setdefault(v, []).append((u, q.popleft()))
                k += 1
            sent[edge] = k
            if not q:
                del queues[edge]
        return sent

    def _account(self, r: int, bcast: dict[int, int], uni: dict, nbrs) -> None:
        trace = self.trace
        hist = trace.load_histogram
        record = trace.per_round_edge_load
        loads: dict[tuple[int, int], int] | None = {} if record is not None else None
        peak = 0
        peak_edge = None
        total = 0
        touched: dict[int, list[int]] = {}
        for (u, v), c in uni.items():
            touched.setdefault(u, []).append(v)
        for u, b in bcast.items():
            extra = touched.get(u, ())
            plain = len(nbrs[u]) - len(extra)
            if plain:
                hist[b] = hist.get(b, 0) + plain
                total += b * plain
                if b > peak:
                    peak = b
                    peak_edge = (u, next(v for v in nbrs[u] if (u, v) not in uni))
                if loads is not None:
                    for v in nbrs[u]:
                        loads[(u, v)] = b
        for (u, v), c in uni.items():
            load = bcast.get(u, 0) + c
            hist[load] = hist.get(load, 0) + 1
            total += c
            if load > peak:
                peak = load
                peak_edge = (u, v)
            if loads is not None:
                loads[(u, v)] = load
        trace.messages += total
        if loads is not None:
            record[self.clock + r] = loads
        if peak > trace.max_edge_load:
            trace.max_edge_load = peak
        cfg = self.config
        if cfg.capacity_policy is CapacityPolicy.FAIL_FAST and peak > cfg.edge_capacity:
            trace.failure = (self.clock + r, peak_edge)
            raise CapacityExceeded(self.clock + r, peak_edge, peak, cfg.edge_capacity)


def run_simulation(graph: WeightedGraph, programs: Sequence[NodeProgram], config: SimConfig | None = None):
    """One-shot run on a fresh simulator; returns ``(programs, trace)``."""
    sim = Simulator(config)
    sim.run(graph, programs)
    return programs, sim.trace


# --------------------------------------------------------------------------
# BFS tree and global broadcast
# --------------------------------------------------------------------------

@dataclass
class BFSTree:
    graph: WeightedGraph
    root: int
    parent: list[int | None]
    hops: list[int]
    children: list[list[int]]

    @property
    def depth(self) -> int:
        return max(self.hops)

    def tree_neighbors(self, u: int) -> list[int]:
        p = self.parent[u]
        return sorted(self.children[u] + ([] if p is None else [p]))


class _BFSNode(NodeProgram):
    def __init__(self, u: int, root: int):
        self.u = u
        self.parent = None
        self.hops = 0 if u == root else None
        self.children: list[int] = []
        self.is_root = u == root

    def step(self, rnd, inbox):
        out = []
        if self.hops is None and inbox:
            self.parent = min(x for x, _ in inbox)
            self.hops = rnd
            out.append((None, self.parent))
        elif rnd == 0 and self.is_root:
            out.append((None, None))
        self.children.extend(x for x, p in inbox if p == self.u)
        return out


def build_bfs_tree(sim: Simulator, graph: WeightedGraph, root: int = 0) -> BFSTree:
    """Distributed BFS from ``root``; each node adopts its smallest-id first sender as parent."""
    programs = [_BFSNode(u, root) for u in range(graph.n)]
    sim.run(graph, programs, phase="bfs_tree")
    if any(p.hops is None for p in programs):
        raise DisconnectedGraphError("BFS from the root does not reach every node")
    return BFSTree(
        graph=graph,
        root=root,
        parent=[p.parent for p in programs],
        hops=[p.hops for p in programs],
        children=[sorted(p.children) for p in programs],
    )


class _FloodNode(NodeProgram):
    def __init__(self, tree_nbrs: list[int], own: list[tuple[int, Any]]):
        self.nbrs = tree_nbrs
        self.known: dict[int, Any] = dict(own)
        self.pending = {v: sorted(i for i, _ in own) for v in tree_nbrs}

    def step(self, rnd, inbox):
        for x, (idx, payload) in inbox:
            if idx in self.known:
                continue
            self.known[idx] = payload
            for v in self.nbrs:
                if v != x:
                    heapq.heappush(self.pending[v], idx)
        out = []
        for v in self.nbrs:
            q = self.pending[v]
            if q:
                idx = heapq.heappop(q)
                out.append((v, (idx, self.known[idx])))
        return out

    def next_wakeup(self, rnd):
        return rnd + 1 if any(self.pending.values()) else None


def tree_flood(sim: Simulator, tree: BFSTree, items: Sequence[tuple[int, Any]], phase: str = "broadcast"):
    """Pipelined flooding of ``items`` along ``tree``.

    Every tree edge forwards, once per round, the smallest item the sender
    holds and has not yet passed that way.  Items are ranked by origin and
    then by position in ``items``.  Returns ``(rounds, holdings)`` where
    ``holdings[u]`` maps item rank to payload.
    """
    n = tree.graph.n
    if not items:
        return 0, [dict() for _ in range(n)]
    order = sorted(range(len(items)), key=lambda i: (items[i][0], i))
    own: list[list] = [[] for _ in range(n)]
    for rank, i in enumerate(order):
        origin, payload = items[i]
        own[origin].append((rank, payload))
    programs = [_FloodNode(tree.tree_neighbors(u), own[u]) for u in range(n)]
    rounds = sim.run(tree.graph, programs, phase=phase)
    return rounds, [p.known for p in programs]


def broadcast_all(sim: Simulator, tree: BFSTree, items: Sequence[tuple[int, Any]], phase: str = "broadcast") -> int:
    """Deliver every ``(origin, payload)`` item to every node; returns rounds used."""
    rounds, holdings = tree_flood(sim, tree, items, phase)
    if items and any(len(h) != len(items) for h in holdings):
        raise RuntimeError("tree flood left some node without every item")
    return rounds


def convergecast_rounds(depth: int, items: int) -> int:
    """Rounds for a pipelined upcast of ``items`` values to the root."""
    return depth + items if items else 0


# --------------------------------------------------------------------------
# Reusable programs
# --------------------------------------------------------------------------

class _BellmanFordNode(NodeProgram):
    def __init__(self, in_weights, is_source: bool, last: int):
        self.in_w = in_weights
        self.d = 0 if is_source else float("inf")
        self.changed = is_source
        self.last = last

    def step(self, rnd, inbox):
        in_w = self.in_w
        for x, dx in inbox:
            c = dx + in_w[x]
            if c < self.d:
                self.d = c
                self.changed = True
        if self.changed and rnd < self.last:
            self.changed = False
            return [(None, self.d)]
        return []


def bellman_ford_sssp(
    sim: Simulator,
    graph: WeightedGraph,
    source: int,
    rounds: int,
    *,
    in_weights=None,
    phase: str = "bellman_ford",
) -> list:
    """``rounds`` synchronous relaxation rounds from ``source``.

    A node rebroadcasts only in rounds where its value dropped, which gives
    the same values as rebroadcasting every round.  The result is the exact
    ``rounds``-hop distance.
    """
    weights = in_weights if in_weights is not None else graph.adj
    programs = [_BellmanFordNode(weights[u], u == source, rounds) for u in range(graph.n)]
    sim.run(graph, programs, duration=rounds, phase=phase)
    return [p.d for p in programs]


class _AggregateNode(NodeProgram):
    def __init__(self, tree: BFSTree, u: int, value, op):
        self.parent = tree.parent[u]
        self.children = tree.children[u]
        self.waiting = len(self.children)
        self.acc = value
        self.op = op
        self.result = None

    def step(self, rnd, inbox):
        out = []
        for x, (kind, val) in inbox:
            if kind == "up":
                self.acc = self.op(self.acc, val)
                self.waiting -= 1
            else:
                self.result = val
                out.extend((c, ("down", val)) for c in self.children)
        if self.waiting == 0:
            self.waiting = -1
            if self.parent is None:
                self.result = self.acc
                out.extend((c, ("down", self.acc)) for c in self.children)
            else:
                out.append((self.parent, ("up", self.acc)))
        return out


def tree_aggregate(sim: Simulator, tree: BFSTree, values: Sequence, op, phase: str = "aggregate"):
    """Combine one value per node with ``op`` up the tree, then send the result down.

    Takes ``2 * depth`` rounds; every node ends up knowing the result.
    """
    programs = [_AggregateNode(tree, u, values[u], op) for u in range(tree.graph.n)]
    sim.run(tree.graph, programs, phase=phase)
    return programs[tree.root].result
