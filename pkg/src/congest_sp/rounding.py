"""Bounded-hop SSSP by weight rounding, and its multi-source version.

A *scale* multiplies every weight by a rational ``c`` and rounds up.  With
``c_i = 2h / (eps * 2**i)`` an ``h``-hop path whose length is about
``2**i`` becomes a path of at most ``K = ceil((1 + 2/eps) * h)`` rounded
units, so the unit-step bounded-distance search with cap ``K`` finds it.
Dividing the rounded distance by ``c_i`` gives an estimate that errs by
at most a ``(1 + eps)`` factor.

All executions (one per source and scale) share a single node program.
A node reached with rounded distance ``d`` in an execution that started at
round ``t`` broadcasts once, at round ``t + d``.  Receivers infer ``t``
from the arrival round, so starting times never need to be announced.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graph import INF, DistanceTable, WeightedGraph
from .sim import NodeProgram, Simulator

DELAY_STREAM = 11


def ceil_log2(x) -> int:
    """Smallest ``L >= 0`` with ``2**L >= x`` for positive rational ``x``."""
    x = Fraction(x)
    if x <= 1:
        return 0
    q = -(-x.numerator // x.denominator)
    return (q - 1).bit_length()


def default_eps(n: int) -> Fraction:
    return Fraction(1, max(2, math.ceil(math.log2(max(n, 2)))))


def as_fraction_eps(eps) -> Fraction:
    e = Fraction(eps)
    if not 0 < e <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    return e


@dataclass(frozen=True)
class Scale:
    """Rounding ``w -> ceil(w * num / den)``; estimates divide by ``num / den``."""

    index: int
    num: int
    den: int

    def rounded(self, w) -> int:
        return -(-(w.numerator * self.num) // (self.den * w.denominator))

    def estimate(self, d: int) -> Fraction:
        return Fraction(d * self.den, self.num)


@dataclass(frozen=True)
class ScaleFamily:
    eps: Fraction
    h: int
    K: int
    scales: tuple[Scale, ...]

    def __post_init__(self):
        if len({sc.num for sc in self.scales}) > 1:
            raise ValueError("scales of one family must share a numerator")

    def __len__(self) -> int:
        return len(self.scales)

    @property
    def num(self) -> int:
        return self.scales[0].num

    def guess(self, i: int) -> int:
        """Distance guess ``D'_i = 2**i`` of scale ``i``."""
        return 2 ** self.scales[i].index


def make_scale_family(graph_or_wmax, h: int, eps) -> ScaleFamily:
    """Rounded-weight scales for hop bound ``h``.

    Scale ``i`` maps ``w`` to ``ceil(2h * w / (eps * 2**i))`` and the scales
    run over ``i = 0 .. ceil(log2(h * W_max))``.
    """
    if h < 1:
        raise ValueError("hop bound must be at least 1")
    eps = as_fraction_eps(eps)
    wmax = graph_or_wmax.max_weight if isinstance(graph_or_wmax, WeightedGraph) else graph_or_wmax
    wmax = max(Fraction(wmax), Fraction(1))
    p, q = eps.numerator, eps.denominator
    top = ceil_log2(h * wmax)
    scales = tuple(Scale(i, 2 * h * q, p * 2**i) for i in range(top + 1))
    K = -(-(h * (p + 2 * q)) // p)
    return ScaleFamily(eps, h, K, scales)


def single_scale_family(K: int, num: int = 1, den: int = 1, eps=1) -> ScaleFamily:
    """One rounding ``ceil(w * num / den)`` with cap ``K``."""
    return ScaleFamily(Fraction(eps), 0, K, (Scale(0, num, den),))


@dataclass
class EstimateTable(DistanceTable):
    """Distance table plus per-node broadcast counts of the run that built it.

    ``broadcasts[u][s]`` is how many messages node ``u`` broadcast on
    behalf of source ``s``.
    """

    broadcasts: list = field(default_factory=list)
    family: ScaleFamily | None = None
    delays: dict = field(default_factory=dict)
    rounds: int = 0


class LightweightNode(NodeProgram):
    """Runs many bounded-distance executions at once.

    ``in_weights`` maps each neighbor ``x`` to the weight of ``x -> u`` as
    seen by this node.  ``starts`` lists ``(scale position, start round)``
    for executions rooted here.
    """

    def __init__(self, u: int, in_weights: Mapping, family: ScaleFamily, starts: Iterable = ()):
        self.u = u
        self.K = family.K
        self.num = family.num
        self.dens = [sc.den for sc in family.scales]
        self.rw = [{x: sc.rounded(w) for x, w in in_weights.items()} for sc in family.scales]
        self.dist: dict[tuple[int, int], int] = {}
        self.best: dict[int, int] = {}
        self.sent: dict[int, int] = {}
        self.sched: list = []
        for si, t in starts:
            self.dist[(u, si)] = 0
            heapq.heappush(self.sched, (t, u, si, 0))

    def step(self, rnd, inbox):
        K = self.K
        dist = self.dist
        rw = self.rw
        sched = self.sched
        for x, (s, si, ell) in inbox:
            c = ell + rw[si][x]
            if c > K:
                continue
            old = dist.get((s, si))
            if old is None or c < old:
                dist[(s, si)] = c
                heapq.heappush(sched, (rnd - 1 - ell + c, s, si, c))
        out = []
        best = self.best
        sent = self.sent
        while sched and sched[0][0] <= rnd:
            t, s, si, c = heapq.heappop(sched)
            if dist[(s, si)] != c:
                continue
            out.append((None, (s, si, c)))
            sent[s] = sent.get(s, 0) + 1
            # estimates share the numerator, so compare scaled numerators
            key = c * self.dens[si]
            cur = best.get(s)
            if cur is None or key < cur:
                best[s] = key
        return out

    def estimate(self, s: int):
        key = self.best.get(s)
        return INF if key is None else Fraction(key, self.num)

    def next_wakeup(self, rnd):
        return self.sched[0][0] if self.sched else None


def run_lightweight(
    sim: Simulator,
    graph: WeightedGraph,
    family: ScaleFamily,
    starts: Mapping[int, Sequence[tuple[int, int]]],
    *,
    in_weights: Sequence[Mapping] | None = None,
    duration: int | None = None,
    phase: str = "lightweight",
) -> EstimateTable:
    """Run every ``(source, scale, start)`` execution and collect estimates."""
    weights = in_weights if in_weights is not None else graph.adj
    programs = [LightweightNode(u, weights[u], family, starts.get(u, ())) for u in range(graph.n)]
    rounds = sim.run(graph, programs, duration=duration, phase=phase)
    sources = sorted(starts)
    values = [[p.estimate(s) for p in programs] for s in sources]
    return EstimateTable(
        sources,
        values,
        broadcasts=[dict(p.sent) for p in programs],
        family=family,
        rounds=rounds,
    )


def _integral(row: list) -> list:
    return [x if x == INF else int(x) for x in row]


def bounded_distance_sssp(sim: Simulator, graph: WeightedGraph, source: int, K: int) -> DistanceTable:
    """Exact distances up to ``K``; farther nodes get :data:`INF`.

    Each node broadcasts at most once, at round ``dist``, so the run takes
    at most ``K + 1`` rounds.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    fam = single_scale_family(K)
    table = run_lightweight(sim, graph, fam, {source: [(0, 0)]}, phase="bounded_distance")
    return DistanceTable.single(source, _integral(table.values[0]))


def bounded_hop_sssp(sim: Simulator, graph: WeightedGraph, source: int, h: int, eps=None) -> EstimateTable:
    """Rounded-scale estimate of ``h``-hop distances from ``source``.

    The scales run one after another, each for ``K + 1`` rounds.
    """
    eps = default_eps(graph.n) if eps is None else eps
    fam = make_scale_family(graph, h, eps)
    span = fam.K + 1
    starts = {source: [(si, si * span) for si in range(len(fam))]}
    return run_lightweight(sim, graph, fam, starts, duration=len(fam) * span, phase="bounded_hop")


def delay_bound(k: int, n: int) -> int:
    return math.ceil(k * math.log2(n)) if n > 1 else 0


def draw_delays(sim: Simulator, sources: Sequence[int], bound: int, seed: int | None = None) -> dict[int, int]:
    """Independent uniform delays in ``{0, ..., bound}``, one stream per source."""
    base = sim.config.seed if seed is None else seed
    return {s: int(np.random.default_rng([base, DELAY_STREAM, s]).integers(0, bound + 1)) for s in sources}


def multi_source_bounded_hop(
    sim: Simulator,
    graph: WeightedGraph,
    sources: Iterable[int],
    h: int,
    eps=None,
    seed: int | None = None,
    *,
    in_weights: Sequence[Mapping] | None = None,
    phase: str = "multi_source",
) -> EstimateTable:
    """Bounded-hop estimates from every source, started at random delays.

    Source ``s`` waits a uniform delay in ``{0, ..., ceil(k log2 n)}`` and
    then runs its scales back to back.  Delays change only the schedule;
    the values equal those of separate single-source runs.
    """
    sources = sorted(set(sources))
    if not sources:
        raise ValueError("need at least one source")
    eps = default_eps(graph.n) if eps is None else eps
    fam = make_scale_family(_wmax(graph, in_weights), h, eps)
    bound = delay_bound(len(sources), graph.n)
    delays = draw_delays(sim, sources, bound, seed)
    span = fam.K + 1
    starts = {s: [(si, delays[s] + si * span) for si in range(len(fam))] for s in sources}
    table = run_lightweight(
        sim, graph, fam, starts, in_weights=in_weights, duration=bound + len(fam) * span, phase=phase
    )
    table.delays = delays
    return table


def _wmax(graph: WeightedGraph, in_weights) -> Fraction:
    if in_weights is None:
        return graph.max_weight
    return max((w for row in in_weights for w in row.values()), default=1)


def scale_count(h: int, wmax) -> int:
    """Number of scales used for hop bound ``h`` and maximum weight ``wmax``."""
    return ceil_log2(h * max(Fraction(wmax), Fraction(1))) + 1
