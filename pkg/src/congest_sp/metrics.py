"""(1+eps)-approximate diameter, radius and all-pairs distances.

Diameter and radius guess the answer up to a factor two from one exact
single-source run, round the weights so that every distance of interest
fits in ``K = ceil((1 + 2/eps) n)`` units, and then run the unit-step
bounded-distance search from every node with random start delays.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DisconnectedGraphError
from .graph import WeightedGraph
from .rounding import (
    EstimateTable,
    Scale,
    ScaleFamily,
    as_fraction_eps,
    default_eps,
    delay_bound,
    draw_delays,
    make_scale_family,
    multi_source_bounded_hop,
    run_lightweight,
)
from .sim import Simulator, bellman_ford_sssp, build_bfs_tree, tree_aggregate


def _metric_cap(n: int, eps: Fraction) -> int:
    return math.ceil((1 + 2 / eps) * n)


def _eccentricities(sim: Simulator, graph: WeightedGraph, eps, kind: str):
    """Scaled eccentricity of every node under the reweighting derived from node 0."""
    n = graph.n
    eps = as_fraction_eps(default_eps(n) if eps is None else eps)
    tree = build_bfs_tree(sim, graph, 0)
    d0 = bellman_ford_sssp(sim, graph, 0, max(n - 1, 1), phase="reference_sssp")
    ecc0 = tree_aggregate(sim, tree, d0, max, phase="reference_max")
    guess = 2 * ecc0 if kind == "diameter" else ecc0
    p, q = eps.numerator, eps.denominator
    # w'' = ceil(2n w / (eps D')) and estimates multiply back by eps D' / 2n
    fam = ScaleFamily(eps, n, _metric_cap(n, eps), (Scale(0, 2 * n * q, p * guess),))
    bound = delay_bound(n, n)
    delays = draw_delays(sim, range(n), bound)
    starts = {s: [(0, delays[s])] for s in range(n)}
    table = run_lightweight(sim, graph, fam, starts, duration=bound + fam.K + 1, phase="bounded_distance_apsp")
    ecc = [max(table.values[s][u] for s in range(n)) for u in range(n)]
    return tree, ecc, guess


def _check(graph: WeightedGraph) -> None:
    if graph.n == 0:
        raise ValueError("empty graph")
    if not graph.is_connected():
        raise DisconnectedGraphError("graph is not connected")


def approx_diameter(sim: Simulator, graph: WeightedGraph, eps=None) -> Fraction:
    """Estimate ``D`` with ``D <= estimate <= (1 + eps) D``."""
    _check(graph)
    if graph.n == 1:
        return Fraction(0)
    tree, ecc, _ = _eccentricities(sim, graph, eps, "diameter")
    return Fraction(tree_aggregate(sim, tree, ecc, max, phase="diameter_max"))


def approx_radius(sim: Simulator, graph: WeightedGraph, eps=None) -> Fraction:
    """Estimate the radius with ``rad <= estimate <= (1 + eps) rad``."""
    _check(graph)
    if graph.n == 1:
        return Fraction(0)
    tree, ecc, _ = _eccentricities(sim, graph, eps, "radius")
    return Fraction(tree_aggregate(sim, tree, ecc, min, phase="radius_min"))


def approx_apsp_scales(sim: Simulator, graph: WeightedGraph, eps=None) -> EstimateTable:
    """All-pairs estimates, one distance guess ``2**i`` after another.

    For each guess every node starts a bounded-distance search at a random
    delay; the next guess begins once the slowest search of the current
    one is over.  Values match :func:`apsp_linear`, only the schedule
    differs.
    """
    _check(graph)
    n = graph.n
    eps = default_eps(n) if eps is None else eps
    fam = make_scale_family(graph, max(n, 1), eps)
    bound = delay_bound(n, n)
    delays = draw_delays(sim, range(n), bound)
    block = bound + fam.K + 1
    starts = {s: [(si, si * block + delays[s]) for si in range(len(fam))] for s in range(n)}
    table = run_lightweight(sim, graph, fam, starts, duration=len(fam) * block, phase="scale_major_apsp")
    table.delays = delays
    return table


def apsp_linear(sim: Simulator, graph: WeightedGraph, eps=None, seed: int | None = None) -> EstimateTable:
    """All-pairs estimates from the multi-source algorithm with ``h = k = n``."""
    _check(graph)
    n = graph.n
    return multi_source_bounded_hop(sim, graph, range(n), max(n, 1), eps, seed, phase="apsp_linear")
