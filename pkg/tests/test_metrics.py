from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congest_sp.errors import DisconnectedGraphError
from congest_sp.graph import WeightedGraph, eccentricity_stats
from congest_sp.metrics import apsp_linear, approx_apsp_scales, approx_diameter, approx_radius
from congest_sp.rounding import bounded_hop_sssp, default_eps
from congest_sp.sim import SimConfig, Simulator

from conftest import connected_graphs, nx_distances, random_graph

eps_values = st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 10)])


def sandwiched(lo, x, eps):
    return lo <= x <= (1 + eps) * lo


class TestDiameter:
    def test_single_edge(self):
        eps = Fraction(1, 2)
        assert sandwiched(9, approx_diameter(Simulator(), WeightedGraph(2, [(0, 1, 9)]), eps), eps)

    def test_unit_path_three(self):
        g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1)])
        eps = Fraction(1, 3)
        # node 0 has eccentricity 2, so the guess is 4
        assert sandwiched(2, approx_diameter(Simulator(), g, eps), eps)

    def test_single_node(self):
        assert approx_diameter(Simulator(), WeightedGraph(1)) == 0

    def test_rejects_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            approx_diameter(Simulator(), WeightedGraph(3, [(0, 1, 1)]))

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs(max_w=100), eps_values)
    def test_sandwich(self, g, eps):
        diam, _, _ = eccentricity_stats(g)
        assert sandwiched(diam, approx_diameter(Simulator(), g, eps), eps)


class TestRadius:
    def test_single_edge(self):
        eps = Fraction(1, 2)
        assert sandwiched(9, approx_radius(Simulator(), WeightedGraph(2, [(0, 1, 9)]), eps), eps)

    def test_unit_star(self):
        g = WeightedGraph(6, [(0, i, 1) for i in range(1, 6)])
        eps = Fraction(1, 5)
        assert sandwiched(1, approx_radius(Simulator(), g, eps), eps)

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs(max_w=100), eps_values)
    def test_sandwich(self, g, eps):
        _, rad, _ = eccentricity_stats(g)
        assert sandwiched(rad, approx_radius(Simulator(), g, eps), eps)


class TestAPSPScales:
    def test_single_edge(self):
        eps = Fraction(1, 2)
        t = approx_apsp_scales(Simulator(), WeightedGraph(2, [(0, 1, 5)]), eps)
        assert sandwiched(5, t[0, 1], eps)

    def test_triangle(self, triangle):
        eps = Fraction(1, 2)
        assert sandwiched(2, approx_apsp_scales(Simulator(), triangle, eps)[0, 2], eps)

    @settings(max_examples=30, deadline=None)
    @given(connected_graphs(max_w=200), eps_values)
    def test_sandwich_all_pairs(self, g, eps):
        t = approx_apsp_scales(Simulator(), g, eps)
        exact = nx_distances(g)
        assert all(sandwiched(exact[u][v], t[u, v], eps) for u in range(g.n) for v in range(g.n))

    def test_same_values_as_linear(self):
        g = random_graph(5, 14, wmax=70)
        assert approx_apsp_scales(Simulator(), g).values == apsp_linear(Simulator(), g).values


class TestAPSPLinear:
    def test_rows_equal_single_source_runs(self):
        g = random_graph(1, 12, wmax=40)
        t = apsp_linear(Simulator(SimConfig(seed=3)), g)
        for s in range(g.n):
            assert t.row(s) == bounded_hop_sssp(Simulator(), g, s, g.n).row(s)

    @pytest.mark.parametrize("seed", range(5))
    def test_sandwich(self, seed):
        g = random_graph(seed, 16, wmax=300)
        eps = default_eps(g.n)
        t = apsp_linear(Simulator(SimConfig(seed=seed)), g, eps)
        exact = nx_distances(g)
        assert all(sandwiched(exact[u][v], t[u, v], eps) for u in range(g.n) for v in range(g.n))

    def test_rounds_grow_at_most_linearly(self):
        rounds = []
        for n in (16, 32, 64):
            sim = Simulator()
            apsp_linear(sim, random_graph(n, n, wmax=64, extra=n), Fraction(1, 4))
            rounds.append(sim.trace.total_rounds)
        assert all(b / a <= 2.5 for a, b in zip(rounds, rounds[1:]))
