import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congest_sp.graph import INF, WeightedGraph, dijkstra_row, hop_bounded_row
from congest_sp.rounding import (
    Scale,
    ScaleFamily,
    bounded_distance_sssp,
    bounded_hop_sssp,
    ceil_log2,
    default_eps,
    delay_bound,
    draw_delays,
    make_scale_family,
    multi_source_bounded_hop,
    scale_count,
)
from congest_sp.sim import SimConfig, Simulator

from conftest import connected_graphs, random_graph

eps_values = st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(2, 5)])


class TestHelpers:
    @pytest.mark.parametrize("x, want", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (Fraction(1, 2), 0), (Fraction(9, 2), 3)])
    def test_ceil_log2(self, x, want):
        assert ceil_log2(x) == want

    def test_default_eps(self):
        assert default_eps(2) == Fraction(1, 2)
        assert default_eps(1024) == Fraction(1, 10)
        assert default_eps(1000) == Fraction(1, 10)

    def test_delay_bound(self):
        assert delay_bound(4, 8) == 12
        assert delay_bound(3, 1) == 0

    def test_draw_delays_are_in_range_and_reproducible(self):
        sim = Simulator(SimConfig(seed=5))
        a = draw_delays(sim, range(30), 12)
        assert a == draw_delays(Simulator(SimConfig(seed=5)), range(30), 12)
        assert all(0 <= d <= 12 for d in a.values())
        assert a != draw_delays(sim, range(30), 12, seed=6)


class TestScaleFamily:
    def test_rounded_weight_formula(self):
        fam = make_scale_family(16, 4, Fraction(1, 2))
        assert fam.scales[3].rounded(3) == math.ceil(2 * 4 * 3 / (0.5 * 8)) == 6

    def test_unit_factor_scale_is_identity(self):
        sc = Scale(0, 8, 8)
        assert [sc.rounded(w) for w in (1, 5, 17)] == [1, 5, 17]

    def test_smallest_scale(self):
        fam = make_scale_family(1, 2, Fraction(1, 2))
        assert fam.scales[0].rounded(1) == 8

    def test_range_and_cap(self):
        fam = make_scale_family(100, 5, Fraction(1, 4))
        assert [sc.index for sc in fam.scales] == list(range(ceil_log2(500) + 1))
        assert fam.K == math.ceil((1 + 8) * 5)
        assert len(fam) == scale_count(5, 100)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            make_scale_family(4, 0, Fraction(1, 2))
        with pytest.raises(ValueError):
            make_scale_family(4, 2, Fraction(3, 2))
        with pytest.raises(ValueError):
            ScaleFamily(Fraction(1), 1, 3, (Scale(0, 1, 1), Scale(1, 2, 1)))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 1000), st.integers(1, 64), eps_values)
    def test_rounded_weights_are_positive_and_estimates_dominate(self, w, h, eps):
        for sc in make_scale_family(1000, h, eps).scales:
            r = sc.rounded(w)
            assert r >= 1
            assert sc.estimate(r) >= w


class TestBoundedDistance:
    def test_cap_zero(self, triangle):
        assert bounded_distance_sssp(Simulator(), triangle, 0, 0).row(0) == [0, INF, INF]

    def test_triangle(self, triangle):
        assert bounded_distance_sssp(Simulator(), triangle, 0, 2).row(0) == [0, 1, 2]
        assert bounded_distance_sssp(Simulator(), triangle, 0, 1).row(0) == [0, 1, INF]

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs(), st.integers(0, 40))
    def test_clipped_dijkstra_within_k_plus_one_rounds(self, g, K):
        sim = Simulator()
        got = bounded_distance_sssp(sim, g, 0, K).row(0)
        assert got == [d if d <= K else INF for d in dijkstra_row(g, 0)]
        assert sim.trace.total_rounds <= K + 1


class TestBoundedHop:
    def test_single_edge(self):
        eps = Fraction(1, 2)
        d = bounded_hop_sssp(Simulator(), WeightedGraph(2, [(0, 1, 5)]), 0, 1, eps).row(0)[1]
        assert 5 <= d <= 5 * (1 + eps)

    def test_triangle_h1_may_undercut_one_hop_distance(self, triangle):
        # the rounded search also follows longer paths, so the estimate can
        # fall below dist^1 = 3 but never below the true distance 2
        d = bounded_hop_sssp(Simulator(), triangle, 0, 1, Fraction(1, 2)).row(0)[2]
        assert d == 2
        assert 2 <= d <= Fraction(9, 2)

    @settings(max_examples=60, deadline=None)
    @given(connected_graphs(max_n=9, max_w=50), st.data(), eps_values)
    def test_true_distance_le_estimate_le_stretched_hop_distance(self, g, data, eps):
        h = data.draw(st.integers(1, g.n))
        table = bounded_hop_sssp(Simulator(), g, 0, h, eps)
        exact = dijkstra_row(g, 0)
        hop = hop_bounded_row(g, 0, h)
        for d, e, dh in zip(table.row(0), exact, hop):
            assert e <= d
            if dh != INF:
                assert d <= (1 + eps) * dh

    def test_full_hop_bound_is_eps_approximate(self):
        for seed in range(20):
            g = random_graph(seed, 14, wmax=100)
            eps = default_eps(g.n)
            row = bounded_hop_sssp(Simulator(), g, 0, g.n, eps).row(0)
            for d, e in zip(row, dijkstra_row(g, 0)):
                assert e <= d <= (1 + eps) * e

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs(max_w=100), st.integers(1, 10))
    def test_each_node_broadcasts_once_per_scale(self, g, h):
        table = bounded_hop_sssp(Simulator(), g, 0, h)
        assert all(b.get(0, 0) <= len(table.family) for b in table.broadcasts)

    def test_round_count(self):
        g = random_graph(0, 10)
        sim = Simulator()
        table = bounded_hop_sssp(sim, g, 0, 4)
        assert sim.trace.total_rounds == len(table.family) * (table.family.K + 1)


class TestMultiSource:
    def test_single_source_equals_standalone(self):
        g = random_graph(4, 12)
        solo = bounded_hop_sssp(Simulator(), g, 3, 5).row(3)
        for seed in range(4):
            assert multi_source_bounded_hop(Simulator(SimConfig(seed=seed)), g, [3], 5).row(3) == solo

    def test_two_sources_on_an_edge(self):
        g = WeightedGraph(2, [(0, 1, 9)])
        table = multi_source_bounded_hop(Simulator(), g, [0, 1], 1)
        for s in (0, 1):
            assert table.row(s) == bounded_hop_sssp(Simulator(), g, s, 1).row(s)

    @settings(max_examples=25, deadline=None)
    @given(connected_graphs(max_n=10), st.integers(1, 6), st.integers(0, 1000))
    def test_rows_match_standalone_runs_for_any_seed(self, g, h, seed):
        table = multi_source_bounded_hop(Simulator(SimConfig(seed=seed)), g, range(g.n), h)
        for s in range(g.n):
            assert table.row(s) == bounded_hop_sssp(Simulator(), g, s, h).row(s)
        assert all(0 <= d <= delay_bound(g.n, g.n) for d in table.delays.values())

    def test_round_budget(self):
        g = random_graph(8, 24)
        sim = Simulator()
        table = multi_source_bounded_hop(sim, g, range(g.n), g.n)
        fam = table.family
        assert sim.trace.total_rounds == delay_bound(g.n, g.n) + len(fam) * (fam.K + 1)

    def test_needs_a_source(self):
        with pytest.raises(ValueError):
            multi_source_bounded_hop(Simulator(), random_graph(0, 4), [], 2)
