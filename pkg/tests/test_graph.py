import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from congest_sp.errors import DisconnectedGraphError, GraphFormatError
from congest_sp.graph import (
    INF,
    DistanceTable,
    WeightedGraph,
    all_pairs,
    bfs_hops,
    dijkstra,
    dijkstra_row,
    eccentricity_stats,
    format_graph,
    hop_bounded_distances,
    hop_bounded_row,
    parse_graph,
    ratio_range,
    read_graph,
    shortest_path_diameter,
    within_factor,
    write_graph,
)

from conftest import connected_graphs, nx_distances, random_graph


def simple_paths_min(graph, s, t, max_hops=None):
    """Brute force over every simple path."""
    best = INF
    others = [v for v in range(graph.n) if v not in (s, t)]
    for r in range(len(others) + 1):
        for mid in itertools.permutations(others, r):
            path = (s, *mid, t)
            if max_hops is not None and len(path) - 1 > max_hops:
                continue
            if all(graph.has_edge(a, b) for a, b in zip(path, path[1:])):
                best = min(best, sum(graph.weight(a, b) for a, b in zip(path, path[1:])))
    return best


class TestWeightedGraph:
    def test_edges_are_normalized_and_sorted(self):
        g = WeightedGraph(3, [(2, 0, 4), (1, 0, 2)])
        assert g.edges == [(0, 1, 2), (0, 2, 4)]
        assert g.adj[2] == {0: 4}
        assert g.weight(2, 0) == 4

    @pytest.mark.parametrize(
        "edges, exc",
        [
            ([(0, 0, 1)], ValueError),
            ([(0, 3, 1)], ValueError),
            ([(0, 1, 0)], ValueError),
            ([(0, 1, -2)], ValueError),
            ([(0, 1, 1.5)], TypeError),
            ([(0, 1, 1), (1, 0, 2)], ValueError),
        ],
    )
    def test_rejects_bad_edges(self, edges, exc):
        with pytest.raises(exc):
            WeightedGraph(3, edges)

    def test_rejects_weights_past_int64(self):
        with pytest.raises(ValueError):
            WeightedGraph(4, [(0, 1, 2**62)])

    def test_fraction_with_unit_denominator_becomes_int(self):
        g = WeightedGraph(2, [(0, 1, Fraction(6, 3))])
        assert type(g.weight(0, 1)) is int
        assert g.is_integral()

    def test_digest_depends_on_content_only(self):
        a = WeightedGraph(3, [(0, 1, 1), (1, 2, 5)])
        b = WeightedGraph(3, [(2, 1, 5), (1, 0, 1)])
        assert a == b and a.digest() == b.digest() and hash(a) == hash(b)
        assert a.digest() != WeightedGraph(3, [(0, 1, 1), (1, 2, 6)]).digest()

    def test_completeness_and_connectivity(self):
        assert WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]).is_complete()
        assert not WeightedGraph(3, [(0, 1, 1)]).is_connected()


class TestDijkstra:
    def test_single_edge(self):
        assert dijkstra(WeightedGraph(2, [(0, 1, 7)]), 0).row(0) == [0, 7]

    def test_triangle_matches_path_enumeration(self, triangle):
        row = dijkstra(triangle, 0).row(0)
        assert row == [0, 1, 2]
        assert row == [simple_paths_min(triangle, 0, t) if t else 0 for t in range(3)]

    def test_unreachable_is_inf(self):
        assert dijkstra(WeightedGraph(2), 0).row(0) == [0, INF]

    def test_weight_override_may_be_asymmetric_and_zero(self):
        g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1)])
        w = {(0, 1): 0, (1, 0): 5, (1, 2): 3, (2, 1): 0}
        assert dijkstra_row(g, 0, lambda u, v: w[(u, v)]) == [0, 0, 3]
        assert dijkstra_row(g, 2, lambda u, v: w[(u, v)]) == [5, 0, 0]

    @settings(max_examples=60, deadline=None)
    @given(connected_graphs())
    def test_matches_networkx(self, g):
        assert all_pairs(g).values == nx_distances(g)

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs())
    def test_output_is_triangle_consistent(self, g):
        assert all_pairs(g).is_triangle_consistent(g)

    def test_brute_force_on_small_random_graphs(self):
        for seed in range(5):
            g = random_graph(seed, 6, wmax=9)
            exact = all_pairs(g)
            for s, t in itertools.permutations(range(6), 2):
                assert exact[s, t] == simple_paths_min(g, s, t)


class TestHopBounded:
    def test_zero_hops(self, triangle):
        assert hop_bounded_distances(triangle, 1, 0).row(1) == [INF, 0, INF]

    def test_triangle_h1_and_h2(self, triangle):
        assert hop_bounded_row(triangle, 0, 1) == [0, 1, 3]
        assert hop_bounded_row(triangle, 0, 2) == [0, 1, 2]

    def test_matches_enumeration_of_short_paths(self):
        g = random_graph(3, 6, wmax=9)
        for h in range(1, 5):
            row = hop_bounded_row(g, 0, h)
            assert row[1:] == [simple_paths_min(g, 0, t, max_hops=h) for t in range(1, 6)]

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs())
    def test_monotone_in_h_and_exact_at_n_minus_1(self, g):
        rows = [hop_bounded_row(g, 0, h) for h in range(g.n)]
        for a, b in zip(rows, rows[1:]):
            assert all(x >= y for x, y in zip(a, b))
        assert rows[-1] == dijkstra_row(g, 0)


class TestSPD:
    def test_unit_path(self):
        assert shortest_path_diameter(WeightedGraph(5, [(i, i + 1, 1) for i in range(4)])) == 4

    def test_strict_metric_complete_graph(self):
        g = WeightedGraph(4, [(u, v, 10 + u + v) for u in range(4) for v in range(u + 1, 4)])
        assert shortest_path_diameter(g) == 1

    def test_unit_cycle(self):
        assert shortest_path_diameter(WeightedGraph(6, [(i, (i + 1) % 6, 1) for i in range(6)])) == 3

    def test_disconnected_raises(self):
        with pytest.raises(DisconnectedGraphError):
            shortest_path_diameter(WeightedGraph(3, [(0, 1, 1)]))

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs())
    def test_is_the_fixpoint_of_the_hop_dp(self, g):
        spd = shortest_path_diameter(g)
        assert 0 <= spd <= g.n - 1
        exact = all_pairs(g)
        assert all(hop_bounded_row(g, s, spd) == exact.row(s) for s in range(g.n))
        if spd > 0:
            assert any(hop_bounded_row(g, s, spd - 1) != exact.row(s) for s in range(g.n))


class TestEccentricity:
    def test_single_edge(self):
        assert eccentricity_stats(WeightedGraph(2, [(0, 1, 7)])) == (7, 7, 1)

    def test_unit_star(self):
        assert eccentricity_stats(WeightedGraph(5, [(0, i, 1) for i in range(1, 5)])) == (2, 1, 2)

    def test_random_matches_networkx(self):
        for seed in range(5):
            g = random_graph(seed, 12)
            d = nx_distances(g)
            ecc = [max(r) for r in d]
            diam, rad, hops = eccentricity_stats(g)
            assert (diam, rad) == (max(ecc), min(ecc))
            assert hops == max(max(bfs_hops(g, s)) for s in range(g.n))

    def test_disconnected_raises(self):
        with pytest.raises(DisconnectedGraphError):
            eccentricity_stats(WeightedGraph(2))


class TestTextFormat:
    def test_round_trip(self, tmp_path):
        g = random_graph(1, 9)
        path = tmp_path / "g.txt"
        write_graph(g, path)
        assert read_graph(path) == g

    def test_comments_and_blank_lines(self):
        g = parse_graph("# demo\n3 2\n\n0 1 4\n# mid\n1 2 5\n")
        assert g.edges == [(0, 1, 4), (1, 2, 5)]

    @pytest.mark.parametrize(
        "text",
        ["", "3\n", "2 1\n", "2 1\n0 1\n", "2 1\n0 1 x\n", "2 1\n0 1 0\n", "2 1\n0 5 1\n", "2 1\n0 1 -3\n"],
    )
    def test_malformed(self, text):
        with pytest.raises(GraphFormatError):
            parse_graph(text)

    def test_rejects_fractional_weights(self):
        with pytest.raises(ValueError):
            format_graph(WeightedGraph(2, [(0, 1, Fraction(1, 2))]))


class TestComparisons:
    def test_ratio_range_and_within_factor(self):
        exact = DistanceTable([0], [[0, 4, 8]])
        approx = DistanceTable([0], [[0, 5, 8]])
        assert ratio_range(approx, exact) == (Fraction(1), Fraction(5, 4))
        assert within_factor(approx, exact, Fraction(5, 4))
        assert not within_factor(approx, exact, Fraction(6, 5))

    def test_missing_estimate_is_infinite_ratio(self):
        lo, hi = ratio_range(DistanceTable([0], [[0, INF]]), DistanceTable([0], [[0, 3]]))
        assert hi == INF
