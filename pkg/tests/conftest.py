import random
import sys

import networkx as nx
import pytest
from hypothesis import strategies as st

from congest_sp.graph import INF, WeightedGraph
from congest_sp.sim import SimConfig, Simulator


def random_graph(seed, n, wmax=16, extra=None, complete=False):
    """Random spanning tree plus ``extra`` random chords (default ``n``)."""
    rnd = random.Random(seed)
    edges = {}
    if complete:
        for u in range(n):
            for v in range(u + 1, n):
                edges[(u, v)] = rnd.randint(1, wmax)
    else:
        for v in range(1, n):
            edges[(rnd.randrange(v), v)] = rnd.randint(1, wmax)
        for _ in range(n if extra is None else extra):
            if n < 2:
                break
            a, b = sorted(rnd.sample(range(n), 2))
            edges[(a, b)] = rnd.randint(1, wmax)
    return WeightedGraph(n, [(a, b, w) for (a, b), w in edges.items()])


def to_nx(graph):
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_weighted_edges_from(graph.edges)
    return g


def nx_distances(graph):
    """Independent all-pairs distances, ``INF`` when unreachable."""
    lengths = dict(nx.all_pairs_dijkstra_path_length(to_nx(graph)))
    return [[lengths[s].get(v, INF) for v in range(graph.n)] for s in range(graph.n)]


@pytest.fixture
def sim():
    return Simulator(SimConfig(seed=7))


@pytest.fixture
def triangle():
    return WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)])


@st.composite
def connected_graphs(draw, min_n=2, max_n=10, max_w=20):
    n = draw(st.integers(min_n, max_n))
    edges = {}
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges[(u, v)] = draw(st.integers(1, max_w))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(1, max_w)), max_size=2 * n))
    for a, b, w in extra:
        if a != b:
            edges[(min(a, b), max(a, b))] = w
    return WeightedGraph(n, [(a, b, w) for (a, b), w in edges.items()])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS, key=lambda k: int(k.split()[0])):
        terminalreporter.write_line(mod.RESULTS[key])
    for line in mod.NOTES:
        terminalreporter.write_line(line)
