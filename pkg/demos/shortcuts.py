"""
Shortcut graphs shrink the shortest-path diameter
=================================================

Connecting every node to its k nearest nodes at their true distance keeps
all distances and brings the shortest-path diameter under 4n/k.
"""

import math

from congest_sp import WeightedGraph, all_pairs, shortest_path_diameter
from congest_sp.shortcuts import k_nearest, shortcut_graph, shortcut_set, shortcuts_from_union, union_graph

path = WeightedGraph(32, [(i, i + 1, 1) for i in range(31)])
print("unit path on 32 nodes, SPD", shortest_path_diameter(path))
for k in (1, 2, 4, 8, 31):
    h = shortcut_graph(path, k)
    print(f"  k = {k:>2}: SPD {shortest_path_diameter(h):>2}  (bound {4 * 32 / k:.1f})")

# k nearest of node 10
print("5 nearest of node 10:", k_nearest(path, 10, 5))

# Each node only needs the k lightest edges of everyone else to find its
# k nearest nodes.
from congest_sp.harness import generate_graph

g = generate_graph("random_geometric", 40, seed=1, wmax=50)
k = math.isqrt(39) + 1
u = union_graph(g, k)
print(f"union of the {k} lightest edges per node: {u.m} of {g.m} edges")
print("same nearest sets:", shortcuts_from_union(u, k).nearest == shortcut_set(g, k).nearest)
print("distances unchanged:", all_pairs(shortcut_graph(g, k)).values == all_pairs(g).values)
