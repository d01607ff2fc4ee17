"""
Bounded-hop SSSP by rounding
============================

Weights get rounded up at a series of scales so that short-hop paths fit
into a small number of unit steps.  Each node broadcasts once per scale.
"""

from fractions import Fraction

from congest_sp import Simulator, WeightedGraph, bounded_hop_sssp
from congest_sp.graph import dijkstra_row, hop_bounded_row
from congest_sp.harness import generate_graph

g = generate_graph("erdos_renyi", 40, seed=3, wmax=200)
eps = Fraction(1, 4)
h = 6

sim = Simulator()
table = bounded_hop_sssp(sim, g, 0, h, eps)
est = table.row(0)
exact = dijkstra_row(g, 0)
hop = hop_bounded_row(g, 0, h)

print(f"{len(table.family)} scales, K = {table.family.K}, {sim.trace.total_rounds} rounds")
for v in range(8):
    print(f"  node {v}: dist {exact[v]:>4}  dist^{h} {hop[v]!s:>4}  estimate {float(est[v]):8.2f}")

# the estimate never drops below the true distance and stays within
# (1 + eps) of the h-hop distance
print("dist <= estimate:", all(e <= d for e, d in zip(exact, est)))
print("estimate <= (1+eps) dist^h:", all(d <= (1 + eps) * x for d, x in zip(est, hop) if x != float("inf")))

# it can undercut dist^h, though: the rounded search is not hop-limited.
tri = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 3)])
d = bounded_hop_sssp(Simulator(), tri, 0, 1, Fraction(1, 2)).row(0)[2]
print("triangle, h = 1: dist^1(0, 2) = 3 but the estimate is", d)

# light-weight: nobody broadcasts more than once per scale
print("most broadcasts by one node:", max(b.get(0, 0) for b in table.broadcasts))
