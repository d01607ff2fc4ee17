"""
Diameter, radius and all-pairs estimates
========================================

One exact SSSP from node 0 gives the diameter up to a factor two.  That is
enough to pick a single rounding scale under which every distance fits in
O(n / eps) unit steps, so all n searches run at once with random delays.
"""

from fractions import Fraction

from congest_sp import Simulator, all_pairs
from congest_sp.graph import eccentricity_stats
from congest_sp.harness import generate_graph
from congest_sp.metrics import apsp_linear, approx_apsp_scales, approx_diameter, approx_radius

g = generate_graph("random_geometric", 48, seed=4, wmax=300)
eps = Fraction(1, 5)
diam, rad, hops = eccentricity_stats(g)

sim = Simulator()
d = approx_diameter(sim, g, eps)
print(f"diameter {diam}, estimate {float(d):.1f} (<= {float((1 + eps) * diam):.1f}), {sim.trace.total_rounds} rounds")
sim = Simulator()
r = approx_radius(sim, g, eps)
print(f"radius   {rad}, estimate {float(r):.1f} (<= {float((1 + eps) * rad):.1f}), {sim.trace.total_rounds} rounds")

exact = all_pairs(g).values
for name, fn in (("scale by scale", approx_apsp_scales), ("all scales at once", apsp_linear)):
    sim = Simulator()
    t = fn(sim, g, eps)
    worst = max(float(t[u, v] / exact[u][v]) for u in range(g.n) for v in range(g.n) if u != v)
    print(f"APSP {name:<18}: worst ratio {worst:.3f}, {sim.trace.total_rounds} rounds, max load {sim.trace.max_edge_load}")

# round counts grow roughly linearly in n at a fixed eps
for n in (16, 32, 64, 128):
    sim = Simulator()
    apsp_linear(sim, generate_graph("erdos_renyi", n, seed=0), Fraction(1, 4))
    print(f"  n = {n:>3}: {sim.trace.total_rounds} rounds")
