"""
Approximate SSSP through a landmark overlay
===========================================

Random landmarks cut long shortest paths into short pieces.  A multi-source
bounded-hop run gives a small virtual network on the landmarks, which is
then shortcut and solved with every virtual round costing one broadcast.
"""

from fractions import Fraction

from congest_sp import SimConfig, Simulator
from congest_sp.graph import dijkstra_row, hop_diameter
from congest_sp.harness import generate_graph
from congest_sp.overlay import hitting_fraction, sublinear_sssp

g = generate_graph("grid", 100, seed=2, wmax=64, cols=10)
eps = Fraction(1, 4)
exact = dijkstra_row(g, 0)

for seed in range(4):
    sim = Simulator(SimConfig(seed=seed))
    t = sublinear_sssp(sim, g, 0, eps=eps)
    ratio = max(float(d / e) for d, e in zip(t.row(0)[1:], exact[1:]))
    hit = hitting_fraction(g, 0, t.landmarks, t.h)
    print(
        f"seed {seed}: {len(t.landmarks):>2} landmarks, h = {t.h:>2}, "
        f"worst ratio {ratio:.3f} (bound {float((1 + eps) ** 3):.3f}), "
        f"{sim.trace.total_rounds} rounds, paths hit {hit:.0%}"
    )

print("hop diameter of the grid:", hop_diameter(g))

# where the rounds went
sim = Simulator()
sublinear_sssp(sim, g, 0, eps=eps)
for phase, r in sorted(sim.trace.phase_totals().items(), key=lambda kv: -kv[1]):
    print(f"  {phase:<24} {r}")
