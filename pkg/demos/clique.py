"""
Shortest paths on a fully connected network
===========================================

On a clique every node can broadcast its ceil(sqrt n) lightest edges in
that many rounds.  That is enough for exact SSSP in O(sqrt n) rounds and
for all-pairs estimates within about twice the true distance.
"""

import numpy as np

from congest_sp import SimConfig, Simulator, all_pairs, clique_apsp_approx, clique_sssp_exact
from congest_sp.graph import dijkstra_row
from congest_sp.harness import generate_graph

for n in (16, 64, 144):
    g = generate_graph("complete", n, seed=n, wmax=1000)
    sim = Simulator()
    row = clique_sssp_exact(sim, g, 0).row(0)
    print(
        f"n = {n:>3}: exact {row == dijkstra_row(g, 0)}, {sim.trace.total_rounds} rounds "
        f"({sim.trace.phase_rounds('bellman_ford')} of Bellman-Ford, 4 sqrt n = {4 * n ** 0.5:.0f})"
    )

g = generate_graph("complete", 36, seed=5, wmax=1000)
table = clique_apsp_approx(Simulator(SimConfig(seed=1)), g)
exact = np.array(all_pairs(g).values, dtype=float)
est = np.array(table.values, dtype=float)
mask = ~np.eye(g.n, dtype=bool)
ratios = est[mask] / exact[mask]
print(f"approximate APSP on 36 nodes: ratios in [{ratios.min():.3f}, {ratios.max():.3f}]")
print("share of exact pairs:", f"{(ratios == 1).mean():.0%}")
print("sampled sources:", table.view.sample)
