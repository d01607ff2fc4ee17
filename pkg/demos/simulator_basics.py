"""
A first look at the round simulator
===================================

Nodes are small programs.  In each round a node reads its inbox and
returns messages; whatever it sends in round r arrives in round r + 1.
"""

from congest_sp import SimConfig, Simulator, WeightedGraph
from congest_sp.sim import NodeProgram, broadcast_all, build_bfs_tree

# a 6-cycle with unit weights
ring = WeightedGraph(6, [(i, (i + 1) % 6, 1) for i in range(6)])


class Rumor(NodeProgram):
    # node 0 starts the rumor, everyone else passes it on once
    def __init__(self, u):
        self.heard_at = 0 if u == 0 else None

    def step(self, rnd, inbox):
        if rnd == 0 and self.heard_at == 0:
            return [(None, "psst")]  # None means every neighbor
        if inbox and self.heard_at is None:
            self.heard_at = rnd
            return [(None, "psst")]
        return []


sim = Simulator(SimConfig(record_loads=True))
programs = [Rumor(u) for u in range(ring.n)]
sim.run(ring, programs, phase="rumor")
print("round each node heard the rumor:", [p.heard_at for p in programs])
print("rounds used:", sim.trace.total_rounds)
print("busiest edge in any round carried", sim.trace.max_edge_load, "message(s)")

# BFS trees are the workhorse for global communication.
tree = build_bfs_tree(sim, ring, 0)
print("tree parents:", tree.parent, "depth", tree.depth)

# broadcast_all pipelines items through the tree so every node gets all of them
before = sim.clock
broadcast_all(sim, tree, [(u, f"hello from {u}") for u in range(ring.n)])
print("6 items to 6 nodes took", sim.clock - before, "rounds")

# the trace is JSON-ready
print(sorted(sim.trace.to_dict()))
