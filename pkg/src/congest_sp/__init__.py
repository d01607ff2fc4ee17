"""Distributed weighted shortest paths on a simulated CONGEST network."""

from .clique import clique_apsp_approx, clique_sssp_exact
from .errors import (
    CapacityExceeded,
    CongestError,
    DisconnectedGraphError,
    GraphFormatError,
    InvalidConfigError,
    MaxRoundsExceeded,
    NotCompleteError,
)
from .graph import (
    INF,
    DistanceTable,
    WeightedGraph,
    all_pairs,
    dijkstra,
    hop_bounded_distances,
    parse_graph,
    read_graph,
    shortest_path_diameter,
    write_graph,
)
from .harness import ExperimentConfig, generate_graph, run_experiment
from .metrics import approx_apsp_scales, approx_diameter, approx_radius, apsp_linear
from .overlay import sublinear_sssp
from .rounding import bounded_distance_sssp, bounded_hop_sssp, multi_source_bounded_hop
from .scaling import exact_apsp
from .shortcuts import k_nearest, shortcut_graph, shortcuts_from_union
from .sim import CapacityPolicy, SimConfig, Simulator, run_simulation

__version__ = "0.1.0"

__all__ = [
    "CapacityExceeded",
    "CapacityPolicy",
    "CongestError",
    "DisconnectedGraphError",
    "DistanceTable",
    "ExperimentConfig",
    "GraphFormatError",
    "INF",
    "InvalidConfigError",
    "MaxRoundsExceeded",
    "NotCompleteError",
    "SimConfig",
    "Simulator",
    "WeightedGraph",
    "all_pairs",
    "approx_apsp_scales",
    "approx_diameter",
    "approx_radius",
    "apsp_linear",
    "bounded_distance_sssp",
    "bounded_hop_sssp",
    "clique_apsp_approx",
    "clique_sssp_exact",
    "dijkstra",
    "exact_apsp",
    "generate_graph",
    "hop_bounded_distances",
    "k_nearest",
    "multi_source_bounded_hop",
    "parse_graph",
    "read_graph",
    "run_experiment",
    "run_simulation",
    "shortcut_graph",
    "shortcuts_from_union",
    "shortest_path_diameter",
    "sublinear_sssp",
    "write_graph",
]
