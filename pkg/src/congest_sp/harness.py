"""Graph generators, experiment runs and reports.

A run takes an :class:`ExperimentConfig`, builds one graph per seed, runs
the chosen algorithm on a fresh :class:`~congest_sp.sim.Simulator` and
compares the output with a sequential oracle.  Rows go to a CSV file with
fixed columns; a JSON sidecar holds the config and aggregate percentiles.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .clique import clique_apsp_approx, clique_sssp_exact
from .errors import CongestError, InvalidConfigError
from .graph import (
    INF,
    DistanceTable,
    WeightedGraph,
    all_pairs,
    eccentricity_stats,
    hop_bounded_distances,
    hop_diameter,
    read_graph,
)
from .metrics import approx_apsp_scales, approx_diameter, approx_radius, apsp_linear
from .overlay import sublinear_sssp
from .rounding import bounded_hop_sssp, multi_source_bounded_hop
from .scaling import exact_apsp
from .sim import CapacityPolicy, SimConfig, Simulator, bellman_ford_sssp

GENERATORS = ("path", "cycle", "star", "complete", "erdos_renyi", "random_geometric", "grid")
WEIGHTS = ("unit", "uniform", "exponential")
MAX_SAFE = 2**63

CSV_COLUMNS = (
    "instance",
    "seed",
    "algorithm",
    "n",
    "m",
    "rounds",
    "max_edge_load",
    "min_ratio",
    "max_ratio",
    "exact",
    "status",
    "error",
    "wall_time",
)


# --------------------------------------------------------------------------
# Generators
# --------------------------------------------------------------------------

def _draw_weight(rng: np.random.Generator, dist: str, wmax: int) -> int:
    if dist == "unit":
        return 1
    if dist == "uniform":
        return int(rng.integers(1, wmax + 1))
    # discretized exponential with mean about wmax / 4, clipped to [1, wmax]
    return int(min(wmax, max(1, math.ceil(rng.exponential(max(wmax / 4, 1))))))


def _topology(kind: str, n: int, rng: np.random.Generator, params: dict) -> list[tuple[int, int]]:
    if kind == "path":
        return [(i, i + 1) for i in range(n - 1)]
    if kind == "cycle":
        pairs = [(i, i + 1) for i in range(n - 1)]
        return pairs + [(0, n - 1)] if n > 2 else pairs
    if kind == "star":
        return [(0, i) for i in range(1, n)]
    if kind == "complete":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if kind == "erdos_renyi":
        p = float(params.get("p", min(1.0, 2 * math.log(max(n, 2)) / max(n, 1))))
        if not 0 <= p <= 1:
            raise InvalidConfigError(f"p must lie in [0, 1], got {p}")
        iu, ju = np.triu_indices(n, 1)
        keep = rng.random(iu.size) < p
        return list(zip(iu[keep].tolist(), ju[keep].tolist()))
    if kind == "random_geometric":
        r = float(params.get("r", math.sqrt(2 * math.log(max(n, 2)) / max(n, 1))))
        if r <= 0:
            raise InvalidConfigError(f"radius must be positive, got {r}")
        pts = rng.random((n, 2))
        d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
        iu, ju = np.triu_indices(n, 1)
        keep = d2[iu, ju] <= r * r
        return list(zip(iu[keep].tolist(), ju[keep].tolist()))
    if kind == "grid":
        cols = int(params.get("cols", max(1, math.isqrt(n))))
        if cols < 1:
            raise InvalidConfigError("grid needs cols >= 1")
        pairs = []
        for v in range(n):
            r, c = divmod(v, cols)
            if c + 1 < cols and v + 1 < n:
                pairs.append((v, v + 1))
            if v + cols < n:
                pairs.append((v, v + cols))
        return pairs
    raise InvalidConfigError(f"unknown generator {kind!r}; expected one of {', '.join(GENERATORS)}")


def _components(n: int, pairs) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        a, b = find(u), find(v)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(n)]


def generate_graph(
    kind: str,
    n: int,
    seed: int = 0,
    weights: str = "uniform",
    wmax: int = 16,
    **params,
) -> WeightedGraph:
    """A connected weighted graph; disconnected draws get one extra edge per missing link."""
    if n < 1:
        raise InvalidConfigError(f"n must be positive, got {n}")
    if weights not in WEIGHTS:
        raise InvalidConfigError(f"unknown weight distribution {weights!r}")
    if wmax < 1:
        raise InvalidConfigError("wmax must be at least 1")
    if n * wmax >= MAX_SAFE:
        raise InvalidConfigError("n * wmax exceeds the 64-bit range")
    rng = np.random.default_rng([seed, n])
    pairs = _topology(kind, n, rng, params)
    roots = sorted(set(_components(n, pairs)))
    # link each component to a random node of an earlier one
    comp = _components(n, pairs)
    for i in range(1, len(roots)):
        earlier = [v for v in range(n) if comp[v] in roots[:i]]
        pairs.append((int(earlier[rng.integers(len(earlier))]), roots[i]))
    edges = [(u, v, _draw_weight(rng, weights, wmax)) for u, v in pairs]
    return WeightedGraph(n, edges)


# --------------------------------------------------------------------------
# Configuration
# --------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    algorithm: str
    graph: str = "erdos_renyi"
    n: int = 32
    weights: str = "uniform"
    wmax: int = 16
    eps: str | None = None
    source: int = 0
    sources: int | None = None
    h: int | None = None
    graph_params: dict = field(default_factory=dict)
    input_path: str | None = None
    seeds: list = field(default_factory=lambda: [0])
    capacity_policy: str = "record_only"
    edge_capacity: int = 1
    slack: int | None = None
    workers: int = 1
    output: str | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidConfigError(f"unknown algorithm {self.algorithm!r}")
        if not self.seeds:
            raise InvalidConfigError("seeds must be nonempty")
        self.seeds = [int(s) for s in self.seeds]
        if self.input_path is None and self.graph not in GENERATORS:
            raise InvalidConfigError(f"unknown generator {self.graph!r}")
        if self.weights not in WEIGHTS:
            raise InvalidConfigError(f"unknown weight distribution {self.weights!r}")
        if self.n < 1 or self.wmax < 1:
            raise InvalidConfigError("n and wmax must be positive")
        if self.n * self.wmax >= MAX_SAFE:
            raise InvalidConfigError("n * wmax exceeds the 64-bit range")
        try:
            CapacityPolicy(self.capacity_policy)
        except ValueError:
            raise InvalidConfigError(f"unknown capacity policy {self.capacity_policy!r}") from None
        if self.eps is not None:
            e = Fraction(str(self.eps))
            if not 0 < e <= 1:
                raise InvalidConfigError(f"eps must lie in (0, 1], got {self.eps}")
        if self.h is not None and self.h < 0:
            raise InvalidConfigError("h must be nonnegative")
        if not 0 <= self.source < self.n:
            raise InvalidConfigError("source out of range")

    @property
    def eps_value(self) -> Fraction | None:
        return None if self.eps is None else Fraction(str(self.eps))

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise InvalidConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
        if "algorithm" not in data:
            raise InvalidConfigError("config needs an algorithm")
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidConfigError(str(exc)) from None


def parse_config_text(text: str) -> ExperimentConfig:
    """JSON object, or flat ``key=value`` lines (``#`` starts a comment)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidConfigError(f"bad JSON config: {exc}") from None
        return ExperimentConfig.from_mapping(data)
    data: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "seeds":
            data[key] = [int(s) for s in value.replace(",", " ").split()]
        elif key == "eps":
            data[key] = value
        else:
            try:
                data[key] = json.loads(value)
            except json.JSONDecodeError:
                data[key] = value
    return ExperimentConfig.from_mapping(data)


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config_text(Path(path).read_text())


# --------------------------------------------------------------------------
# Algorithms and oracles
# --------------------------------------------------------------------------

_ORACLE_CACHE: dict[tuple, Any] = {}


def cached_oracle(graph: WeightedGraph, kind: str = "apsp"):
    """Sequential answers keyed by the graph's content hash."""
    key = (graph.digest(), kind)
    if key not in _ORACLE_CACHE:
        if kind == "apsp":
            _ORACLE_CACHE[key] = all_pairs(graph)
        elif kind == "metrics":
            _ORACLE_CACHE[key] = eccentricity_stats(graph)
        elif kind == "hopdiam":
            _ORACLE_CACHE[key] = hop_diameter(graph)
        else:
            raise ValueError(kind)
    return _ORACLE_CACHE[key]


def _rows_of(table: DistanceTable, exact: DistanceTable) -> tuple[list, list]:
    approx = [table.row(s) for s in table.sources]
    truth = [exact.row(s) for s in table.sources]
    return approx, truth


def _ratios(approx: list[list], truth: list[list]) -> tuple[float, float]:
    lo, hi = math.inf, 0.0
    for ra, rt in zip(approx, truth):
        for a, t in zip(ra, rt):
            if t == INF:
                continue
            if t == 0:
                if a != 0:
                    return min(lo, math.inf), math.inf
                continue
            r = float(Fraction(a) / Fraction(t)) if a != INF else math.inf
            lo, hi = min(lo, r), max(hi, r)
    if hi == 0.0:
        return 1.0, 1.0
    return lo, hi


def _run_algorithm(cfg: ExperimentConfig, graph: WeightedGraph, sim: Simulator, seed: int):
    """Returns ``(approx_rows, truth_rows)``."""
    alg = cfg.algorithm
    eps = cfg.eps_value
    n = graph.n
    s = cfg.source
    if alg == "dijkstra":
        exact = cached_oracle(graph)
        return _rows_of(exact, exact)
    if alg == "bellman_ford":
        row = bellman_ford_sssp(sim, graph, s, max(n - 1, 1))
        return [row], [cached_oracle(graph).row(s)]
    if alg == "bounded_hop_sssp":
        h = n if cfg.h is None else cfg.h
        table = bounded_hop_sssp(sim, graph, s, h, eps)
        return [table.row(s)], [hop_bounded_distances(graph, s, h).row(s)]
    if alg == "multi_source_bounded_hop":
        h = n if cfg.h is None else cfg.h
        k = n if cfg.sources is None else cfg.sources
        table = multi_source_bounded_hop(sim, graph, range(min(k, n)), h, eps, seed)
        truth = [hop_bounded_distances(graph, x, h).row(x) for x in table.sources]
        return [table.row(x) for x in table.sources], truth
    if alg == "clique_sssp_exact":
        table = clique_sssp_exact(sim, graph, s)
        return [table.row(s)], [cached_oracle(graph).row(s)]
    if alg == "clique_apsp_approx":
        return _rows_of(clique_apsp_approx(sim, graph, eps, seed), cached_oracle(graph))
    if alg == "sublinear_sssp":
        table = sublinear_sssp(sim, graph, s, seed, eps, hop_diam=cached_oracle(graph, "hopdiam"))
        return [table.row(s)], [cached_oracle(graph).row(s)]
    if alg in ("approx_diameter", "approx_radius"):
        fn = approx_diameter if alg == "approx_diameter" else approx_radius
        value = fn(sim, graph, eps)
        diam, rad, _ = cached_oracle(graph, "metrics")
        return [[value]], [[diam if alg == "approx_diameter" else rad]]
    if alg == "approx_apsp_scales":
        return _rows_of(approx_apsp_scales(sim, graph, eps), cached_oracle(graph))
    if alg == "apsp_linear":
        return _rows_of(apsp_linear(sim, graph, eps, seed), cached_oracle(graph))
    if alg == "exact_apsp":
        return _rows_of(exact_apsp(sim, graph, seed, slack=cfg.slack), cached_oracle(graph))
    raise InvalidConfigError(f"unknown algorithm {alg!r}")


ALGORITHMS = (
    "dijkstra",
    "bellman_ford",
    "bounded_hop_sssp",
    "multi_source_bounded_hop",
    "clique_sssp_exact",
    "clique_apsp_approx",
    "sublinear_sssp",
    "approx_diameter",
    "approx_radius",
    "approx_apsp_scales",
    "apsp_linear",
    "exact_apsp",
)


# --------------------------------------------------------------------------
# Runs and reports
# --------------------------------------------------------------------------

@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[dict]

    @property
    def errored(self) -> bool:
        return any(r["status"] != "ok" for r in self.rows)

    def aggregates(self) -> dict:
        ok = [r for r in self.rows if r["status"] == "ok"]
        out: dict[str, Any] = {"rows": len(self.rows), "errors": len(self.rows) - len(ok)}
        for col in ("rounds", "max_edge_load", "max_ratio"):
            vals = np.array([r[col] for r in ok], dtype=float)
            if vals.size:
                p = np.percentile(vals, [0, 50, 95, 100])
                out[col] = dict(zip(("min", "p50", "p95", "max"), (float(x) for x in p)))
        out["exact_rows"] = sum(bool(r["exact"]) for r in ok)
        return out

    def write(self, path: str | Path) -> tuple[Path, Path]:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow(_csv_row(row))
        sidecar = path.with_suffix(path.suffix + ".json")
        sidecar.write_text(
            json.dumps({"config": asdict(self.config), "aggregates": self.aggregates()}, indent=2, sort_keys=True)
            + "\n"
        )
        return path, sidecar


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return f"{x:.6f}"
    return str(x)


def _csv_row(row: dict) -> dict:
    return {k: _fmt(row[k]) for k in CSV_COLUMNS}


def instance_graph(cfg: ExperimentConfig, seed: int) -> WeightedGraph:
    if cfg.input_path is not None:
        return read_graph(cfg.input_path)
    return generate_graph(cfg.graph, cfg.n, seed, cfg.weights, cfg.wmax, **cfg.graph_params)


def run_row(cfg: ExperimentConfig, seed: int) -> dict:
    """One (instance, seed) row; algorithm failures become an ``error`` status."""
    instance = cfg.input_path or f"{cfg.graph}-{cfg.n}-{cfg.weights}-{cfg.wmax}"
    row: dict[str, Any] = {
        "instance": instance,
        "seed": seed,
        "algorithm": cfg.algorithm,
        "n": cfg.n,
        "m": 0,
        "rounds": 0,
        "max_edge_load": 0,
        "min_ratio": math.nan,
        "max_ratio": math.nan,
        "exact": False,
        "status": "ok",
        "error": "",
    }
    start = time.perf_counter()
    sim = Simulator(
        SimConfig(
            edge_capacity=cfg.edge_capacity,
            capacity_policy=CapacityPolicy(cfg.capacity_policy),
            seed=seed,
        )
    )
    try:
        graph = instance_graph(cfg, seed)
        row["n"], row["m"] = graph.n, graph.m
        approx, truth = _run_algorithm(cfg, graph, sim, seed)
        lo, hi = _ratios(approx, truth)
        row["min_ratio"], row["max_ratio"] = lo, hi
        row["exact"] = approx == truth
    except (CongestError, ValueError) as exc:
        row["status"] = "error"
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["rounds"] = sim.trace.total_rounds
    row["max_edge_load"] = sim.trace.max_edge_load
    row["wall_time"] = time.perf_counter() - start
    return row


def run_experiment(cfg: ExperimentConfig, *, write: bool = True) -> ExperimentReport:
    """Run every seed; rows come back in seed order whatever the worker count."""
    seeds = list(cfg.seeds)
    if cfg.workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(run_row, [cfg] * len(seeds), seeds))
    else:
        rows = [run_row(cfg, s) for s in seeds]
    report = ExperimentReport(cfg, rows)
    if write and cfg.output:
        report.write(cfg.output)
    return report


def read_report(path: str | Path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def summarize_reports(paths, key: Callable[[dict], Any] | None = None) -> list[dict]:
    """Per-algorithm aggregate over several report CSVs."""
    groups: dict[tuple, list[dict]] = {}
    for p in paths:
        for row in read_report(p):
            k = (row["algorithm"], row["instance"]) if key is None else key(row)
            groups.setdefault(k, []).append(row)
    out = []
    for k, rows in sorted(groups.items()):
        ok = [r for r in rows if r["status"] == "ok"]
        rounds = [float(r["rounds"]) for r in ok]
        ratios = [float(r["max_ratio"]) for r in ok]
        out.append(
            {
                "algorithm": k[0],
                "instance": k[1] if len(k) > 1 else "",
                "rows": len(rows),
                "errors": len(rows) - len(ok),
                "mean_rounds": float(np.mean(rounds)) if rounds else math.nan,
                "max_ratio": max(ratios) if ratios else math.nan,
                "exact_rows": sum(r["exact"] == "True" for r in ok),
            }
        )
    return out
