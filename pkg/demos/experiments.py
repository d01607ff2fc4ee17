"""
Running experiments
===================

The harness turns a config into one CSV row per seed, compared against a
sequential oracle.  The same thing is available as ``congest-sp run``.
"""

import tempfile
from pathlib import Path

from congest_sp.harness import ExperimentConfig, parse_config_text, read_report, run_experiment

cfg = parse_config_text(
    """
    algorithm = sublinear_sssp
    graph = erdos_renyi
    n = 48
    wmax = 256
    seeds = 0 1 2 3
    eps = 1/4
    """
)
out = Path(tempfile.mkdtemp()) / "sublinear.csv"
cfg.output = str(out)
report = run_experiment(cfg)
for row in read_report(out):
    print(row["seed"], row["rounds"], row["max_ratio"], row["status"])
print(report.aggregates())

# a failing row does not stop the batch
bad = run_experiment(ExperimentConfig("clique_sssp_exact", graph="path", n=6, seeds=[0]), write=False)
print(bad.rows[0]["status"], bad.rows[0]["error"])
