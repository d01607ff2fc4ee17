"""Command line entry point: ``gen``, ``run``, ``oracle`` and ``report``.

Exit codes: 0 on success, 2 for an invalid config or arguments, 3 when a
run finished but at least one row errored.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .errors import CongestError
from .graph import INF, all_pairs, dijkstra, format_graph, read_graph, write_graph
from .harness import GENERATORS, WEIGHTS, generate_graph, load_config, run_experiment, summarize_reports

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ROW_ERROR = 3


def _param(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, float(value)


def _cmd_gen(args) -> int:
    graph = generate_graph(args.kind, args.n, args.seed, args.weights, args.wmax, **dict(args.param))
    if args.output:
        write_graph(graph, args.output)
    else:
        sys.stdout.write(format_graph(graph))
    return EXIT_OK


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.output:
        cfg.output = args.output
    if args.workers:
        cfg.workers = args.workers
    report = run_experiment(cfg)
    agg = report.aggregates()
    print(json.dumps(agg, sort_keys=True))
    if cfg.output:
        print(f"wrote {cfg.output}", file=sys.stderr)
    return EXIT_ROW_ERROR if report.errored else EXIT_OK


def _cmd_oracle(args) -> int:
    graph = read_graph(args.graph)
    table = dijkstra(graph, args.source) if args.source is not None else all_pairs(graph)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["source", *range(graph.n)])
    for s in table.sources:
        writer.writerow([s, *("inf" if d == INF else d for d in table.row(s))])
    return EXIT_OK


def _cmd_report(args) -> int:
    rows = summarize_reports(args.reports)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        if rows:
            writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="congest-sp", description="Simulated distributed shortest paths.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a generated graph")
    gen.add_argument("kind", choices=GENERATORS)
    gen.add_argument("n", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--weights", choices=WEIGHTS, default="uniform")
    gen.add_argument("--wmax", type=int, default=16)
    gen.add_argument("--param", type=_param, action="append", default=[], help="generator parameter, e.g. p=0.1")
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=_cmd_gen)

    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config")
    run.add_argument("-o", "--output")
    run.add_argument("--workers", type=int)
    run.set_defaults(func=_cmd_run)

    oracle = sub.add_parser("oracle", help="exact distances for a graph file")
    oracle.add_argument("graph")
    oracle.add_argument("--source", type=int)
    oracle.set_defaults(func=_cmd_oracle)

    report = sub.add_parser("report", help="aggregate report CSVs")
    report.add_argument("reports", nargs="+", type=Path)
    report.add_argument("-o", "--output")
    report.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (CongestError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
