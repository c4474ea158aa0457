"""Command-line pipeline: ingest -> snapshot -> query / score / chart / export-dot.

Exit codes: 0 ok, 1 usage, 2 query error, 3 input/snapshot error,
4 journal not found, 5 chart/column error.

Every config flag can also be set through an environment variable with the
``SCIGRAPH_`` prefix (``SCIGRAPH_AUTHOR_THRESHOLD``, ``SCIGRAPH_JOURNAL_THRESHOLD``,
``SCIGRAPH_TITLE_THRESHOLD``, ``SCIGRAPH_ALPHA``, ``SCIGRAPH_SCALE_A``,
``SCIGRAPH_SNIP_DEFAULT``). Command-line flags win over the environment.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import charts, snapshot
from .errors import ChartError, ScigraphError, SnapshotError, TypeMismatch
from .graph import LABELS, REL_TYPES, PropertyGraph
from .indicators import journal_indicators
from .ingest import Thresholds, ingest_lines
from .internationality import DEFAULT_ALPHA, ScoreParams, check_simplex, optimal_elasticities, score
from .pql import QuerySyntaxError, run
from .similarity import check_threshold, first_match, normalize_text

log = logging.getLogger("scigraph")

EXIT_OK, EXIT_USAGE, EXIT_QUERY, EXIT_INPUT, EXIT_NOT_FOUND, EXIT_CHART = range(6)
ENV_PREFIX = "SCIGRAPH_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class Config:
    author_threshold: float = 0.75
    journal_threshold: float = 0.75
    title_threshold: float = 0.90
    alpha: tuple[float, ...] = DEFAULT_ALPHA
    scale_A: float = 1.0
    snip_default: float = 1.0

    @property
    def thresholds(self) -> Thresholds:
        return Thresholds(self.author_threshold, self.journal_threshold, self.title_threshold)


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"expected a number, got {text!r}") from None


_CONFIG_FIELDS = {
    "author_threshold": _float,
    "journal_threshold": _float,
    "title_threshold": _float,
    "alpha": _float_list,
    "scale_A": _float,
    "snip_default": _float,
}


def resolve_config(args: argparse.Namespace, environ: Optional[dict[str, str]] = None) -> Config:
    environ = os.environ if environ is None else environ
    values = {}
    for name, convert in _CONFIG_FIELDS.items():
        flag = getattr(args, name, None)
        env = environ.get(ENV_PREFIX + name.upper())
        if flag is not None:
            values[name] = convert(flag)
        elif env is not None:
            values[name] = convert(env)
    config = Config(**values)
    for value in (config.author_threshold, config.journal_threshold, config.title_threshold):
        try:
            check_threshold(value)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if not (math.isfinite(config.scale_A) and config.scale_A > 0):
        raise UsageError("--scale-a must be positive")
    if not (math.isfinite(config.snip_default) and config.snip_default >= 0):
        raise UsageError("--snip-default must be non-negative")
    return config


def _emit(text: str, output: Optional[str]) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_bytes(text.encode("utf-8"))  # type: ignore[arg-type]


def _load(path: str) -> tuple[PropertyGraph, dict]:
    return snapshot.load(path)


def cmd_ingest(args: argparse.Namespace, config: Config) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    graph, report = ingest_lines(lines, config.thresholds)
    meta = {
        "thresholds": {
            "author": config.author_threshold,
            "journal": config.journal_threshold,
            "title": config.title_threshold,
        }
    }
    try:
        snapshot.save(graph, args.output, meta)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(report.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_query(args: argparse.Namespace, config: Config) -> int:
    graph, _ = _load(args.snapshot)
    table = run(graph, args.query)
    _emit(table.to_csv() if args.format == "csv" else table.to_json() + "\n", None)
    return EXIT_OK


def find_journal(graph: PropertyGraph, name: str, threshold: float) -> Optional[int]:
    wanted = normalize_text(name)
    journals = graph.nodes_with_label("Journal")
    for jid in journals:
        if graph.node(jid).name == wanted:
            return jid
    hit = first_match(wanted, [graph.node(jid).name for jid in journals], threshold)
    return None if hit is None else journals[hit]


def cmd_score(args: argparse.Namespace, config: Config) -> int:
    graph, _ = _load(args.snapshot)
    jid = find_journal(graph, args.journal, config.journal_threshold)
    if jid is None:
        print(f"error: journal not found: {args.journal}", file=sys.stderr)
        return EXIT_NOT_FOUND
    props = graph.node(jid).properties
    snip = float(props.get("snip", config.snip_default))
    ind = journal_indicators(graph, jid, snip, config.author_threshold)
    params = ScoreParams(config.scale_A)
    if args.optimize_alpha:
        alpha, y = optimal_elasticities(ind.vector, params)
    else:
        alpha, y = list(config.alpha), score(ind.vector, config.alpha, params)
    result = {
        "journal": props["name"],
        "x1": ind.x1,
        "x2": ind.x2,
        "x3": ind.x3,
        "x4": ind.x4,
        "alpha": alpha,
        "A": config.scale_A,
        "internationality": y,
    }
    print(json.dumps(result))
    return EXIT_OK


def cmd_chart(args: argparse.Namespace, config: Config) -> int:
    graph, _ = _load(args.snapshot)
    table = run(graph, args.query)
    if args.kind == "line":
        data = charts.line_series(table, args.x_col, args.group_col)
    elif args.kind == "area":
        data = charts.area_series(table, [c for c in args.cols.split(",") if c])
    else:
        data = charts.pie_counts(table, args.col)
    _emit(charts.to_csv(data), args.output)
    return EXIT_OK


def _names(text: Optional[str], allowed: tuple[str, ...], what: str) -> list[str]:
    if not text:
        return []
    names = [part.strip() for part in text.split(",") if part.strip()]
    unknown = [n for n in names if n not in allowed]
    if unknown:
        raise UsageError(f"unknown {what}: {', '.join(unknown)}")
    return names


def cmd_export_dot(args: argparse.Namespace, config: Config) -> int:
    labels = _names(args.labels, LABELS, "label")
    rels = _names(args.rels, REL_TYPES, "relationship type")
    graph, _ = _load(args.snapshot)
    _emit(charts.export_dot(graph, labels, rels), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    config = argparse.ArgumentParser(add_help=False)
    group = config.add_argument_group("configuration")
    group.add_argument("--author-threshold", dest="author_threshold")
    group.add_argument("--journal-threshold", dest="journal_threshold")
    group.add_argument("--title-threshold", dest="title_threshold")
    group.add_argument("--alpha", help="four comma-separated elasticities")
    group.add_argument("--scale-a", dest="scale_A")
    group.add_argument("--snip-default", dest="snip_default")

    parser = _Parser(prog="scigraph", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[config], help="build a snapshot from JSONL")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="snapshot path")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("query", parents=[config], help="run a pattern query")
    p.add_argument("snapshot")
    p.add_argument("query")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("score", parents=[config], help="internationality score of a journal")
    p.add_argument("snapshot")
    p.add_argument("--journal", required=True)
    p.add_argument("--optimize-alpha", action="store_true")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("chart", parents=[config], help="chart data as CSV")
    p.add_argument("snapshot")
    p.add_argument("kind", choices=("line", "area", "pie"))
    p.add_argument("query")
    p.add_argument("--x-col")
    p.add_argument("--group-col")
    p.add_argument("--cols", help="comma-separated columns (area)")
    p.add_argument("--col", help="category column (pie)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("export-dot", parents=[config], help="DOT graph of selected labels")
    p.add_argument("snapshot")
    p.add_argument("--labels", default="")
    p.add_argument("--rels", default="")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)
    return parser


def _check_chart_flags(args: argparse.Namespace) -> None:
    required = {"line": ("x_col", "group_col"), "area": ("cols",), "pie": ("col",)}[args.kind]
    missing = [f"--{name.replace('_', '-')}" for name in required if not getattr(args, name)]
    if missing:
        raise UsageError(f"chart {args.kind} requires {', '.join(missing)}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = resolve_config(args)
        if args.command == "chart":
            _check_chart_flags(args)
        if args.command == "score" and not args.optimize_alpha:
            if len(config.alpha) != 4:
                raise UsageError("--alpha needs exactly four values")
            try:
                check_simplex(config.alpha)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        return args.func(args, config)
    except UsageError as exc:
        print(f"scigraph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuerySyntaxError, TypeMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUERY
    except SnapshotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ChartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHART
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScigraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
