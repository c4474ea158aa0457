"""Chart data (line, area, pie) as deterministic CSV, and DOT graph export."""

from __future__ import annotations

import csv
import io
import logging
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from pathlib import Path
from typing import IO, Union

from .errors import EmptyTable, NonIntegerX, NonNumericColumn, UnknownColumn
from .graph import PropertyGraph
from .pql.engine import ResultTable

log = logging.getLogger(__name__)

PALETTE = {
    "Journal": "blue",
    "Author": "purple",
    "Article": "yellow",
    "Country": "red",
    "Institute": "lightblue",
    "Region": "green",
}

_CENT = Decimal("0.01")


@dataclass
class LineSeries:
    groups: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    dropped: int = 0


@dataclass
class AreaSeries:
    columns: list[str]
    rows: list[tuple[int, tuple[Union[int, float], ...]]] = field(default_factory=list)
    nulls: int = 0


@dataclass
class PieSlice:
    category: str
    count: int
    percent: float


@dataclass
class PieCounts:
    slices: list[PieSlice] = field(default_factory=list)
    dropped: int = 0

    def __iter__(self):
        return iter(self.slices)

    def __len__(self) -> int:
        return len(self.slices)


def _column(table: ResultTable, name: str) -> int:
    try:
        return table.columns.index(name)
    except ValueError:
        raise UnknownColumn(f"no column {name!r}; available: {', '.join(table.columns)}") from None


def _text(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def line_series(table: ResultTable, x_col: str, group_col: str) -> LineSeries:
    """Count rows per (group, x); rows with a null in either column are dropped."""
    xi, gi = _column(table, x_col), _column(table, group_col)
    counts: Counter[tuple[str, int]] = Counter()
    dropped = 0
    for row in table.rows:
        x, group = row[xi], row[gi]
        if x is None or group is None:
            dropped += 1
            continue
        if isinstance(x, bool) or not isinstance(x, int):
            raise NonIntegerX(f"column {x_col!r} holds non-integer value {x!r}")
        counts[(_text(group), x)] += 1
    if dropped:
        log.warning("line series: dropped %d rows with null values", dropped)
    series = LineSeries(dropped=dropped)
    for (group, x), n in sorted(counts.items()):
        series.groups.setdefault(group, []).append((x, n))
    return series


def area_series(table: ResultTable, cols: Iterable[str]) -> AreaSeries:
    cols = list(cols)
    indexes = [_column(table, c) for c in cols]
    series = AreaSeries(columns=cols)
    for row_index, row in enumerate(table.rows):
        values = []
        for name, ci in zip(cols, indexes):
            value = row[ci]
            if value is None:
                series.nulls += 1
                value = 0
            elif isinstance(value, bool) or not isinstance(value, (int, float)):
                raise NonNumericColumn(f"column {name!r} holds non-numeric value {value!r}")
            values.append(value)
        series.rows.append((row_index, tuple(values)))
    if series.nulls:
        log.warning("area series: mapped %d null values to 0", series.nulls)
    return series


def _largest_remainder(exact: list[Fraction], rounded: list[Decimal]) -> list[Decimal]:
    # shift single cents until the rounded total is exactly 100.00
    cents = [int(r / _CENT) for r in rounded]
    deficit = 10000 - sum(cents)
    step = 1 if deficit > 0 else -1
    errors = [Fraction(c, 100) - e for c, e in zip(cents, exact)]
    order = sorted(range(len(cents)), key=lambda i: (errors[i] * step, i))
    for i in order[: abs(deficit)]:
        cents[i] += step
    return [Decimal(c) * _CENT for c in cents]


def pie_counts(table: ResultTable, col: str) -> PieCounts:
    """Frequency per distinct value with percentages rounded half-even to 2 places.

    If independent rounding makes the percentages miss 100.00, single cents are
    moved (largest remainder first) so the total is exact.
    """
    ci = _column(table, col)
    counts: Counter[str] = Counter()
    dropped = 0
    for row in table.rows:
        if row[ci] is None:
            dropped += 1
        else:
            counts[_text(row[ci])] += 1
    total = sum(counts.values())
    if total == 0:
        raise EmptyTable(f"no non-null values in column {col!r}")
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    exact = [Fraction(100 * n, total) for _, n in ordered]
    rounded = [
        (Decimal(e.numerator) / Decimal(e.denominator)).quantize(_CENT, rounding=ROUND_HALF_EVEN) for e in exact
    ]
    if sum(rounded) != 100:
        rounded = _largest_remainder(exact, rounded)
    return PieCounts(
        slices=[PieSlice(cat, n, float(p)) for (cat, n), p in zip(ordered, rounded)],
        dropped=dropped,
    )


def _csv_rows(data: Union[LineSeries, AreaSeries, PieCounts]) -> list[list[str]]:
    if isinstance(data, LineSeries):
        rows = [["group", "x", "count"]]
        for group, points in data.groups.items():
            rows.extend([group, str(x), str(n)] for x, n in points)
        return rows
    if isinstance(data, AreaSeries):
        rows = [["index", *data.columns]]
        rows.extend([str(i), *(repr(v) if isinstance(v, float) else str(v) for v in values)] for i, values in data.rows)
        return rows
    if isinstance(data, PieCounts):
        rows = [["category", "count", "percent"]]
        rows.extend([s.category, str(s.count), f"{s.percent:.2f}"] for s in data.slices)
        return rows
    raise TypeError(f"cannot write {type(data).__name__} as CSV")


def to_csv(data: Union[LineSeries, AreaSeries, PieCounts]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(_csv_rows(data))
    return buf.getvalue()


def write_csv(data: Union[LineSeries, AreaSeries, PieCounts], destination: Union[str, Path, IO[bytes]]) -> int:
    """Write UTF-8 CSV with LF endings; returns the number of bytes written."""
    payload = to_csv(data).encode("utf-8")
    if isinstance(destination, (str, Path)):
        Path(destination).write_bytes(payload)
    else:
        destination.write(payload)
    return len(payload)


def _dot_string(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def export_dot(graph: PropertyGraph, labels: Iterable[str], rel_types: Iterable[str], name: str = "scigraph") -> str:
    """Render the labelled subgraph as a DOT digraph.

    Edges appear only when their type is selected and both endpoints
    survive the label filter.
    """
    labels, rel_types = set(labels), set(rel_types)
    lines = [f"digraph {name} {{"]
    kept = set()
    for node in graph.nodes:
        if node.label not in labels:
            continue
        kept.add(node.id)
        color = PALETTE[node.label]
        lines.append(f'  n{node.id} [label={_dot_string(_text(node.properties["name"]))}, fillcolor="{color}", style=filled];')
    for rel in graph.relationships:
        if rel.type in rel_types and rel.source in kept and rel.target in kept:
            lines.append(f'  n{rel.source} -> n{rel.target} [label="{rel.type}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
