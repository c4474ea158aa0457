"""Binding enumeration over a property graph for parsed pattern queries."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Optional, Union

from ..graph import LABELS, REL_TYPES, PropertyGraph, PropertyValue, compare_values
from .ast import And, Comparison, Expr, InList, Literal, Not, Operand, Or, PropertyRef, Query
from .parser import parse

log = logging.getLogger(__name__)

Cell = Optional[PropertyValue]


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[tuple[Cell, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> int:
        return self.columns.index(name)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow(["" if v is None else _cell_text(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"columns": self.columns, "rows": [list(r) for r in self.rows]}, ensure_ascii=False)


def _cell_text(value: PropertyValue) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


@dataclass(frozen=True)
class Binding:
    nodes: tuple[int, ...]
    rels: tuple[int, ...]


def _step_candidates(graph: PropertyGraph, node: int, rel_type: Optional[str], direction: str) -> list[tuple[int, int]]:
    if direction == "right":
        return graph.neighbors(node, rel_type, "out")
    if direction == "left":
        return graph.neighbors(node, rel_type, "in")
    # undirected: both orientations, a self-loop counts once
    return graph.neighbors(node, rel_type, "both")


def match(graph: PropertyGraph, query: Query) -> list[Binding]:
    """All pattern bindings, ordered by bound node ids then relationship ids."""
    for node in query.nodes:
        if node.label is not None and node.label not in LABELS:
            log.warning("unknown label %r; query yields no rows", node.label)
            return []
    for rel in query.rels:
        if rel.type is not None and rel.type not in REL_TYPES:
            log.warning("unknown relationship type %r; query yields no rows", rel.type)
            return []

    var_slot: dict[str, int] = {}
    slots = []
    for node in query.nodes:
        slots.append(var_slot.setdefault(node.var, len(var_slot)))

    def admissible(position: int, node_id: int, bound: dict[int, int]) -> bool:
        pattern = query.nodes[position]
        if pattern.label is not None and graph.nodes[node_id].label != pattern.label:
            return False
        slot = slots[position]
        return bound.get(slot, node_id) == node_id

    results: list[Binding] = []
    path: list[int] = []
    rels: list[int] = []

    def extend(position: int, bound: dict[int, int]) -> None:
        if position == len(query.nodes):
            results.append(Binding(tuple(path), tuple(rels)))
            return
        rel = query.rels[position - 1]
        for rid, other in _step_candidates(graph, path[-1], rel.type, rel.direction):
            if rid in rels or not admissible(position, other, bound):
                continue
            slot = slots[position]
            fresh = slot not in bound
            bound[slot] = other
            path.append(other)
            rels.append(rid)
            extend(position + 1, bound)
            path.pop()
            rels.pop()
            if fresh:
                del bound[slot]

    first = query.nodes[0]
    starts = graph.nodes_with_label(first.label) if first.label else range(len(graph.nodes))
    for start in starts:
        path.append(start)
        extend(1, {slots[0]: start})
        path.pop()
    results.sort(key=lambda b: (b.nodes, b.rels))
    return results


class _Row:
    def __init__(self, graph: PropertyGraph, query: Query, binding: Binding):
        self.graph = graph
        self.env: dict[str, tuple[str, int]] = {}
        for pattern, nid in zip(query.nodes, binding.nodes):
            self.env[pattern.var] = ("node", nid)
        for pattern, rid in zip(query.rels, binding.rels):
            if pattern.var is not None:
                self.env[pattern.var] = ("rel", rid)

    def lookup(self, ref: PropertyRef) -> Cell:
        kind, ident = self.env[ref.var]
        if kind == "rel":
            return None
        return self.graph.nodes[ident].properties.get(ref.key)

    def operand(self, op: Operand) -> Cell:
        return op.value if isinstance(op, Literal) else self.lookup(op)


def evaluate_expr(expr: Expr, row: _Row) -> Optional[bool]:
    """Three-valued evaluation; ``None`` stands for unknown."""
    if isinstance(expr, Comparison):
        left, right = row.operand(expr.left), row.operand(expr.right)
        if left is None or right is None:
            return None
        return compare_values(left, expr.op, right)
    if isinstance(expr, InList):
        value = row.operand(expr.operand)
        if value is None:
            return None
        return any(compare_values(value, "=", item.value) for item in expr.values)
    if isinstance(expr, Not):
        inner = evaluate_expr(expr.expr, row)
        return None if inner is None else not inner
    if isinstance(expr, And):
        result: Optional[bool] = True
        for term in expr.terms:
            value = evaluate_expr(term, row)
            if value is False:
                return False
            if value is None:
                result = None
        return result
    if isinstance(expr, Or):
        result = False
        for term in expr.terms:
            value = evaluate_expr(term, row)
            if value is True:
                return True
            if value is None:
                result = None
        return result
    raise TypeError(f"not an expression: {expr!r}")


def evaluate(graph: PropertyGraph, query: Query) -> ResultTable:
    table = ResultTable(query.columns)
    for binding in match(graph, query):
        row = _Row(graph, query, binding)
        if query.where is not None and evaluate_expr(query.where, row) is not True:
            continue
        table.rows.append(tuple(row.lookup(ref) for ref in query.returns))
    return table


def run(graph: PropertyGraph, text: Union[str, Query]) -> ResultTable:
    query = parse(text) if isinstance(text, str) else text
    return evaluate(graph, query)
