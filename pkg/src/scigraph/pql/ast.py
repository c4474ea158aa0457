"""Syntax tree for pattern queries, plus a printer that re-parses to the same tree."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

Value = Union[str, int, float, bool]


@dataclass(frozen=True)
class NodePattern:
    var: str
    label: Optional[str] = None


@dataclass(frozen=True)
class RelPattern:
    var: Optional[str] = None
    type: Optional[str] = None
    direction: str = "undirected"  # "right" (->), "left" (<-) or "undirected"


@dataclass(frozen=True)
class Literal:
    value: Value


@dataclass(frozen=True)
class PropertyRef:
    var: str
    key: str

    def __str__(self) -> str:
        return f"{self.var}.{self.key}"


Operand = Union[Literal, PropertyRef]


@dataclass(frozen=True)
class Comparison:
    left: Operand
    op: str
    right: Operand


@dataclass(frozen=True)
class InList:
    operand: Operand
    values: tuple[Literal, ...]


@dataclass(frozen=True)
class Not:
    expr: "Expr"


@dataclass(frozen=True)
class And:
    terms: tuple["Expr", ...]


@dataclass(frozen=True)
class Or:
    terms: tuple["Expr", ...]


Expr = Union[Comparison, InList, Not, And, Or]


@dataclass(frozen=True)
class Query:
    nodes: tuple[NodePattern, ...]
    rels: tuple[RelPattern, ...]
    where: Optional[Expr]
    returns: tuple[PropertyRef, ...]

    @property
    def columns(self) -> list[str]:
        return [str(p) for p in self.returns]


def format_literal(value: Value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return "'" + value.replace("\\", "\\\\").replace("'", "\\'") + "'"
    return repr(value)


def _format_operand(op: Operand) -> str:
    return str(op) if isinstance(op, PropertyRef) else format_literal(op.value)


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Comparison):
        return f"{_format_operand(expr.left)} {expr.op} {_format_operand(expr.right)}"
    if isinstance(expr, InList):
        items = ", ".join(format_literal(v.value) for v in expr.values)
        return f"{_format_operand(expr.operand)} IN [{items}]"
    if isinstance(expr, Not):
        return f"NOT ({format_expr(expr.expr)})"
    if isinstance(expr, And):
        return " AND ".join(f"({format_expr(t)})" for t in expr.terms)
    if isinstance(expr, Or):
        return " OR ".join(f"({format_expr(t)})" for t in expr.terms)
    raise TypeError(f"not an expression: {expr!r}")


def _format_rel(rel: RelPattern) -> str:
    inner = (rel.var or "") + (f":{rel.type}" if rel.type else "")
    if rel.direction == "left":
        return f"<-[{inner}]-"
    if rel.direction == "right":
        return f"-[{inner}]->"
    return f"-[{inner}]-"


def format_query(query: Query) -> str:
    parts = []
    for i, node in enumerate(query.nodes):
        if i:
            parts.append(_format_rel(query.rels[i - 1]))
        parts.append(f"({node.var}:{node.label})" if node.label else f"({node.var})")
    text = "MATCH " + "".join(parts)
    if query.where is not None:
        text += " WHERE " + format_expr(query.where)
    return text + " RETURN " + ", ".join(str(p) for p in query.returns)
