"""Embedded in-memory property graph for journal/article/author/institute data.

The store follows a build-then-freeze contract: a single writer creates
nodes and relationships, then calls :meth:`PropertyGraph.freeze`. After
that the graph is read-only and may be shared between threads.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import (
    CitesSelfLoop,
    GraphFrozen,
    IncompatibleEndpoints,
    InvalidLabel,
    InvalidProperty,
    InvalidRelType,
    MissingNameProperty,
    NonFiniteFloat,
    TypeMismatch,
    UnknownNode,
)
from .similarity import normalize_text

PropertyValue = Union[str, int, float, bool]

LABELS: tuple[str, ...] = ("Journal", "Article", "Author", "Institute", "Country", "Region")

# relationship type -> (source label, target label)
SCHEMA: dict[str, tuple[str, str]] = {
    "PUBLISHED_IN": ("Article", "Journal"),
    "AUTHORED": ("Author", "Article"),
    "WORKS_FOR": ("Author", "Institute"),
    "IS_IN": ("Institute", "Country"),
    "IN_REGION": ("Country", "Region"),
    "CITES": ("Article", "Article"),
}
REL_TYPES: tuple[str, ...] = tuple(SCHEMA)

DIRECTIONS = ("out", "in", "both")
COMPARISONS = ("=", "<>", "<", "<=", ">", ">=")


@dataclass
class Node:
    id: int
    label: str
    properties: dict[str, PropertyValue] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.properties["name"]  # type: ignore[return-value]


@dataclass(frozen=True)
class Relationship:
    id: int
    type: str
    source: int
    target: int


def _value_kind(value: object) -> str:
    if isinstance(value, bool):
        return "bool"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "text"
    raise InvalidProperty(f"unsupported property value {value!r}")


def compare_values(left: PropertyValue, op: str, right: PropertyValue) -> bool:
    """Typed comparison of two property values.

    Text is compared after :func:`normalize_text`, so ``'Neurocomputing'``
    equals a stored ``'neurocomputing'``. Numbers compare across int/float.
    Comparing values of different kinds raises :class:`TypeMismatch`.
    """
    lk, rk = _value_kind(left), _value_kind(right)
    if lk != rk:
        raise TypeMismatch(f"cannot compare {lk} {left!r} with {rk} {right!r}")
    if lk == "text":
        left, right = normalize_text(left), normalize_text(right)  # type: ignore[arg-type]
    if op == "=":
        return left == right
    if op == "<>":
        return left != right
    if op == "<":
        return left < right  # type: ignore[operator]
    if op == "<=":
        return left <= right  # type: ignore[operator]
    if op == ">":
        return left > right  # type: ignore[operator]
    if op == ">=":
        return left >= right  # type: ignore[operator]
    raise ValueError(f"unknown comparison operator {op!r}")


def _check_value(key: str, value: object) -> None:
    kind = _value_kind(value)
    if kind == "number" and isinstance(value, float) and not math.isfinite(value):
        raise NonFiniteFloat(f"property {key!r} is not finite: {value!r}")


def _check_article(props: Mapping[str, PropertyValue]) -> None:
    for key in ("year", "totalcites", "selfcites"):
        if key in props:
            value = props[key]
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidProperty(f"Article.{key} must be an integer, got {value!r}")
    for key in ("totalcites", "selfcites"):
        if props.get(key, 0) < 0:  # type: ignore[operator]
            raise InvalidProperty(f"Article.{key} must be >= 0")
    if "selfcites" in props and "totalcites" in props and props["selfcites"] > props["totalcites"]:  # type: ignore[operator]
        raise InvalidProperty("Article.selfcites exceeds totalcites")


class PropertyGraph:
    """Typed nodes and typed directed relationships with adjacency indexes."""

    def __init__(self) -> None:
        self.nodes: list[Node] = []
        self.relationships: list[Relationship] = []
        self._out: list[list[int]] = []
        self._in: list[list[int]] = []
        self._by_label: dict[str, list[int]] = {label: [] for label in LABELS}
        self._frozen = False

    # build phase

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "PropertyGraph":
        self._frozen = True
        return self

    def _require_mutable(self) -> None:
        if self._frozen:
            raise GraphFrozen("graph is frozen; mutation is not allowed")

    def create_node(self, label: str, properties: Mapping[str, PropertyValue]) -> int:
        self._require_mutable()
        if label not in self._by_label:
            raise InvalidLabel(f"unknown node label {label!r}")
        if "name" not in properties:
            raise MissingNameProperty(f"{label} node requires a 'name' property")
        props = dict(properties)
        for key, value in props.items():
            _check_value(key, value)
        if label == "Article":
            _check_article(props)
        node_id = len(self.nodes)
        self.nodes.append(Node(node_id, label, props))
        self._out.append([])
        self._in.append([])
        self._by_label[label].append(node_id)
        return node_id

    def set_properties(self, node_id: int, updates: Mapping[str, PropertyValue]) -> None:
        """Merge ``updates`` into a node's properties (build phase only)."""
        self._require_mutable()
        node = self.node(node_id)
        merged = {**node.properties, **updates}
        for key, value in updates.items():
            _check_value(key, value)
        if node.label == "Article":
            _check_article(merged)
        node.properties = merged

    def create_relationship(self, rel_type: str, source: int, target: int) -> int:
        self._require_mutable()
        if rel_type not in SCHEMA:
            raise InvalidRelType(f"unknown relationship type {rel_type!r}")
        src, dst = self.node(source), self.node(target)
        want_src, want_dst = SCHEMA[rel_type]
        if src.label != want_src or dst.label != want_dst:
            raise IncompatibleEndpoints(
                f"{rel_type} must connect {want_src}->{want_dst}, got {src.label}->{dst.label}"
            )
        if rel_type == "CITES" and source == target:
            raise CitesSelfLoop(f"article {source} cannot cite itself")
        rel_id = len(self.relationships)
        self.relationships.append(Relationship(rel_id, rel_type, source, target))
        self._out[source].append(rel_id)
        self._in[target].append(rel_id)
        return rel_id

    # read side

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> Node:
        if not isinstance(node_id, int) or not 0 <= node_id < len(self.nodes):
            raise UnknownNode(f"no node with id {node_id!r}")
        return self.nodes[node_id]

    def relationship(self, rel_id: int) -> Relationship:
        return self.relationships[rel_id]

    def nodes_with_label(self, label: str) -> list[int]:
        """Node ids carrying ``label`` in ascending order (empty for unknown labels)."""
        return list(self._by_label.get(label, ()))

    def neighbors(
        self, node_id: int, rel_type: Optional[str] = None, direction: str = "both"
    ) -> list[tuple[int, int]]:
        """Return ``(relationship id, other node id)`` pairs in relationship-id order."""
        self.node(node_id)
        if direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
        if direction == "out":
            rel_ids = self._out[node_id]
        elif direction == "in":
            rel_ids = self._in[node_id]
        else:
            rel_ids = sorted(set(self._out[node_id]) | set(self._in[node_id]))
        result = []
        for rid in rel_ids:
            rel = self.relationships[rid]
            if rel_type is not None and rel.type != rel_type:
                continue
            other = rel.target if rel.source == node_id else rel.source
            result.append((rid, other))
        return result

    def degree(self, node_id: int, rel_type: Optional[str] = None, direction: str = "both") -> int:
        return len(self.neighbors(node_id, rel_type, direction))

    def find_nodes(
        self,
        label: str,
        predicate: Optional[tuple[str, str, PropertyValue]] = None,
    ) -> list[int]:
        ids = self.nodes_with_label(label)
        if predicate is None:
            return ids
        key, op, value = predicate
        if op not in COMPARISONS:
            raise ValueError(f"unknown comparison operator {op!r}")
        matched = []
        for nid in ids:
            props = self.nodes[nid].properties
            if key in props and compare_values(props[key], op, value):
                matched.append(nid)
        return matched

    def iter_relationships(self, rel_type: Optional[str] = None) -> Iterator[Relationship]:
        for rel in self.relationships:
            if rel_type is None or rel.type == rel_type:
                yield rel

    def label_counts(self) -> dict[str, int]:
        return {label: len(ids) for label, ids in self._by_label.items()}

    # consistency checks used by tests and snapshot loading

    def rebuilt_indexes(self) -> tuple[list[list[int]], list[list[int]], dict[str, list[int]]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        inc: list[list[int]] = [[] for _ in self.nodes]
        by_label: dict[str, list[int]] = {label: [] for label in LABELS}
        for node in self.nodes:
            by_label[node.label].append(node.id)
        for rel in self.relationships:
            out[rel.source].append(rel.id)
            inc[rel.target].append(rel.id)
        return out, inc, by_label

    def check_integrity(self) -> None:
        """Raise AssertionError if any store invariant is broken."""
        for i, node in enumerate(self.nodes):
            assert node.id == i and node.label in LABELS and "name" in node.properties
        for i, rel in enumerate(self.relationships):
            assert rel.id == i
            assert 0 <= rel.source < len(self.nodes) and 0 <= rel.target < len(self.nodes)
            want = SCHEMA[rel.type]
            assert (self.nodes[rel.source].label, self.nodes[rel.target].label) == want
            assert not (rel.type == "CITES" and rel.source == rel.target)
        assert self.rebuilt_indexes() == (self._out, self._in, self._by_label)
        assert sum(len(x) for x in self._out) == len(self.relationships)
