"""Frozen-graph snapshot files.

Layout: a one-line magic header ``SCIGRAPH-SNAPSHOT <version>`` followed by
a single canonical JSON document (sorted keys, no insignificant whitespace,
UTF-8)::

    {"meta": {...},
     "nodes": [[id, label, {properties}], ...],
     "relationships": [[id, type, source, target], ...]}

Serialization is canonical, so load followed by dump reproduces the file
byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Union

from .errors import ScigraphError, SnapshotError
from .graph import PropertyGraph

MAGIC = "SCIGRAPH-SNAPSHOT"
VERSION = 1


def dumps(graph: PropertyGraph, meta: Optional[dict[str, Any]] = None) -> bytes:
    body = {
        "meta": meta or {},
        "nodes": [[n.id, n.label, n.properties] for n in graph.nodes],
        "relationships": [[r.id, r.type, r.source, r.target] for r in graph.relationships],
    }
    text = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)
    return f"{MAGIC} {VERSION}\n{text}\n".encode("utf-8")


def loads(data: bytes) -> tuple[PropertyGraph, dict[str, Any]]:
    """Rebuild a frozen graph; raises :class:`SnapshotError` on any defect."""
    try:
        header, _, body = data.decode("utf-8").partition("\n")
    except UnicodeDecodeError as exc:
        raise SnapshotError(f"snapshot is not UTF-8: {exc}") from None
    magic, _, version = header.partition(" ")
    if magic != MAGIC:
        raise SnapshotError("not a scigraph snapshot (bad magic header)")
    if not version.isdigit():
        raise SnapshotError(f"bad snapshot version {version!r}")
    if int(version) > VERSION:
        raise SnapshotError(f"snapshot version {version} is newer than supported version {VERSION}")
    try:
        doc = json.loads(body)
        graph = PropertyGraph()
        for expected, (node_id, label, props) in enumerate(doc["nodes"]):
            if node_id != expected:
                raise SnapshotError(f"node ids are not dense at {node_id}")
            graph.create_node(label, props)
        for expected, (rel_id, rel_type, source, target) in enumerate(doc["relationships"]):
            if rel_id != expected:
                raise SnapshotError(f"relationship ids are not dense at {rel_id}")
            graph.create_relationship(rel_type, source, target)
        meta = doc.get("meta", {})
    except SnapshotError:
        raise
    except (ValueError, KeyError, TypeError, ScigraphError) as exc:
        raise SnapshotError(f"corrupt snapshot: {exc}") from None
    return graph.freeze(), meta


def save(graph: PropertyGraph, path: Union[str, Path], meta: Optional[dict[str, Any]] = None) -> int:
    payload = dumps(graph, meta)
    Path(path).write_bytes(payload)
    return len(payload)


def load(path: Union[str, Path]) -> tuple[PropertyGraph, dict[str, Any]]:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise SnapshotError(f"cannot read snapshot {path}: {exc}") from None
    return loads(data)
