"""JSONL ingestion: per-record validation, entity resolution and graph loading.

Input is UTF-8 JSON Lines, one article object per line::

    {"title": "...", "year": 2015, "journal": "...",
     "journal_country": "...", "region": "...", "snip": 1.2,
     "authors": [{"name": "...", "institute": "...", "country": "..."}],
     "cited_titles": ["..."], "totalcites": 10}

``title``, ``year``, ``journal`` and ``authors`` are required; everything
else is optional and unknown keys are ignored.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterable
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from .graph import LABELS, PropertyGraph
from .indicators import article_self_citations, journal_self_citations
from .similarity import (
    DEFAULT_AUTHOR_THRESHOLD,
    DEFAULT_JOURNAL_THRESHOLD,
    DEFAULT_TITLE_THRESHOLD,
    check_threshold,
    greedy_resolve,
    matching_pairs,
    normalize_text,
)

log = logging.getLogger(__name__)

MAX_YEAR = 3000


@dataclass(frozen=True)
class AuthorRecord:
    name: str
    institute: Optional[str] = None
    country: Optional[str] = None


@dataclass(frozen=True)
class ArticleRecord:
    title: str
    year: int
    journal: str
    authors: tuple[AuthorRecord, ...]
    cited_titles: tuple[str, ...] = ()
    journal_country: Optional[str] = None
    region: Optional[str] = None
    snip: Optional[float] = None
    totalcites: Optional[int] = None


@dataclass(frozen=True)
class Thresholds:
    author: float = DEFAULT_AUTHOR_THRESHOLD
    journal: float = DEFAULT_JOURNAL_THRESHOLD
    title: float = DEFAULT_TITLE_THRESHOLD

    def __post_init__(self) -> None:
        for value in (self.author, self.journal, self.title):
            check_threshold(value)


@dataclass
class IngestReport:
    records_read: int = 0
    records_accepted: int = 0
    records_rejected: int = 0
    rejects: list[tuple[int, str]] = field(default_factory=list)
    nodes_created: dict[str, int] = field(default_factory=lambda: {label: 0 for label in LABELS})
    merges: int = 0
    citation_links_resolved: int = 0
    citation_links_unresolved: int = 0
    articles_annotated: int = 0

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["rejects"] = [{"line": line, "reason": reason} for line, reason in self.rejects]
        return data


class RecordError(ValueError):
    """A single JSONL line failed validation; ``reason`` is the report code."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _text(obj: dict, key: str, required: bool) -> Optional[str]:
    value = obj.get(key)
    if value is None:
        if required:
            raise RecordError(f"MissingField({key})")
        return None
    if not isinstance(value, str):
        raise RecordError(f"BadField({key})")
    text = normalize_text(value)
    if not text:
        if required:
            raise RecordError(f"EmptyField({key})")
        return None
    return text


def parse_record(line: str) -> ArticleRecord:
    try:
        obj = json.loads(line)
    except (json.JSONDecodeError, UnicodeDecodeError):
        raise RecordError("MalformedJson") from None
    if not isinstance(obj, dict):
        raise RecordError("MalformedJson")

    title = _text(obj, "title", required=True)
    if "year" not in obj or obj["year"] is None:
        raise RecordError("MissingField(year)")
    journal = _text(obj, "journal", required=True)
    if "authors" not in obj or obj["authors"] is None:
        raise RecordError("MissingField(authors)")

    year = obj["year"]
    if isinstance(year, bool) or not isinstance(year, int) or not 0 < year <= MAX_YEAR:
        raise RecordError("BadYear")

    raw_authors = obj["authors"]
    if not isinstance(raw_authors, list):
        raise RecordError("BadField(authors)")
    if not raw_authors:
        raise RecordError("EmptyAuthors")
    authors = []
    for entry in raw_authors:
        if isinstance(entry, str):
            entry = {"name": entry}
        if not isinstance(entry, dict):
            raise RecordError("BadField(authors)")
        name = _text(entry, "name", required=False)
        if name is None:
            raise RecordError("EmptyAuthorName")
        authors.append(
            AuthorRecord(
                name=name,
                institute=_text(entry, "institute", required=False),
                country=_text(entry, "country", required=False),
            )
        )

    cited = obj.get("cited_titles") or []
    if not isinstance(cited, list) or not all(isinstance(c, str) for c in cited):
        raise RecordError("BadField(cited_titles)")
    cited_titles = tuple(t for t in (normalize_text(c) for c in cited) if t)

    snip = obj.get("snip")
    if snip is not None:
        if isinstance(snip, bool) or not isinstance(snip, (int, float)) or not math.isfinite(snip) or snip < 0:
            raise RecordError("BadField(snip)")
        snip = float(snip)

    totalcites = obj.get("totalcites")
    if totalcites is not None:
        if isinstance(totalcites, bool) or not isinstance(totalcites, int) or totalcites < 0:
            raise RecordError("BadField(totalcites)")

    return ArticleRecord(
        title=title,  # type: ignore[arg-type]
        year=year,
        journal=journal,  # type: ignore[arg-type]
        authors=tuple(authors),
        cited_titles=cited_titles,
        journal_country=_text(obj, "journal_country", required=False),
        region=_text(obj, "region", required=False),
        snip=snip,
        totalcites=totalcites,
    )


def parse_records(lines: Iterable[str]) -> tuple[list[ArticleRecord], list[tuple[int, str]]]:
    """Parse JSONL text; returns accepted records and ``(line number, reason)`` rejects.

    Blank lines are skipped without being counted.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    records: list[ArticleRecord] = []
    rejects: list[tuple[int, str]] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            records.append(parse_record(line))
        except RecordError as exc:
            rejects.append((lineno, exc.reason))
    return records, rejects


class _Loader:
    """Creates nodes in record order from precomputed entity numbers."""

    def __init__(self, graph: PropertyGraph, report: IngestReport):
        self.graph = graph
        self.report = report
        self.entities: dict[tuple[str, int], int] = {}
        self.exact: dict[tuple[str, str], int] = {}
        self.edges: set[tuple[str, int, int]] = set()

    def _node(self, label: str, props: dict) -> int:
        nid = self.graph.create_node(label, props)
        self.report.nodes_created[label] += 1
        return nid

    def edge(self, rel_type: str, source: int, target: int) -> bool:
        key = (rel_type, source, target)
        if key in self.edges:
            return False
        self.edges.add(key)
        self.graph.create_relationship(rel_type, source, target)
        return True

    def _entity(self, label: str, entity: int, name: str) -> int:
        key = (label, entity)
        nid = self.entities.get(key)
        if nid is None:
            nid = self.entities[key] = self._node(label, {"name": name})
        else:
            self.report.merges += 1
        return nid

    def _exact(self, label: str, name: str) -> int:
        key = (label, name)
        if key not in self.exact:
            self.exact[key] = self._node(label, {"name": name})
        return self.exact[key]

    def journal(self, rec: ArticleRecord, entity: int) -> int:
        jid = self._entity("Journal", entity, rec.journal)
        props = self.graph.node(jid).properties
        extra: dict[str, Any] = {}
        if rec.snip is not None and "snip" not in props:
            extra["snip"] = rec.snip
        if rec.journal_country is not None and "country" not in props:
            extra["country"] = rec.journal_country
        if extra:
            self.graph.set_properties(jid, extra)
        if rec.journal_country is not None and rec.region is not None:
            cid = self._exact("Country", rec.journal_country)
            self.edge("IN_REGION", cid, self._exact("Region", rec.region))
        return jid

    def article(self, rec: ArticleRecord, jid: int) -> int:
        props: dict[str, Any] = {"name": rec.title, "year": rec.year}
        if rec.totalcites is not None:
            props["totalcites"] = rec.totalcites
        aid = self._node("Article", props)
        self.edge("PUBLISHED_IN", aid, jid)
        return aid

    def author(self, author: AuthorRecord, entity: int, aid: int) -> None:
        uid = self._entity("Author", entity, author.name)
        self.edge("AUTHORED", uid, aid)
        if author.institute is None:
            return
        iid = self._exact("Institute", author.institute)
        self.edge("WORKS_FOR", uid, iid)
        if author.country is not None:
            self.edge("IS_IN", iid, self._exact("Country", author.country))


def _first_articles(records: list[ArticleRecord], journal_entity: list[int], threshold: float) -> list[bool]:
    """True for records that are not a title duplicate of an earlier record in the same journal."""
    by_journal: dict[int, list[int]] = {}
    for i, entity in enumerate(journal_entity):
        by_journal.setdefault(entity, []).append(i)
    keep = [False] * len(records)
    for members in by_journal.values():
        seen: set[int] = set()
        for i, entity in zip(members, greedy_resolve([records[i].title for i in members], threshold)):
            if entity not in seen:
                seen.add(entity)
                keep[i] = True
    return keep


def load_graph(
    records: list[ArticleRecord],
    thresholds: Thresholds = Thresholds(),
    graph: Optional[PropertyGraph] = None,
) -> tuple[PropertyGraph, IngestReport]:
    """Build the property graph from parsed records.

    Journals and authors are resolved greedily in record order: a name joins
    the earliest entity whose first name it matches at the threshold. A record
    whose title matches an earlier article of the same journal is merged into
    it and otherwise ignored. Citations are resolved after all articles exist
    and point at the earliest matching article other than the citing one.
    """
    graph = graph if graph is not None else PropertyGraph()
    report = IngestReport(records_read=len(records), records_accepted=len(records))
    loader = _Loader(graph, report)

    journal_entity = greedy_resolve([r.journal for r in records], thresholds.journal)
    keep = _first_articles(records, journal_entity, thresholds.title)
    report.merges += keep.count(False)
    kept = [rec for rec, k in zip(records, keep) if k]
    author_entity = iter(greedy_resolve([a.name for r in kept for a in r.authors], thresholds.author))

    loaded: list[tuple[int, ArticleRecord]] = []
    for rec, entity, k in zip(records, journal_entity, keep):
        jid = loader.journal(rec, entity)
        if not k:
            continue
        aid = loader.article(rec, jid)
        for author in rec.authors:
            loader.author(author, next(author_entity), aid)
        loaded.append((aid, rec))

    cited = list(dict.fromkeys(c for _, rec in loaded for c in rec.cited_titles))
    hits = dict(zip(cited, matching_pairs(cited, [rec.title for _, rec in loaded], thresholds.title)))
    for position, (aid, rec) in enumerate(loaded):
        for text in rec.cited_titles:
            target = next((int(j) for j in hits[text] if j != position), None)
            if target is None:
                report.citation_links_unresolved += 1
                continue
            report.citation_links_resolved += 1
            loader.edge("CITES", aid, loaded[target][0])
    return graph, report


def annotate_citation_counts(graph: PropertyGraph, author_threshold: float = DEFAULT_AUTHOR_THRESHOLD) -> int:
    """Store ``totalcites``/``selfcites`` on articles and ``jtotalcites``/``jselfcites`` on journals."""
    graph._require_mutable()
    count = 0
    for aid in graph.nodes_with_label("Article"):
        props = graph.node(aid).properties
        inbound = graph.degree(aid, "CITES", "in")
        total = max(int(props.get("totalcites", 0)), inbound)
        selfc = article_self_citations(graph, aid, author_threshold)
        graph.set_properties(aid, {"totalcites": total, "selfcites": selfc})
        count += 1
    for jid in graph.nodes_with_label("Journal"):
        total = sum(
            graph.node(aid).properties["totalcites"]  # type: ignore[misc]
            for _, aid in graph.neighbors(jid, "PUBLISHED_IN", "in")
        )
        graph.set_properties(jid, {"jtotalcites": total, "jselfcites": journal_self_citations(graph, jid)})
    return count


def ingest_lines(
    lines: Iterable[str],
    thresholds: Thresholds = Thresholds(),
) -> tuple[PropertyGraph, IngestReport]:
    """Parse, load, annotate and freeze in one call."""
    records, rejects = parse_records(lines)
    graph, report = load_graph(records, thresholds)
    report.records_read = len(records) + len(rejects)
    report.records_rejected = len(rejects)
    report.rejects = rejects
    report.articles_annotated = annotate_citation_counts(graph, thresholds.author)
    for lineno, reason in rejects:
        log.warning("line %d rejected: %s", lineno, reason)
    return graph.freeze(), report
