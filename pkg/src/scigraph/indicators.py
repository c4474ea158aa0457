"""Scholastic indicators: self-citations and the four internationality inputs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .errors import NoArticles, NotAJournal, NotAnArticle, SelfExceedsTotal
from .graph import PropertyGraph
from .similarity import DEFAULT_AUTHOR_THRESHOLD, check_threshold, cosine_counts, normalize_text, tokenize


@dataclass(frozen=True)
class JournalIndicators:
    journal: int
    x1: float
    x2: float
    x3: float
    x4: float
    total_cites: int
    self_cites_author_level: int
    self_cites_journal_level: int

    @property
    def vector(self) -> tuple[float, float, float, float]:
        return (self.x1, self.x2, self.x3, self.x4)


@lru_cache(maxsize=65536)
def _name_tokens(name: str) -> Counter[str]:
    return tokenize(normalize_text(name))


def _require(graph: PropertyGraph, node_id: int, label: str, exc: type[Exception]) -> None:
    if graph.node(node_id).label != label:
        raise exc(f"node {node_id} is not a {label}")


def article_authors(graph: PropertyGraph, article: int) -> list[int]:
    return sorted({a for _, a in graph.neighbors(article, "AUTHORED", "in")})


def shares_author(graph: PropertyGraph, citing: int, cited: int, threshold: float) -> bool:
    cited_authors = article_authors(graph, cited)
    for a in article_authors(graph, citing):
        ta = _name_tokens(graph.node(a).name)
        for b in cited_authors:
            if a == b or cosine_counts(ta, _name_tokens(graph.node(b).name)) >= threshold:
                return True
    return False


def article_self_citations(
    graph: PropertyGraph, article: int, author_threshold: float = DEFAULT_AUTHOR_THRESHOLD
) -> int:
    """Inbound citations whose citing article shares at least one author name."""
    _require(graph, article, "Article", NotAnArticle)
    threshold = check_threshold(author_threshold)
    return sum(
        1
        for _, citing in graph.neighbors(article, "CITES", "in")
        if shares_author(graph, citing, article, threshold)
    )


def journal_articles(graph: PropertyGraph, journal: int) -> list[int]:
    return [a for _, a in graph.neighbors(journal, "PUBLISHED_IN", "in")]


def journal_self_citations(graph: PropertyGraph, journal: int) -> int:
    """CITES edges whose citing and cited articles are both published in ``journal``."""
    _require(graph, journal, "Journal", NotAJournal)
    members = set(journal_articles(graph, journal))
    return sum(
        1 for aid in members for _, citing in graph.neighbors(aid, "CITES", "in") if citing in members
    )


def _quotient(part: int, total: int) -> float:
    if part < 0 or total < 0:
        raise ValueError("citation counts must be non-negative")
    if part > total:
        raise SelfExceedsTotal(f"self-citations {part} exceed total {total}")
    if total == 0:
        return 1.0
    return 1.0 - part / total


def other_citation_quotient(self_cites: int, total_cites: int) -> float:
    """x1 = 1 - self/total, with 1.0 when there are no citations."""
    return _quotient(self_cites, total_cites)


def nonlocal_influence_quotient(journal_self_cites: int, total_cites: int) -> float:
    """x4 = 1 - journal self/total, with 1.0 when there are no citations."""
    return _quotient(journal_self_cites, total_cites)


def article_countries(graph: PropertyGraph, article: int) -> set[int]:
    countries = set()
    for author in article_authors(graph, article):
        for _, inst in graph.neighbors(author, "WORKS_FOR", "out"):
            countries.update(c for _, c in graph.neighbors(inst, "IS_IN", "out"))
    return countries


def international_collaboration(graph: PropertyGraph, journal: int) -> float:
    """Share of the journal's articles whose authors span two or more countries."""
    _require(graph, journal, "Journal", NotAJournal)
    articles = journal_articles(graph, journal)
    if not articles:
        raise NoArticles(f"journal {journal} has no articles")
    multi = sum(1 for a in articles if len(article_countries(graph, a)) >= 2)
    return multi / len(articles)


def article_total_cites(graph: PropertyGraph, article: int) -> int:
    stored = graph.node(article).properties.get("totalcites", 0)
    return max(int(stored), graph.degree(article, "CITES", "in"))


def journal_indicators(
    graph: PropertyGraph,
    journal: int,
    snip: float,
    author_threshold: float = DEFAULT_AUTHOR_THRESHOLD,
) -> JournalIndicators:
    _require(graph, journal, "Journal", NotAJournal)
    if not snip >= 0:
        raise ValueError(f"snip must be non-negative, got {snip!r}")
    articles = journal_articles(graph, journal)
    total = sum(article_total_cites(graph, a) for a in articles)
    self_author = sum(article_self_citations(graph, a, author_threshold) for a in articles)
    self_journal = journal_self_citations(graph, journal)
    return JournalIndicators(
        journal=journal,
        x1=other_citation_quotient(self_author, total),
        x2=international_collaboration(graph, journal),
        x3=float(snip),
        x4=nonlocal_influence_quotient(self_journal, total),
        total_cites=total,
        self_cites_author_level=self_author,
        self_cites_journal_level=self_journal,
    )
