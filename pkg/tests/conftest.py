from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from scigraph.ingest import ingest_lines

GOLDEN = Path(__file__).parent / "golden"

JOURNAL_YEARS = (
    "MATCH (Journal)-[:PUBLISHED_IN]-(Article) WHERE Journal.name IN "
    "['Applied Soft Computing', 'Neurocomputing', 'Genetic Programming and Evolvable Machines'] "
    "RETURN Article.year, Journal.name"
)
ARTICLE_CITATIONS = "MATCH (n:Article) RETURN n.totalcites, n.selfcites"
AUTHOR_COUNTRY = (
    "MATCH (Author)-[r:WORKS_FOR]->(Institute)-[s:IS_IN]->(Country) RETURN Author.name, Country.name"
)


def fixture_path() -> Path:
    return Path(str(resources.files("scigraph") / "data" / "sample_articles.jsonl"))


@pytest.fixture(scope="session")
def sample_path() -> Path:
    return fixture_path()


@pytest.fixture(scope="session")
def sample_lines(sample_path: Path) -> list[str]:
    return sample_path.read_text(encoding="utf-8").splitlines()


@pytest.fixture(scope="session")
def sample_graph(sample_lines):
    graph, _ = ingest_lines(sample_lines)
    return graph


@pytest.fixture(scope="session")
def sample_report(sample_lines):
    _, report = ingest_lines(sample_lines)
    return report
