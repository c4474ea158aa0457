import json
import logging
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ARTICLE_CITATIONS, AUTHOR_COUNTRY, JOURNAL_YEARS
from oracles import oracle_rows, random_query, random_query_world
from scigraph.errors import TypeMismatch
from scigraph.graph import PropertyGraph
from scigraph.pql import (
    QuerySyntaxError,
    UndeclaredVariable,
    evaluate,
    format_query,
    parse,
    run,
)
from scigraph.pql.ast import Comparison, InList, Literal, NodePattern, PropertyRef, RelPattern
from scigraph.pql.lexer import tokenize


def test_lexer_tokens():
    kinds = [(t.kind, t.text) for t in tokenize("(a)<-[:X]-(b) WHERE a.y <> -1.5e2")]
    assert kinds == [
        ("SYMBOL", "("), ("IDENT", "a"), ("SYMBOL", ")"), ("SYMBOL", "<"), ("SYMBOL", "-"),
        ("SYMBOL", "["), ("SYMBOL", ":"), ("IDENT", "X"), ("SYMBOL", "]"), ("SYMBOL", "-"),
        ("SYMBOL", "("), ("IDENT", "b"), ("SYMBOL", ")"), ("KEYWORD", "WHERE"), ("IDENT", "a"),
        ("SYMBOL", "."), ("IDENT", "y"), ("SYMBOL", "<>"), ("FLOAT", "-1.5e2"), ("EOF", ""),
    ]
    numbers = [t for t in tokenize("1 -2 3.5 4e1") if t.kind != "EOF"]
    assert [t.value for t in numbers] == [1, -2, 3.5, 40.0]
    (string, _) = tokenize(r"'it\'s'")
    assert string.value == "it's"


def test_parse_reference_queries():
    q = parse(ARTICLE_CITATIONS)
    assert q.nodes == (NodePattern("n", "Article"),)
    assert q.returns == (PropertyRef("n", "totalcites"), PropertyRef("n", "selfcites"))

    q = parse(AUTHOR_COUNTRY)
    assert [n.label for n in q.nodes] == ["Author", "Institute", "Country"]
    assert q.rels == (RelPattern("r", "WORKS_FOR", "right"), RelPattern("s", "IS_IN", "right"))

    q = parse(JOURNAL_YEARS)
    assert q.nodes == (NodePattern("Journal", "Journal"), NodePattern("Article", "Article"))
    assert q.rels == (RelPattern(None, "PUBLISHED_IN", "undirected"),)
    assert isinstance(q.where, InList)
    assert q.columns == ["Article.year", "Journal.name"]


def test_keywords_are_case_insensitive_variables_are_not():
    q = parse("match (N:Article) where N.year > 2000 return N.name")
    assert q.nodes[0].var == "N"
    assert q.where == Comparison(PropertyRef("N", "year"), ">", Literal(2000))
    with pytest.raises(UndeclaredVariable):
        parse("MATCH (N) RETURN n.name")


def test_bare_non_label_variable_has_no_label():
    assert parse("MATCH (journal) RETURN journal.name").nodes[0] == NodePattern("journal", None)


@pytest.mark.parametrize(
    "text, line, column, token",
    [
        ("MATCH (n:Article RETURN n.name", 1, 18, "RETURN"),
        ("", 1, 1, "end of input"),
        ("MATCH (n) RETURN", 1, 17, "end of input"),
        ("MATCH (n)\nWHERE n.x = 'abc RETURN n.x", 2, 13, "'abc RETURN n.x"),
        ("MATCH (n)\n  WHERE n.x == 1 RETURN n.x", 2, 14, "="),
        ("MATCH (n)-[r]->(m)-[r]->(k) RETURN n.name", 1, 21, "r"),
        ("MATCH (n) WHERE n.x IN [] RETURN n.x", 1, 25, "]"),
        ("MATCH (n) RETURN n.name extra", 1, 25, "extra"),
        ("MATCH (n) RETURN m.name", 1, 18, "m"),
        ("MATCH (n) WHERE n.a = 1 RETURN n.a;", 1, 35, ";"),
    ],
)
def test_syntax_errors_have_positions(text, line, column, token):
    with pytest.raises(QuerySyntaxError) as info:
        parse(text)
    err = info.value
    assert (err.line, err.column, err.token) == (line, column, token)
    assert f"line {line}, column {column}" in str(err)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**7))
def test_pretty_print_round_trip(seed):
    spec = random_query(random.Random(seed))
    ast = parse(spec.text)
    assert parse(format_query(ast)) == ast


@pytest.mark.parametrize("text", [JOURNAL_YEARS, ARTICLE_CITATIONS, AUTHOR_COUNTRY])
def test_reference_queries_round_trip(text):
    ast = parse(text)
    assert parse(format_query(ast)) == ast


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**7))
def test_evaluate_matches_exhaustive_enumeration(seed):
    rng = random.Random(seed)
    world = random_query_world(rng)
    spec = random_query(rng)
    table = run(world.graph, spec.text)
    assert table.columns == [f"{v}.{k}" for v, k in spec.returns]
    assert Counter(table.rows) == Counter(oracle_rows(world, spec))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**7))
def test_undirected_is_union_of_directions(seed):
    rng = random.Random(seed)
    world = random_query_world(rng)
    rtype = rng.choice([None, "CITES", "AUTHORED", "PUBLISHED_IN"])
    inner = f"r:{rtype}" if rtype else "r"
    ret = " RETURN a.name, b.name, a.year, b.year"

    def rows(arrow):
        return Counter(run(world.graph, f"MATCH (a){arrow.format(inner)}(b)" + ret).rows)

    union = rows("-[{}]->") + rows("<-[{}]-")
    undirected = rows("-[{}]-")
    # a CITES self-loop would be counted twice by the union; the store forbids them
    assert undirected == union


def test_relationship_uniqueness():
    g = PropertyGraph()
    a = g.create_node("Article", {"name": "a"})
    b = g.create_node("Article", {"name": "b"})
    g.create_relationship("CITES", a, b)
    g.freeze()
    # a->b then back along the same edge is not allowed; node reuse is
    assert run(g, "MATCH (x)-[:CITES]-(y)-[:CITES]-(z) RETURN x.name").rows == []
    assert len(run(g, "MATCH (x)-[:CITES]->(y) RETURN x.name").rows) == 1


def test_empty_graph_keeps_columns():
    table = run(PropertyGraph().freeze(), ARTICLE_CITATIONS)
    assert table.columns == ["n.totalcites", "n.selfcites"]
    assert table.rows == []
    assert table.to_csv() == "n.totalcites,n.selfcites\n"


def test_unknown_label_warns_and_is_empty(caplog):
    g = PropertyGraph()
    g.create_node("Journal", {"name": "j"})
    with caplog.at_level(logging.WARNING):
        assert run(g, "MATCH (n:Widget) RETURN n.name").rows == []
        assert run(g, "MATCH (n)-[:LIKES]->(m) RETURN n.name").rows == []
    assert "Widget" in caplog.text and "LIKES" in caplog.text


def test_type_mismatch_in_where():
    g = PropertyGraph()
    g.create_node("Article", {"name": "a", "year": 2015})
    with pytest.raises(TypeMismatch):
        run(g, "MATCH (n:Article) WHERE n.year = 'x' RETURN n.name")


def test_missing_property_is_false_and_projects_null():
    g = PropertyGraph()
    g.create_node("Article", {"name": "a"})
    g.create_node("Article", {"name": "b", "year": 2015})
    assert run(g, "MATCH (n:Article) WHERE n.year > 0 RETURN n.name").rows == [("b",)]
    assert run(g, "MATCH (n:Article) WHERE NOT (n.year > 0) RETURN n.name").rows == []
    table = run(g, "MATCH (n:Article) RETURN n.name, n.year")
    assert table.rows == [("a", None), ("b", 2015)]
    assert table.to_csv() == "n.name,n.year\na,\nb,2015\n"
    assert json.loads(table.to_json()) == {"columns": ["n.name", "n.year"], "rows": [["a", None], ["b", 2015]]}


def journal_fixture():
    g = PropertyGraph()
    j1 = g.create_node("Journal", {"name": "j1"})
    j2 = g.create_node("Journal", {"name": "j2"})
    for name, year, j in (("a", 2015, j1), ("b", 2014, j1), ("c", 2016, j2)):
        art = g.create_node("Article", {"name": name, "year": year, "totalcites": year - 2014, "selfcites": 0})
        g.create_relationship("PUBLISHED_IN", art, j)
    return g.freeze()


def test_journal_query_example():
    g = journal_fixture()
    q = "MATCH (Journal)-[:PUBLISHED_IN]-(Article) WHERE Journal.name IN ['J1'] RETURN Article.year, Journal.name"
    assert sorted(run(g, q).rows) == [(2014, "j1"), (2015, "j1")]
    q = "MATCH (Journal)-[:PUBLISHED_IN]-(Article) WHERE Journal.name IN ['Nope'] RETURN Article.year"
    assert run(g, q).rows == []
    assert run(g, ARTICLE_CITATIONS).rows == [(1, 0), (0, 0), (2, 0)]


def test_three_hop_example():
    g = PropertyGraph()
    inst = g.create_node("Institute", {"name": "pes"})
    country = g.create_node("Country", {"name": "india"})
    g.create_relationship("IS_IN", inst, country)
    for name in ("x", "y"):
        g.create_relationship("WORKS_FOR", g.create_node("Author", {"name": name}), inst)
    g.freeze()
    assert run(g, AUTHOR_COUNTRY).rows == [("x", "india"), ("y", "india")]


def test_rows_follow_node_id_order():
    g = journal_fixture()
    table = run(g, "MATCH (a:Article)-[:PUBLISHED_IN]->(j) RETURN j.name, a.name")
    assert table.rows == [("j1", "a"), ("j1", "b"), ("j2", "c")]


def test_run_empty_text_is_syntax_error():
    with pytest.raises(QuerySyntaxError):
        run(PropertyGraph(), "")


def test_evaluate_is_deterministic(sample_graph):
    first = evaluate(sample_graph, parse(AUTHOR_COUNTRY))
    second = evaluate(sample_graph, parse(AUTHOR_COUNTRY))
    assert first.to_csv().encode() == second.to_csv().encode()
    assert first.to_json() == second.to_json()
