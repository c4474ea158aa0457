import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scigraph.errors import (
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
from scigraph.graph import LABELS, SCHEMA, PropertyGraph, compare_values


@pytest.fixture
def small():
    g = PropertyGraph()
    j = g.create_node("Journal", {"name": "neurocomputing"})
    arts = [g.create_node("Article", {"name": f"t{i}", "year": y}) for i, y in enumerate((2014, 2015, 2015))]
    for a in arts:
        g.create_relationship("PUBLISHED_IN", a, j)
    return g, j, arts


def test_ids_are_sequential_from_zero():
    g = PropertyGraph()
    assert g.create_node("Journal", {"name": "Neurocomputing"}) == 0
    assert g.create_node("Article", {"name": "T1", "year": 2015, "totalcites": 0, "selfcites": 0}) == 1


def test_create_node_errors():
    g = PropertyGraph()
    with pytest.raises(InvalidLabel):
        g.create_node("Widget", {"name": "x"})
    with pytest.raises(MissingNameProperty):
        g.create_node("Journal", {"snip": 1.0})
    with pytest.raises(NonFiniteFloat):
        g.create_node("Journal", {"name": "j", "snip": math.nan})
    with pytest.raises(NonFiniteFloat):
        g.create_node("Journal", {"name": "j", "snip": math.inf})
    with pytest.raises(InvalidProperty):
        g.create_node("Article", {"name": "a", "totalcites": 1, "selfcites": 2})
    with pytest.raises(InvalidProperty):
        g.create_node("Article", {"name": "a", "year": "2015"})
    # failed creates never consume an id
    assert g.create_node("Region", {"name": "europe"}) == 0


def test_create_relationship_schema(small):
    g, j, arts = small
    with pytest.raises(IncompatibleEndpoints):
        g.create_relationship("PUBLISHED_IN", j, arts[0])
    with pytest.raises(CitesSelfLoop):
        g.create_relationship("CITES", arts[0], arts[0])
    with pytest.raises(UnknownNode):
        g.create_relationship("CITES", arts[0], 99)
    with pytest.raises(InvalidRelType):
        g.create_relationship("LIKES", arts[0], arts[1])
    rid = g.create_relationship("CITES", arts[1], arts[0])
    assert (rid, arts[1]) in g.neighbors(arts[0], "CITES", "in")
    assert (rid, arts[0]) in g.neighbors(arts[1], "CITES", "out")


def test_neighbors_filters_and_order(small):
    g, j, arts = small
    lonely = g.create_node("Country", {"name": "india"})
    assert g.neighbors(lonely) == []
    assert g.neighbors(lonely, "IS_IN", "out") == []

    author = g.create_node("Author", {"name": "x"})
    inst = g.create_node("Institute", {"name": "y"})
    rid = g.create_relationship("WORKS_FOR", author, inst)
    assert g.neighbors(author, "WORKS_FOR", "out") == [(rid, inst)]

    citer = g.create_node("Article", {"name": "citer"})
    rids = [g.create_relationship("CITES", citer, a) for a in reversed(arts)]
    got = g.neighbors(citer, "CITES", "out")
    assert got == sorted(zip(rids, reversed(arts)))
    assert [r for r, _ in got] == sorted(r for r, _ in got)

    with pytest.raises(UnknownNode):
        g.neighbors(1000)


def test_find_nodes(small):
    g, j, arts = small
    assert PropertyGraph().find_nodes("Article") == []
    assert g.find_nodes("Article", ("year", "=", 2015)) == [arts[1], arts[2]]
    assert g.find_nodes("Article", ("year", ">", 2014)) == [arts[1], arts[2]]
    assert g.find_nodes("Journal", ("name", "=", "Neurocomputing")) == [j]
    # a missing key excludes the node rather than failing
    assert g.find_nodes("Article", ("totalcites", ">=", 0)) == []
    with pytest.raises(TypeMismatch):
        g.find_nodes("Article", ("year", "=", "2015"))


def test_freeze_blocks_mutation(small):
    g, j, arts = small
    g.freeze()
    assert g.frozen
    with pytest.raises(GraphFrozen):
        g.create_node("Journal", {"name": "x"})
    with pytest.raises(GraphFrozen):
        g.create_relationship("CITES", arts[0], arts[1])
    with pytest.raises(GraphFrozen):
        g.set_properties(j, {"snip": 1.0})


def test_compare_values_typing():
    assert compare_values(1, "<", 1.5)
    assert compare_values("Rao", "=", "rao")
    assert compare_values(True, "=", True)
    with pytest.raises(TypeMismatch):
        compare_values(True, "=", 1)
    with pytest.raises(TypeMismatch):
        compare_values("1", "<", 2)


def _random_build(seed: int) -> list[tuple]:
    rng = random.Random(seed)
    ops: list[tuple] = []
    labels: list[str] = []
    for _ in range(rng.randint(1, 40)):
        if labels and rng.random() < 0.6:
            rtype = rng.choice(list(SCHEMA))
            src, dst = rng.randrange(len(labels)), rng.randrange(len(labels))
            ops.append(("rel", rtype, src, dst))
        else:
            label = rng.choice(LABELS)
            labels.append(label)
            ops.append(("node", label, {"name": f"n{len(labels)}"}))
    return ops


def _replay(ops: list[tuple]) -> PropertyGraph:
    g = PropertyGraph()
    for op in ops:
        try:
            if op[0] == "node":
                g.create_node(op[1], op[2])
            else:
                g.create_relationship(op[1], op[2], op[3])
        except (IncompatibleEndpoints, CitesSelfLoop):
            pass
    return g


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_store_invariants_hold_for_random_builds(seed):
    ops = _random_build(seed)
    g = _replay(ops)
    g.check_integrity()
    for rel in g.relationships:
        assert (g.node(rel.source).label, g.node(rel.target).label) == SCHEMA[rel.type]
    # the label index partitions the node set
    assert sorted(n for label in LABELS for n in g.nodes_with_label(label)) == list(range(len(g)))
    # identical creation sequences give identical ids and iteration orders
    h = _replay(ops)
    assert [(n.id, n.label, n.properties) for n in g.nodes] == [(n.id, n.label, n.properties) for n in h.nodes]
    assert g.relationships == h.relationships
    for nid in range(len(g)):
        assert g.neighbors(nid) == h.neighbors(nid)
