from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reebcob.errors import GraphError
from reebcob.exactlin import Element, integers_mod
from reebcob.reeb import (CIRCLE, LINE, ReebGraph, components, fiber_labels, h1, level_set,
                          make_graph, validate, vertex_relation, vertex_relations)
from reebcob.symbols import SymbolTable
from reebcob.verify import random_reeb_graph


@pytest.fixture
def table():
    t = SymbolTable()
    for name in ("A", "B"):
        t.make_atom(name, 2)
    t.make_atom("C", 3)
    return t


def test_fig2_is_valid(fig2):
    assert validate(fig2) == []
    assert len(fig2.vertices) == 5 and len(fig2.edges) == 5


def test_fig2_relations(fig2):
    t = fig2.table
    rel = dict(vertex_relations(fig2))
    assert rel["v4"] == Element({t.label("N3"): 1, t.label("K"): -2})
    assert rel["v5"] == Element({t.label("K"): 2})
    assert rel["v1"] == Element({t.label("S2"): -1})


def test_fig2_level_sets(fig2):
    t = fig2.table
    assert level_set(fig2, Fraction(7, 2)).counts() == {t.label("K"): 2}
    assert level_set(fig2, Fraction(1, 2)).counts() == {t.label("S2"): 1}
    with pytest.raises(GraphError):
        level_set(fig2, 3)


def test_fig2_h1(fig2):
    assert h1(fig2).free_rank == 1
    assert h1(fig2, integers_mod(2)).free_rank == 1


def test_bundle(bundle):
    assert bundle.is_bundle
    assert validate(bundle) == []
    assert vertex_relations(bundle) == []
    assert h1(bundle).free_rank == 1


def test_self_loop_on_line_rejected(table):
    g = make_graph(LINE, table, [("v1", 0)], [("e1", "v1", "v1", "A")])
    assert any("below" in d for d in validate(g))


def test_open_edge_on_line_rejected(table):
    g = make_graph(LINE, table, [("v1", 0)], [("e1", None, None, "A")])
    assert any("open edge" in d for d in validate(g))


def test_inhomogeneous_dimension(table):
    g = make_graph(LINE, table, [("v1", 0), ("v2", 1)],
                   [("e1", "v1", "v2", "A"), ("e2", "v1", "v2", "C")])
    assert any("dimension" in d for d in validate(g))


def test_disconnected_needs_flag(table):
    vs = [("v1", 0), ("v2", 1), ("w1", 0), ("w2", 1)]
    es = [("e1", "v1", "v2", "A"), ("e2", "w1", "w2", "A")]
    g = make_graph(LINE, table, vs, es)
    assert any("disconnected" in d for d in validate(g))
    assert validate(g.with_(allow_disconnected=True)) == []
    assert len(components(g)) == 2


def test_isolated_vertex(table):
    g = make_graph(LINE, table, [("v1", 0), ("v2", 1), ("v3", 2)], [("e1", "v1", "v2", "A")])
    assert any("isolated" in d for d in validate(g))


def test_circle_wrapping_edge(table):
    vs = [("v1", Fraction(1, 4)), ("v2", Fraction(3, 4))]
    es = [("e1", "v1", "v2", "A"), ("e2", "v2", "v1", "B")]
    g = make_graph(CIRCLE, table, vs, es)
    assert validate(g) == []
    assert level_set(g, Fraction(1, 10)).counts() == {table.label("B"): 1}
    assert level_set(g, Fraction(9, 10)).counts() == {table.label("B"): 1}
    assert vertex_relation(g, "v1") == Element({table.label("B"): 1, table.label("A"): -1})
    assert h1(g).free_rank == 1


def test_unknown_vertex_lookup(fig2):
    with pytest.raises(GraphError):
        fig2.vertex("nope")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([LINE, CIRCLE]), st.integers(2, 12),
       st.integers(1, 6))
def test_random_graphs_are_valid(seed, target, n, labels):
    g = random_reeb_graph(seed, target=target, n_vertices=n, n_labels=labels)
    assert validate(g) == []
    total = Element()
    for _, r in vertex_relations(g):
        total = total + r
    assert total == 0
    e, v, c = len(g.edges), len(g.vertices), len(components(g))
    assert h1(g).free_rank == e - v + c


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12))
def test_level_set_counts_match_edges(seed, n):
    g = random_reeb_graph(seed, n_vertices=n)
    for i in range(n - 1):
        t = Fraction(2 * i + 1, 2)
        crossing = [e for e in g.edges
                    if g.vertex(e.bottom).height < t < g.vertex(e.top).height]
        assert sum(level_set(g, t).counts().values()) == len(crossing)
    assert fiber_labels(g) == frozenset(e.label for e in g.edges)
