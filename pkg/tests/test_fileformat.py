from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reebcob.errors import ParseError
from reebcob.fileformat import parse, serialize, to_dot
from reebcob.fixtures import NAMES, load_fixture
from reebcob.product import cf
from reebcob.reeb import CIRCLE, LINE, validate
from reebcob.verify import random_reeb_graph

HEADER = "target line\natom S2 dim=2 orientable=true\natom K dim=2 orientable=false\n"


@pytest.mark.parametrize("name", NAMES)
def test_fixture_round_trip(name):
    g, universe = load_fixture(name)
    assert validate(g) == []
    again, universe2 = parse(serialize(g, universe))
    assert again == g and universe2 == universe


def test_labels_are_canonical():
    text = HEADER + "atom S1 dim=1 orientable=true\n"
    a, _ = parse(text + "vertex v1 height=0\nvertex v2 height=1\nedge e1 v1 v2 label=K*S1\n")
    b, _ = parse(text + "vertex v1 height=0\nvertex v2 height=1\nedge e1 v1 v2 label=S1*K\n")
    assert a.edges[0].label == b.edges[0].label


def test_self_loop_parses_but_fails_validation():
    g, _ = parse(HEADER + "vertex v1 height=0 sing=morse\nedge e1 v1 v1 label=S2\n")
    assert validate(g)


@pytest.mark.parametrize("text, needle", [
    ("atom S2 dim=2 orientable=true\n", "missing target"),
    ("target plane\n", "line 1"),
    (HEADER + "vertex v1 height=0.5\n", "line 4"),
    (HEADER + "edge e1 v1 v2\n", "line 4"),
    (HEADER + "edge e1 v1 v2 label=T2\n", "unknown atom"),
    (HEADER + "frobnicate\n", "unknown directive"),
    (HEADER + "vertex v1 height=0 sing=weird\n", "unknown singularity"),
    (HEADER + "rewrite S2 => S2 => K\n", "line 4"),
])
def test_parse_errors(text, needle):
    with pytest.raises(ParseError, match=needle):
        parse(text)


def test_rational_heights_written_exactly():
    g = random_reeb_graph(1, CIRCLE, 5, 2)
    text = serialize(g)
    assert "height=1/6" in text
    assert parse(text)[0].vertices[0].height == Fraction(1, 6)


def test_provenance_comments(fig2, sphere):
    text = serialize(cf(fig2, sphere))
    assert text.startswith("# gadget g0:")


def test_dot_export(fig2):
    dot = to_dot(fig2)
    assert dot.startswith("digraph")
    assert '"v4@3: -2[K] + [N3]"' in dot
    assert '[label="K"]' in dot


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([LINE, CIRCLE]), st.integers(2, 12))
def test_random_round_trip(seed, target, n):
    g = random_reeb_graph(seed, target, n, 4)
    assert parse(serialize(g))[0] == g
