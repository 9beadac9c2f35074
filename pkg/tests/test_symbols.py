import pytest
from hypothesis import given, strategies as st

from reebcob.errors import RewriteLoopError, SymbolError
from reebcob.symbols import ManifoldClass, RewriteRule, SymbolTable, canonicalize


@pytest.fixture
def table():
    t = SymbolTable()
    t.make_atom("S1", 1)
    t.make_atom("K", 2, orientable=False)
    t.make_atom("S2", 2)
    return t


def test_label_order_is_canonical(table):
    assert table.parse_label("K*S1") == table.parse_label("S1*K")
    assert str(table.parse_label("S1*K")) == "K*S1"


def test_dimension_and_orientability(table):
    c = table.parse_label("K*S1")
    assert table.dimension(c) == 3
    assert not table.orientable(c)
    assert table.orientable(table.label("S1", "S2"))


def test_unknown_atom(table):
    with pytest.raises(SymbolError, match="unknown atom"):
        table.parse_label("T2")


def test_duplicate_and_bad_atoms(table):
    with pytest.raises(SymbolError):
        table.make_atom("S1", 1)
    with pytest.raises(SymbolError):
        table.make_atom("P", 0)


def test_rule_dimension_mismatch(table):
    with pytest.raises(SymbolError):
        table.add_rule(table.label("S1"), table.label("S2"))


def test_rewrite_applies(table):
    table.make_atom("Sigma", 2)
    table.add_rule(table.label("Sigma", "S1"), table.label("S2", "S1"))
    assert table.product(table.label("Sigma"), table.label("S1")) == table.label("S1", "S2")
    assert table.canonicalize(table.label("Sigma")) == table.label("Sigma")


def test_rewrite_loop_detected():
    a, b = ManifoldClass.of("A"), ManifoldClass.of("B")
    rules = [RewriteRule(a, b), RewriteRule(b, a)]
    with pytest.raises(RewriteLoopError):
        canonicalize(a, rules, max_steps=50)


def test_merged_tables_conflict(table):
    other = SymbolTable()
    other.make_atom("S1", 2)
    with pytest.raises(SymbolError):
        table.merged(other)


names = st.lists(st.sampled_from(["A", "B", "C", "D"]), min_size=1, max_size=5)


@given(names, names, names)
def test_product_is_commutative_and_associative(x, y, z):
    a, b, c = ManifoldClass.of(*x), ManifoldClass.of(*y), ManifoldClass.of(*z)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert len((a * b).factors) == len(x) + len(y)


@given(names)
def test_canonicalize_idempotent(x):
    rules = [RewriteRule(ManifoldClass.of("A", "B"), ManifoldClass.of("C", "D"))]
    once = canonicalize(ManifoldClass.of(*x), rules)
    assert canonicalize(once, rules) == once
