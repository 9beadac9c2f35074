import pytest

from reebcob.ccmod import cc, direct_sum_check, quotient
from reebcob.errors import GraphError
from reebcob.exactlin import RATIONALS, Element, integers_mod
from reebcob.fixtures import load_fixture


def test_fig2_cc(fig2, fig2_universe):
    d = cc(fig2, fig2_universe)
    assert len(d.effective) == 5
    assert d.sources == ("v1", "v2", "v3", "v4", "v5")
    assert d.outer_generators == frozenset({fig2.table.label("RP2")})
    assert direct_sum_check(d)


def test_fig2_quotient(fig2):
    q = quotient(fig2)
    assert q.torsion == (2,) and q.free_rank == 0
    assert q.generators == (Element.of(fig2.table.label("K")),)
    assert quotient(fig2, RATIONALS).is_trivial
    assert quotient(fig2, integers_mod(2)).describe() == "Z/2"


def test_sphere_quotient_trivial(sphere):
    assert quotient(sphere).is_trivial


def test_bundle_quotient_free(bundle):
    q = quotient(bundle)
    assert q.free_rank == 1 and q.torsion == ()


def test_universe_missing_label(fig2):
    with pytest.raises(GraphError, match="missing fiber label"):
        cc(fig2, frozenset({fig2.table.label("S2")}))


def test_oriented_variant_requires_oriented_atoms(fig2):
    with pytest.raises(GraphError, match="mixed orientation"):
        cc(fig2, oriented=True)


def test_sigma_quotient():
    g, _ = load_fixture("sigma")
    q = quotient(g)
    assert q.describe() == "Z/2"
    assert str(q.generators[0]) == "[Sigma]"


def test_outside_labels_project_to_zero(fig2):
    q = quotient(fig2)
    assert q.is_zero(Element.of(fig2.table.label("RP2")))
