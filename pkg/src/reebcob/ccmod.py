"""The canonically (oriented) compatible submodule of a Reeb graph.

The outer part is spanned by classes that never occur as fibers; the
effective part by the vertex relations.  Only the effective part can
affect the quotient restricted to fiber classes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GraphError
from .exactlin import INTEGERS, CoefficientRing, Element, Presentation, cokernel_presentation
from .reeb import ReebGraph, ensure_valid, fiber_labels, vertex_relations
from .symbols import ManifoldClass


@dataclass(frozen=True)
class CCData:
    fiber_labels: frozenset[ManifoldClass]
    effective: tuple[Element, ...]
    sources: tuple[str, ...]  # originating vertex of each effective generator
    outer_universe: frozenset[ManifoldClass] | None
    outer_generators: frozenset[ManifoldClass]
    oriented: bool
    direct_sum_ok: bool = True

    @property
    def basis(self) -> tuple[ManifoldClass, ...]:
        return tuple(sorted(self.fiber_labels))


def cc(g: ReebGraph, universe=None, oriented: bool = False) -> CCData:
    ensure_valid(g)
    labels = fiber_labels(g)
    if oriented:
        unoriented = sorted({n for c in labels for n in c.factors
                             if not g.table.atoms[n].oriented})
        if unoriented:
            raise GraphError(f"mixed orientation flags: {', '.join(unoriented)} not oriented")
    outer_universe = None
    outer = frozenset()
    if universe is not None:
        outer_universe = frozenset(universe)
        missing = sorted(labels - outer_universe)
        if missing:
            raise GraphError(f"universe is missing fiber label {missing[0]}")
        dims = {g.table.dimension(c) for c in outer_universe | labels}
        if len(dims) > 1:
            raise GraphError("universe classes do not share the fiber dimension")
        outer = outer_universe - labels
    effective, sources = [], []
    for vid, rel in vertex_relations(g):
        if not rel.is_zero():
            effective.append(rel)
            sources.append(vid)
    data = CCData(labels, tuple(effective), tuple(sources), outer_universe, outer, oriented)
    return CCData(labels, data.effective, data.sources, outer_universe, outer, oriented,
                  direct_sum_check(data))


def direct_sum_check(d: CCData) -> bool:
    """Effective generators live on fiber classes and outer generators avoid them."""
    if d.outer_generators & d.fiber_labels:
        return False
    return all(set(r.support) <= d.fiber_labels for r in d.effective)


def quotient(g: ReebGraph, ring: CoefficientRing = INTEGERS) -> Presentation:
    """Presentation of the quotient by CC(g), restricted to fiber classes.

    Classes outside the fiber labels lie in the outer part and project to 0.
    """
    d = cc(g)
    return cokernel_presentation(d.effective, d.basis, ring, outside_zero=True)
