"""Labeled Reeb graphs of maps with finitely many singular values.

Vertices sit at singular values, edges carry the class of the connected
fiber over the open interval they span.  Targets are the line or the
circle; on the circle an edge runs upward from ``bottom`` to ``top``,
wrapping through 0 when the top height is not above the bottom one.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import GraphError, ValidationError
from .exactlin import INTEGERS, CoefficientRing, Element, Presentation
from .symbols import ManifoldClass, SymbolTable

LINE = "line"
CIRCLE = "circle"
MORSE = "morse"
MORSE_BOTT = "morsebott"
GENERIC = "generic"
SINGULARITIES = (MORSE, MORSE_BOTT, GENERIC)


@dataclass(frozen=True)
class Vertex:
    id: str
    height: Fraction
    sing: str = GENERIC


@dataclass(frozen=True)
class Edge:
    id: str
    bottom: str | None  # None marks a cyclic (vertexless) end
    top: str | None
    label: ManifoldClass

    @property
    def cyclic(self) -> bool:
        return self.bottom is None and self.top is None


@dataclass(frozen=True)
class ReebGraph:
    target: str
    table: SymbolTable = field(compare=False)
    vertices: tuple[Vertex, ...] = ()
    edges: tuple[Edge, ...] = ()
    allow_disconnected: bool = False
    stable: bool = False
    notes: tuple[str, ...] = field(default=(), compare=False)

    @cached_property
    def vertex_map(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def incidence(self) -> dict[str, tuple[list[Edge], list[Edge]]]:
        """vertex id -> (edges arriving from below, edges leaving upward)."""
        inc = {v.id: ([], []) for v in self.vertices}
        for e in self.edges:
            if e.top in inc:
                inc[e.top][0].append(e)
            if e.bottom in inc:
                inc[e.bottom][1].append(e)
        return inc

    def vertex(self, vid: str) -> Vertex:
        try:
            return self.vertex_map[vid]
        except KeyError:
            raise GraphError(f"unknown vertex {vid}") from None

    @property
    def is_bundle(self) -> bool:
        """A vertexless cycle: the map is a fiber bundle over the circle."""
        return not self.vertices and len(self.edges) == 1 and self.edges[0].cyclic

    @property
    def all_morse(self) -> bool:
        return all(v.sing == MORSE for v in self.vertices)

    def with_(self, **changes) -> ReebGraph:
        return replace(self, **changes)


def make_graph(target: str, table: SymbolTable,
               vertices: Iterable[tuple], edges: Iterable[tuple], **options) -> ReebGraph:
    """Convenience constructor.

    ``vertices`` are ``(id, height[, sing])``; ``edges`` are
    ``(id, bottom, top, label)`` where label is a string like ``"K*S1"``
    and ``bottom``/``top`` may be None for a vertexless cycle.
    """
    vs = tuple(Vertex(v[0], Fraction(v[1]), v[2] if len(v) > 2 else GENERIC) for v in vertices)
    es = tuple(Edge(e[0], e[1], e[2],
                    e[3] if isinstance(e[3], ManifoldClass) else table.parse_label(e[3]))
               for e in edges)
    return ReebGraph(target, table, vs, es, **options)


# -- structure -------------------------------------------------------------------

def components(g: ReebGraph) -> list[tuple[frozenset[str], frozenset[str]]]:
    """Connected components as (vertex ids, edge ids), ordered by first vertex."""
    parent = {v.id: v.id for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        if e.bottom in parent and e.top in parent:
            a, b = find(e.bottom), find(e.top)
            if a != b:
                parent[b] = a
    groups: dict[str, tuple[list, list]] = {}
    for v in g.vertices:
        groups.setdefault(find(v.id), ([], []))[0].append(v.id)
    loose = []
    for e in g.edges:
        end = e.bottom if e.bottom in parent else e.top if e.top in parent else None
        if end is None:
            loose.append((frozenset(), frozenset([e.id])))
        else:
            groups[find(end)][1].append(e.id)
    out = [(frozenset(vs), frozenset(es)) for vs, es in groups.values()]
    return out + loose


def validate(g: ReebGraph) -> list[str]:
    """Diagnostics for every violated graph invariant; empty iff valid."""
    diags: list[str] = []
    if g.target not in (LINE, CIRCLE):
        return [f"unknown target {g.target!r}"]

    seen: set[str] = set()
    for v in g.vertices:
        if v.id in seen:
            diags.append(f"duplicate vertex id {v.id}")
        seen.add(v.id)
        if v.sing not in SINGULARITIES:
            diags.append(f"vertex {v.id} has unknown singularity {v.sing!r}")
        if g.target == CIRCLE and not (0 <= v.height < 1):
            diags.append(f"vertex {v.id} height {v.height} outside [0,1) on circle target")
    seen_e: set[str] = set()
    for e in g.edges:
        if e.id in seen_e:
            diags.append(f"duplicate edge id {e.id}")
        seen_e.add(e.id)

    dims = set()
    for e in g.edges:
        try:
            dims.add(g.table.dimension(e.label))
        except Exception as exc:
            diags.append(f"edge {e.id}: {exc}")
    if len(dims) > 1:
        diags.append("inhomogeneous fiber dimension")
    if any(d < 1 for d in dims):
        diags.append("fiber dimension must be at least 1")

    vmap = g.vertex_map
    for e in g.edges:
        ends = (e.bottom, e.top)
        for end in ends:
            if end is not None and end not in vmap:
                diags.append(f"edge {e.id} references unknown vertex {end}")
        if g.target == LINE:
            if None in ends:
                diags.append(f"open edge {e.id} on line target")
            elif e.bottom in vmap and e.top in vmap and not (
                    vmap[e.bottom].height < vmap[e.top].height):
                diags.append(f"edge {e.id}: bottom height must be below top height")
        elif (e.bottom is None) != (e.top is None):
            diags.append(f"edge {e.id} is cyclic at only one end")

    if g.target == LINE and not g.vertices:
        diags.append("line target needs at least one vertex")
    inc = g.incidence
    for v in g.vertices:
        lower, upper = inc[v.id]
        if not lower and not upper:
            diags.append(f"isolated vertex {v.id}")
    if not g.allow_disconnected and len(components(g)) > 1:
        diags.append("graph is disconnected")
    if g.stable:
        heights = [v.height for v in g.vertices]
        if len(set(heights)) != len(heights):
            diags.append("singular values are not distinct on a stable graph")
    return diags


def ensure_valid(g: ReebGraph) -> ReebGraph:
    diags = validate(g)
    if diags:
        raise ValidationError(diags)
    return g


# -- module data -------------------------------------------------------------------

def vertex_relation(g: ReebGraph, vid: str) -> Element:
    """Lower fibers minus upper fibers around a vertex."""
    g.vertex(vid)
    lower, upper = g.incidence[vid]
    return Element.sum_of(e.label for e in lower) - Element.sum_of(e.label for e in upper)


def vertex_relations(g: ReebGraph) -> list[tuple[str, Element]]:
    return [(v.id, vertex_relation(g, v.id)) for v in g.vertices]


@dataclass(frozen=True)
class LevelSet:
    fibers: tuple[ManifoldClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(sorted(self.fibers)))

    def counts(self) -> Counter:
        return Counter(self.fibers)


def _spans(g: ReebGraph, e: Edge, t: Fraction) -> bool:
    if e.cyclic:
        return True
    lo = g.vertex_map[e.bottom].height
    hi = g.vertex_map[e.top].height
    if g.target == LINE or lo < hi:
        return lo < t < hi
    if lo > hi:
        return t > lo or t < hi
    return t != lo


def level_set(g: ReebGraph, t) -> LevelSet:
    t = Fraction(t)
    if any(v.height == t for v in g.vertices):
        raise GraphError(f"{t} is a singular value")
    if g.target == CIRCLE and not (0 <= t < 1):
        raise GraphError(f"{t} is outside [0,1) on a circle target")
    return LevelSet(tuple(e.label for e in g.edges if _spans(g, e, t)))


def fiber_labels(g: ReebGraph) -> frozenset[ManifoldClass]:
    return frozenset(e.label for e in g.edges)


def h1(g: ReebGraph, ring: CoefficientRing = INTEGERS) -> Presentation:
    """First homology of the graph, free of rank E - V + C.

    The basis names one fundamental cycle per edge outside a spanning forest.
    """
    parent = {v.id: v.id for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cycles = []
    for e in g.edges:
        if e.cyclic:
            cycles.append(f"cycle:{e.id}")
            continue
        a, b = find(e.bottom), find(e.top)
        if a == b:
            cycles.append(f"cycle:{e.id}")
        else:
            parent[b] = a
    rank = len(cycles)
    ident = tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))
    modulus = ring.p if ring.kind == "Zp" else 0
    return Presentation(ring, tuple(cycles), rank, (), ident, (modulus,) * rank)


def betti_counts(g: ReebGraph) -> tuple[int, int, int]:
    """(E, V, C) with each vertexless cycle counted as one component."""
    return len(g.edges), len(g.vertices), len(components(g))
