"""Product maps of two Reeb graphs.

``cf(f, g)`` returns a Reeb graph whose fibers are all products of a fiber
of ``f`` with a fiber of ``g`` and whose vertex relations span the set S of
products of one map's fibers with the other map's vertex relations.

Bundles over the circle are handled by relabeling the other graph.
Otherwise every (fiber, vertex) pair becomes a closed two-vertex gadget
on the circle, and gadgets are joined by swapping same-labeled strands
(or, failing that, threading a strand through a vertex), which leaves
every vertex relation unchanged.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstructionError, GraphError
from .exactlin import Element
from .reeb import (CIRCLE, GENERIC, LINE, MORSE, MORSE_BOTT, Edge, ReebGraph, Vertex,
                   components, ensure_valid, fiber_labels, vertex_relation)
from .symbols import ManifoldClass, SymbolTable

FIBER_TIMES_VERTEX = "fiber_x_vertex"
VERTEX_TIMES_FIBER = "vertex_x_fiber"

LOW_HEIGHT = Fraction(1, 4)
HIGH_HEIGHT = Fraction(3, 4)


@dataclass(frozen=True)
class GadgetSpec:
    kind: str
    fiber: ManifoldClass
    vertex: str
    lower: tuple[ManifoldClass, ...]
    upper: tuple[ManifoldClass, ...]
    element: Element

    def describe(self) -> str:
        if self.kind == FIBER_TIMES_VERTEX:
            src = f"fiber {self.fiber} x vertex {self.vertex} of the second map"
        else:
            src = f"vertex {self.vertex} of the first map x fiber {self.fiber}"
        return f"{self.element} from {src}"


@dataclass(frozen=True)
class SGeneratorSet:
    generators: tuple[GadgetSpec, ...]

    @property
    def elements(self) -> list[Element]:
        return [s.element for s in self.generators]

    def __len__(self):
        return len(self.generators)


def merged_table(f: ReebGraph, g: ReebGraph) -> SymbolTable:
    return f.table.merged(g.table)


def product_labels(f: ReebGraph, g: ReebGraph,
                   table: SymbolTable | None = None) -> frozenset[ManifoldClass]:
    table = table or merged_table(f, g)
    return frozenset(table.product(a, b) for a in fiber_labels(f) for b in fiber_labels(g))


def _specs(f: ReebGraph, g: ReebGraph, table: SymbolTable, include_flat: bool):
    out = []
    for fm in sorted(fiber_labels(f)):
        for v in g.vertices:
            if not include_flat and vertex_relation(g, v.id).is_zero():
                continue
            lower, upper = g.incidence[v.id]
            lo = tuple(table.product(fm, e.label) for e in lower)
            up = tuple(table.product(fm, e.label) for e in upper)
            out.append(GadgetSpec(FIBER_TIMES_VERTEX, fm, v.id, lo, up,
                                  Element.sum_of(lo) - Element.sum_of(up)))
    labels_g = sorted(fiber_labels(g))
    for v in f.vertices:
        if not include_flat and vertex_relation(f, v.id).is_zero():
            continue
        lower, upper = f.incidence[v.id]
        for fn in labels_g:
            lo = tuple(table.product(e.label, fn) for e in lower)
            up = tuple(table.product(e.label, fn) for e in upper)
            out.append(GadgetSpec(VERTEX_TIMES_FIBER, fn, v.id, lo, up,
                                  Element.sum_of(lo) - Element.sum_of(up)))
    return out


def generator_set_S(f: ReebGraph, g: ReebGraph) -> SGeneratorSet:
    """Products of each fiber of one map with each nonzero vertex relation of
    the other, in both directions."""
    ensure_valid(f)
    ensure_valid(g)
    return SGeneratorSet(tuple(_specs(f, g, merged_table(f, g), include_flat=False)))


def product_with_bundle(g: ReebGraph, fiber: ManifoldClass,
                        table: SymbolTable | None = None) -> ReebGraph:
    """Compose the projection ``M x F -> M`` with the map of ``g``.

    ``table`` must know the atoms of both ``g`` and ``fiber``.
    """
    ensure_valid(g)
    table = table or g.table
    table.dimension(fiber)
    vertices = tuple(Vertex(v.id, v.height, MORSE_BOTT if v.sing == MORSE else v.sing)
                     for v in g.vertices)
    edges = tuple(Edge(e.id, e.bottom, e.top, table.product(e.label, fiber))
                  for e in g.edges)
    notes = (f"product with a bundle over the circle with fiber {fiber}",)
    return ReebGraph(g.target, table, vertices, edges, g.allow_disconnected, g.stable, notes)


def _gadget_key(spec: GadgetSpec):
    return tuple(sorted([tuple(sorted(spec.lower)), tuple(sorted(spec.upper))]))


def case2(f: ReebGraph, g: ReebGraph, dedupe: bool = False) -> ReebGraph:
    """One closed circle-valued gadget per (fiber, vertex) pair.

    Gadget ``k`` has vertices ``g{k}a`` (height 1/4) and ``g{k}b`` (3/4);
    lower products run ``a -> b``, upper products wrap ``b -> a``, so the
    relation at ``b`` is the S-element and at ``a`` its negative.  Flat
    vertices give zero-relation gadgets that only contribute fibers.  With
    ``dedupe``, gadgets with the same pair of fiber multisets are kept once.
    """
    ensure_valid(f)
    ensure_valid(g)
    if not f.vertices or not g.vertices:
        raise ConstructionError("a map without singular values is a bundle; use the bundle product")
    table = merged_table(f, g)
    specs = _specs(f, g, table, include_flat=True)
    if dedupe:
        seen, kept = set(), []
        for s in specs:
            key = _gadget_key(s)
            if key not in seen:
                seen.add(key)
                kept.append(s)
        specs = kept
    sing = MORSE_BOTT if f.all_morse and g.all_morse else GENERIC
    vertices, edges, notes = [], [], []
    for k, s in enumerate(specs):
        a, b = f"g{k}a", f"g{k}b"
        vertices += [Vertex(a, LOW_HEIGHT, sing), Vertex(b, HIGH_HEIGHT, sing)]
        j = 0
        for label in s.lower:
            edges.append(Edge(f"g{k}e{j}", a, b, label))
            j += 1
        for label in s.upper:
            edges.append(Edge(f"g{k}e{j}", b, a, label))
            j += 1
        notes.append(f"gadget g{k}: {s.describe()}")
    return ReebGraph(CIRCLE, table, tuple(vertices), tuple(edges),
                     allow_disconnected=True, notes=tuple(notes))


def strand_swap(g: ReebGraph, e1: str, e2: str) -> ReebGraph:
    """Cross-join two edges with the same label.

    ``e1`` becomes ``bottom(e1) -> top(e2)`` and ``e2`` becomes
    ``bottom(e2) -> top(e1)``; every vertex keeps its incident labels.
    """
    if e1 == e2:
        raise GraphError("cannot swap an edge with itself")
    try:
        a, b = g.edge_map[e1], g.edge_map[e2]
    except KeyError as exc:
        raise GraphError(f"unknown edge {exc.args[0]}") from None
    if g.table.canonicalize(a.label) != g.table.canonicalize(b.label):
        raise GraphError(f"label mismatch: {a.label} vs {b.label}")
    if a.cyclic or b.cyclic:
        raise GraphError("vertexless cycles cannot be swapped")
    if g.target == LINE:
        h = {v.id: v.height for v in g.vertices}
        if not (h[a.bottom] < h[b.top] and h[b.bottom] < h[a.top]):
            raise GraphError("swap would reverse an edge on a line target")
    new = {e1: Edge(e1, a.bottom, b.top, a.label), e2: Edge(e2, b.bottom, a.top, b.label)}
    edges = tuple(new.get(e.id, e) for e in g.edges)
    out = g.with_(edges=edges)
    if len(components(out)) > 1:
        out = out.with_(allow_disconnected=True)
    return out


def bridges(g: ReebGraph) -> set[str]:
    """Edge ids whose removal disconnects their component (multigraph aware)."""
    adj: dict[str, list[tuple[str, str]]] = {v.id: [] for v in g.vertices}
    for e in g.edges:
        if e.cyclic:
            continue
        adj[e.bottom].append((e.top, e.id))
        adj[e.top].append((e.bottom, e.id))
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    out: set[str] = set()
    counter = 0
    for root in adj:
        if root in disc:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack = [(root, None, iter(adj[root]))]
        while stack:
            node, via, it = stack[-1]
            advanced = False
            for nxt, eid in it:
                if eid == via:
                    continue
                if nxt in disc:
                    low[node] = min(low[node], disc[nxt])
                else:
                    disc[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append((nxt, eid, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[node])
                    if low[node] > disc[parent]:
                        out.add(via)
    return out


def thread_strand(g: ReebGraph, eid: str, vid: str) -> ReebGraph:
    """Route edge ``eid`` through vertex ``vid``.

    ``a -> b`` becomes ``a -> vid -> b`` with the same label, so ``vid``
    gains one lower and one upper copy of the label and its relation is
    unchanged.
    """
    try:
        e = g.edge_map[eid]
    except KeyError:
        raise GraphError(f"unknown edge {eid}") from None
    w = g.vertex(vid)
    if e.cyclic:
        raise GraphError("vertexless cycles cannot be threaded")
    if g.target == LINE:
        h = {v.id: v.height for v in g.vertices}
        if not (h[e.bottom] < w.height < h[e.top]):
            raise GraphError("threading would reverse an edge on a line target")
    new_id = f"{eid}.{vid}"
    if new_id in g.edge_map:
        raise GraphError(f"edge id {new_id} already exists")
    edges = []
    for x in g.edges:
        if x.id == eid:
            edges += [Edge(eid, e.bottom, vid, e.label), Edge(new_id, vid, e.top, e.label)]
        else:
            edges.append(x)
    return g.with_(edges=tuple(edges))


def _merge_step(g: ReebGraph, rng: random.Random | None) -> ReebGraph:
    comps = components(g)
    bridge_set = bridges(g)
    by_comp = []
    for _, eids in comps:
        labels: dict[ManifoldClass, list[str]] = {}
        for e in g.edges:
            if e.id in eids and not e.cyclic:
                labels.setdefault(e.label, []).append(e.id)
        by_comp.append(labels)
    order = list(range(len(comps)))
    if rng is not None:
        rng.shuffle(order)
    fallback = None
    for i in order:
        labs = sorted(by_comp[i])
        if rng is not None:
            rng.shuffle(labs)
        for lab in labs:
            for j in order:
                if j == i or lab not in by_comp[j]:
                    continue
                for e1 in sorted(by_comp[i][lab], key=lambda e: e in bridge_set):
                    for e2 in sorted(by_comp[j][lab], key=lambda e: e in bridge_set):
                        if e1 in bridge_set and e2 in bridge_set:
                            if fallback is None:
                                fallback = (e1, g.edge_map[e2].bottom)
                            continue
                        try:
                            return strand_swap(g, e1, e2)
                        except GraphError:
                            continue
    # every shared label sits on bridges: thread a strand through a vertex
    # of the partner component instead
    candidates = []
    if fallback is not None:
        candidates.append(fallback)
    position = {v.id: k for k, v in enumerate(g.vertices)}
    for i in order:
        for j in order:
            if i != j and comps[j][0]:
                w = min(comps[j][0], key=position.__getitem__)
                candidates += [(e, w) for labs in by_comp[i].values() for e in labs]
    for eid, vid in candidates:
        try:
            return thread_strand(g, eid, vid)
        except GraphError:
            continue
    raise ConstructionError("an isolated component cannot be joined to any other")


def connect_all(g: ReebGraph, rng: random.Random | None = None) -> ReebGraph:
    """Merge components until the graph is connected, keeping every vertex
    relation.

    Strand swaps between same-labeled edges are preferred (the first
    component, its smallest shared label, the first partner component);
    when every shared label sits on bridges a strand is threaded through a
    vertex of the partner instead.  ``rng`` permutes the schedule.
    """
    count = len(components(g))
    while count > 1:
        g = _merge_step(g, rng)
        new_count = len(components(g))
        assert new_count == count - 1
        count = new_count
    return g.with_(allow_disconnected=False)


def cf(f: ReebGraph, g: ReebGraph, rng: random.Random | None = None) -> ReebGraph:
    """The product map of two Reeb graphs."""
    ensure_valid(f)
    ensure_valid(g)
    table = merged_table(f, g)
    if g.is_bundle:
        return product_with_bundle(f, g.edges[0].label, table)
    if f.is_bundle:
        return product_with_bundle(g, f.edges[0].label, table)
    return connect_all(case2(f, g), rng)
