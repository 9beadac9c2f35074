"""Checks of the product construction and of the homology criterion,
plus a seeded random Reeb graph generator for property suites."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .ccmod import cc, direct_sum_check, quotient
from .exactlin import INTEGERS, CoefficientRing, Element, Span, generates
from .reeb import (CIRCLE, LINE, MORSE, MORSE_BOTT, SINGULARITIES, Edge, ReebGraph, Vertex,
                   components, fiber_labels, h1, validate)
from .product import generator_set_S, merged_table, product_labels
from .symbols import SymbolTable


@dataclass
class Thm2Report:
    valid_ok: bool = False
    labels_ok: bool = False
    span_forward_ok: bool = False
    span_backward_ok: bool = False
    direct_sum_ok: bool = False
    connected_ok: bool = False
    morse_bott_ok: bool = False
    witnesses: list[str] = field(default_factory=list)
    forward_witnesses: list[tuple[str, tuple]] = field(default_factory=list)
    backward_witnesses: list[tuple[str, tuple]] = field(default_factory=list)
    s_size: int = 0

    @property
    def passed(self) -> bool:
        return all((self.valid_ok, self.labels_ok, self.span_forward_ok,
                    self.span_backward_ok, self.direct_sum_ok, self.connected_ok,
                    self.morse_bott_ok))

    def flags(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in (
            "valid_ok", "labels_ok", "span_forward_ok", "span_backward_ok",
            "direct_sum_ok", "connected_ok", "morse_bott_ok")}

    def to_dict(self) -> dict:
        return {
            **self.flags(),
            "pass": self.passed,
            "s_size": self.s_size,
            "failures": list(self.witnesses),
            "forward_witnesses": [[e, list(w)] for e, w in self.forward_witnesses],
            "backward_witnesses": [[e, list(w)] for e, w in self.backward_witnesses],
        }


def check_thm2(f: ReebGraph, g: ReebGraph, result: ReebGraph) -> Thm2Report:
    report = Thm2Report()
    relaxed = result.with_(allow_disconnected=True)
    diags = validate(f) + validate(g) + validate(relaxed)
    if diags:
        report.witnesses += diags
        return report
    report.valid_ok = True
    table = merged_table(f, g).merged(result.table)

    expected = product_labels(f, g, table)
    actual = frozenset(table.canonicalize(c) for c in fiber_labels(result))
    report.labels_ok = expected == actual
    for c in sorted(expected - actual):
        report.witnesses.append(f"missing product fiber {c}")
    for c in sorted(actual - expected):
        report.witnesses.append(f"fiber {c} is not a product of fibers")

    s_elems = generator_set_S(f, g).elements
    report.s_size = len(s_elems)
    data = cc(relaxed)
    eff = [Element((table.canonicalize(c), a) for c, a in r.items()) for r in data.effective]
    basis = sorted(expected | actual)
    span_s = Span(s_elems, INTEGERS, basis)
    span_eff = Span(eff, INTEGERS, basis)

    report.span_forward_ok = True
    for vid, r in zip(data.sources, eff):
        m = span_s.contains(r)
        if m:
            report.forward_witnesses.append((str(r), m.witness))
        else:
            report.span_forward_ok = False
            report.witnesses.append(f"relation {r} at {vid} is not in span(S)")
    report.span_backward_ok = True
    for s in s_elems:
        m = span_eff.contains(s)
        if m:
            report.backward_witnesses.append((str(s), m.witness))
        else:
            report.span_backward_ok = False
            report.witnesses.append(f"S-generator {s} is not in the effective span")

    report.direct_sum_ok = direct_sum_check(data)
    report.connected_ok = len(components(result)) == 1
    if not report.connected_ok:
        report.witnesses.append("result is disconnected")
    if f.all_morse and g.all_morse:
        bad = [v.id for v in result.vertices if v.sing != MORSE_BOTT]
        report.morse_bott_ok = not bad
        if bad:
            report.witnesses.append(f"vertex {bad[0]} is not Morse-Bott")
    else:
        report.morse_bott_ok = True
    return report


@dataclass
class HomReport:
    well_defined_ok: bool
    surjective_ok: bool
    image_table: dict[tuple[str, str], dict]
    zero_map: bool
    source: tuple[str, str]
    target: str
    target_invariant_factors: tuple[int, ...] = ()
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "well_defined_ok": self.well_defined_ok,
            "surjective_ok": self.surjective_ok,
            "zero_map": self.zero_map,
            "source": list(self.source),
            "target": self.target,
            "target_invariant_factors": list(self.target_invariant_factors),
            "image_table": [{"left": a, "right": b, **v} for (a, b), v in self.image_table.items()],
            "failures": list(self.failures),
        }


def _pair(x: Element, y: Element, table: SymbolTable) -> Element:
    return Element((table.product(c, d), a * b) for c, a in x.items() for d, b in y.items())


def induced_hom(f: ReebGraph, g: ReebGraph, result: ReebGraph,
                ring: CoefficientRing = INTEGERS) -> HomReport:
    """The pairing of quotients sending a pair of fiber classes to their product."""
    table = merged_table(f, g).merged(result.table)
    target = quotient(result, ring)
    relations = list(cc(result).effective)
    span = Span(relations, ring, target.basis)
    inside = set(target.basis)

    def in_target_span(x: Element) -> bool:
        # classes outside the fiber labels belong to the outer part
        x = Element((c, a) for c, a in x.items() if c in inside)
        return bool(span.contains(x))

    failures = []
    labels_f, labels_g = sorted(fiber_labels(f)), sorted(fiber_labels(g))
    for r in cc(f).effective:
        for fn in labels_g:
            if not in_target_span(r.cross(fn, table)):
                failures.append(f"({r}) x {fn} is not in CC of the result")
    for r in cc(g).effective:
        for fm in labels_f:
            if not in_target_span(_pair(Element.of(fm), r, table)):
                failures.append(f"{fm} x ({r}) is not in CC of the result")

    qf, qg = quotient(f, ring), quotient(g, ring)
    image = {}
    for x in qf.generators:
        for y in qg.generators:
            prod = _pair(x, y, table)
            coords = target.project(prod)
            image[(str(x), str(y))] = {"product": str(prod), "coords": [str(c) for c in coords],
                                       "zero": not any(coords)}
    products = [table.product(a, b) for a in labels_f for b in labels_g]
    prod_elems = [Element.of(c) for c in products if c in inside]
    surjective = generates(prod_elems, target, relations)
    zero_map = all(target.is_zero(Element.of(c)) for c in products)
    return HomReport(not failures, surjective, image, zero_map,
                     (qf.describe(), qg.describe()), target.describe(),
                     target.torsion, failures)


@dataclass
class Thm1Report:
    witnesses: list[str]
    h1_rank: int
    ring: str

    @property
    def vacuous(self) -> bool:
        return not self.witnesses

    @property
    def passed(self) -> bool:
        return self.vacuous or self.h1_rank >= 1

    def to_dict(self) -> dict:
        return {"pass": self.passed, "vacuous": self.vacuous, "witnesses": self.witnesses,
                "h1_rank": self.h1_rank, "ring": self.ring}


def check_thm1(g: ReebGraph, ring: CoefficientRing = INTEGERS) -> Thm1Report:
    """A fiber class surviving in the quotient forces a cycle in the graph."""
    q = quotient(g, ring)
    witnesses = [str(c) for c in q.basis if not q.is_zero(Element.of(c))]
    return Thm1Report(witnesses, h1(g, ring).free_rank, str(ring))


def random_reeb_graph(seed: int, target: str = LINE, n_vertices: int = 4,
                      n_labels: int = 3, max_degree: int = 3, morse: bool = True,
                      tree: bool = False, fiber_dim: int = 2) -> ReebGraph:
    """A valid connected Reeb graph built level by level.

    Vertex ``i`` consumes open strands from below and births new ones; on
    the line every strand is capped, on the circle leftovers wrap around
    into the lowest vertex.  ``tree`` consumes exactly one strand per
    vertex, so the result has no cycles.
    """
    if n_vertices < 1 or n_labels < 1 or max_degree < 1 or fiber_dim < 1:
        raise ValueError("random graph parameters must be positive")
    if target not in (LINE, CIRCLE):
        raise ValueError(f"unknown target {target!r}")
    if max_degree < 2 and n_vertices > 2:
        raise ValueError("max_degree must be at least 2 for more than two vertices")
    if target == LINE and n_vertices < 2:
        raise ValueError("a line-valued graph needs at least two vertices")
    if target == CIRCLE and (max_degree < 2 or tree and n_vertices < 2):
        raise ValueError("circle-valued graphs need max_degree >= 2 and tree mode two vertices")

    rng = random.Random(seed)
    table = SymbolTable()
    labels = [table.label(table.make_atom(f"F{i}", fiber_dim).name) for i in range(n_labels)]
    n = n_vertices
    if target == LINE:
        heights = [Fraction(i) for i in range(n)]
    else:
        heights = [Fraction(i + 1, n + 1) for i in range(n)]
    vertices = [Vertex(f"v{i}", heights[i], MORSE if morse else rng.choice(SINGULARITIES))
                for i in range(n)]
    edges: list[Edge] = []
    open_strands: list[tuple[str, object]] = []

    def birth(vid: str, count: int):
        for _ in range(count):
            open_strands.append((vid, labels[rng.randrange(n_labels)]))

    def close(vid: str, count: int):
        picked = sorted(rng.sample(range(len(open_strands)), count), reverse=True)
        for idx in picked:
            bottom, label = open_strands.pop(idx)
            edges.append(Edge(f"e{len(edges)}", bottom, vid, label))

    if target == CIRCLE and n == 1:
        for _ in range(rng.randint(1, max_degree // 2)):
            edges.append(Edge(f"e{len(edges)}", "v0", "v0", labels[rng.randrange(n_labels)]))
        return ReebGraph(target, table, tuple(vertices), tuple(edges), stable=True)

    if tree:
        birth("v0", rng.randint(1, min(max_degree, n - 1)))
        for i in range(1, n):
            remaining = n - i
            close(f"v{i}", 1)
            left = len(open_strands)
            lo = 1 if remaining > 1 and left == 0 else 0
            hi = min(max_degree - 1, remaining - 1 - left)
            birth(f"v{i}", rng.randint(lo, hi))
        return ReebGraph(target, table, tuple(vertices), tuple(edges), stable=True)

    first = rng.randint(1, max_degree)
    birth("v0", first)
    wrap_cap = max_degree - first
    for i in range(1, n):
        vid = f"v{i}"
        cur = len(open_strands)
        if i == n - 1:
            if target == LINE:
                close(vid, cur)
                break
            c = rng.randint(max(1, cur - wrap_cap), cur)
            b = rng.randint(0, min(max_degree - c, wrap_cap - (cur - c)))
            close(vid, c)
            birth(vid, b)
            break
        choices = [c for c in range(1, cur + 1) if c < cur or max_degree - cur >= 1]
        c = rng.choice(choices)
        lo = 1 if c == cur else 0
        hi = min(max_degree - c, max_degree - (cur - c))
        close(vid, c)
        birth(vid, rng.randint(lo, hi))
    close("v0", len(open_strands))
    return ReebGraph(target, table, tuple(vertices), tuple(edges), stable=True)
