"""Reading and writing ``.reeb`` graph files, and Graphviz export.

Example::

    target line
    atom S2 dim=2 orientable=true
    vertex v1 height=0 sing=morse
    vertex v2 height=1 sing=morse
    edge e1 v1 v2 label=S2
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .errors import ParseError, SymbolError
from .reeb import CIRCLE, LINE, SINGULARITIES, Edge, ReebGraph, Vertex, vertex_relation
from .symbols import ManifoldClass, SymbolTable

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_ID = r"[A-Za-z0-9_.:+\-]+"
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def _bool(text: str, lineno: int) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ParseError(f"expected a boolean, got {text!r}", lineno)


def _rational(text: str, lineno: int) -> Fraction:
    if not _RATIONAL.match(text):
        raise ParseError(f"expected an integer or p/q height, got {text!r}", lineno)
    return Fraction(text)


def _options(tokens: list[str], lineno: int, allowed: set[str]) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        key, value = tok.split("=", 1)
        if key not in allowed:
            raise ParseError(f"unknown option {key!r}", lineno)
        out[key] = value
    return out


def parse(text: str) -> tuple[ReebGraph, frozenset[ManifoldClass] | None]:
    """Parse a graph file into a graph and its optional outer-part universe."""
    table = SymbolTable()
    target = None
    options = {"allow_disconnected": False, "stable": False}
    pending_rules, pending_universe = [], []
    vertices, edges = [], []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "target":
                if len(rest) != 1 or rest[0] not in (LINE, CIRCLE):
                    raise ParseError("target must be 'line' or 'circle'", lineno)
                if target is not None:
                    raise ParseError("target declared twice", lineno)
                target = rest[0]
            elif head == "option":
                if len(rest) != 1 or rest[0] not in ("allow-disconnected", "stable"):
                    raise ParseError("option must be allow-disconnected or stable", lineno)
                options[rest[0].replace("-", "_")] = True
            elif head == "atom":
                if not rest or not re.fullmatch(_NAME, rest[0]):
                    raise ParseError("atom needs a name", lineno)
                opts = _options(rest[1:], lineno, {"dim", "orientable", "oriented", "reverse"})
                if "dim" not in opts or "orientable" not in opts:
                    raise ParseError("atom needs dim= and orientable=", lineno)
                if not opts["dim"].lstrip("-").isdigit():
                    raise ParseError(f"dim must be an integer, got {opts['dim']!r}", lineno)
                table.make_atom(rest[0], int(opts["dim"]), _bool(opts["orientable"], lineno),
                                _bool(opts.get("oriented", "false"), lineno), opts.get("reverse"))
            elif head == "rewrite":
                body = " ".join(rest)
                if body.count("=>") != 1:
                    raise ParseError("rewrite needs exactly one '=>'", lineno)
                lhs, rhs = (part.strip() for part in body.split("=>"))
                pending_rules.append((lhs, rhs, lineno))
            elif head == "universe":
                labels = [x.strip() for x in " ".join(rest).split(",") if x.strip()]
                if not labels:
                    raise ParseError("universe needs at least one label", lineno)
                pending_universe += [(lab, lineno) for lab in labels]
            elif head == "vertex":
                if not rest or not re.fullmatch(_ID, rest[0]):
                    raise ParseError("vertex needs an id", lineno)
                opts = _options(rest[1:], lineno, {"height", "sing"})
                if "height" not in opts:
                    raise ParseError("vertex needs height=", lineno)
                sing = opts.get("sing", "generic")
                if sing not in SINGULARITIES:
                    raise ParseError(f"unknown singularity {sing!r}", lineno)
                vertices.append(Vertex(rest[0], _rational(opts["height"], lineno), sing))
            elif head == "edge":
                if len(rest) != 4 or not all(re.fullmatch(_ID, t) for t in rest[:3]):
                    raise ParseError("edge needs: ID BOTTOM TOP label=LABEL", lineno)
                opts = _options(rest[3:], lineno, {"label"})
                if "label" not in opts:
                    raise ParseError("edge needs label=", lineno)
                edges.append((rest[0], rest[1], rest[2], opts["label"], lineno))
            elif head == "cycle-edge":
                if len(rest) != 2:
                    raise ParseError("cycle-edge needs: ID label=LABEL", lineno)
                opts = _options(rest[1:], lineno, {"label"})
                if "label" not in opts:
                    raise ParseError("cycle-edge needs label=", lineno)
                edges.append((rest[0], None, None, opts["label"], lineno))
            else:
                raise ParseError(f"unknown directive {head!r}", lineno)
        except SymbolError as exc:
            raise ParseError(str(exc), lineno) from None

    if target is None:
        raise ParseError("missing target declaration")

    for lhs, rhs, lineno in pending_rules:
        try:
            table.add_rule(table.parse_label(lhs, canonical=False),
                           table.parse_label(rhs, canonical=False))
        except SymbolError as exc:
            raise ParseError(str(exc), lineno) from None

    def label(text, lineno):
        try:
            return table.parse_label(text)
        except SymbolError as exc:
            raise ParseError(str(exc), lineno) from None

    universe = None
    if pending_universe:
        universe = frozenset(label(t, n) for t, n in pending_universe)
    built = tuple(Edge(eid, bottom, top, label(lab, n)) for eid, bottom, top, lab, n in edges)
    graph = ReebGraph(target, table, tuple(vertices), built, **options)
    return graph, universe


def _height(h: Fraction) -> str:
    return str(h.numerator) if h.denominator == 1 else f"{h.numerator}/{h.denominator}"


def serialize(g: ReebGraph, universe=None) -> str:
    lines = [f"# {note}" for note in g.notes]
    lines.append(f"target {g.target}")
    if g.allow_disconnected:
        lines.append("option allow-disconnected")
    if g.stable:
        lines.append("option stable")
    for a in g.table.atoms.values():
        extra = f" reverse={a.reverse}" if a.reverse else ""
        lines.append(f"atom {a.name} dim={a.dim} orientable={str(a.orientable).lower()} "
                     f"oriented={str(a.oriented).lower()}{extra}")
    for rule in g.table.rules:
        lines.append(f"rewrite {rule.lhs} => {rule.rhs}")
    if universe:
        lines.append("universe " + ", ".join(str(c) for c in sorted(universe)))
    for v in g.vertices:
        lines.append(f"vertex {v.id} height={_height(v.height)} sing={v.sing}")
    for e in g.edges:
        if e.cyclic:
            lines.append(f"cycle-edge {e.id} label={e.label}")
        else:
            lines.append(f"edge {e.id} {e.bottom} {e.top} label={e.label}")
    return "\n".join(lines) + "\n"


def load(path) -> tuple[ReebGraph, frozenset[ManifoldClass] | None]:
    return parse(Path(path).read_text(encoding="utf-8"))


def dump(g: ReebGraph, path, universe=None):
    Path(path).write_text(serialize(g, universe), encoding="utf-8")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: ReebGraph) -> str:
    """Graphviz source: vertices as ``id@height: relation``, edges by label."""
    lines = ["digraph reeb {", "  rankdir=BT;", "  node [shape=point, xlabel=\"\"];"]
    for v in g.vertices:
        text = f"{v.id}@{_height(v.height)}: {vertex_relation(g, v.id)}"
        lines.append(f"  {_quote(v.id)} [xlabel={_quote(text)}];")
    for e in g.edges:
        if e.cyclic:
            anchor = _quote(f"cycle:{e.id}")
            lines.append(f"  {anchor} [shape=circle, label=\"\", width=0.1];")
            lines.append(f"  {anchor} -> {anchor} [label={_quote(str(e.label))}];")
        else:
            lines.append(f"  {_quote(e.bottom)} -> {_quote(e.top)} "
                         f"[label={_quote(str(e.label))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
