"""Symbolic diffeomorphism classes of closed connected manifolds.

A class is a sorted multiset of atom names; products are multiset unions.
Known diffeomorphisms between products are injected as rewrite rules.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import RewriteLoopError, SymbolError

MAX_REWRITE_STEPS = 10_000


@dataclass(frozen=True)
class Atom:
    name: str
    dim: int
    orientable: bool = True
    oriented: bool = False
    reverse: str | None = None


@dataclass(frozen=True, order=True)
class ManifoldClass:
    factors: tuple[str, ...]

    def __post_init__(self):
        if not self.factors:
            raise SymbolError("a manifold class needs at least one factor")
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @classmethod
    def of(cls, *names: str) -> ManifoldClass:
        return cls(tuple(names))

    def __mul__(self, other: ManifoldClass) -> ManifoldClass:
        return ManifoldClass(self.factors + other.factors)

    def __str__(self):
        return "*".join(self.factors)


@dataclass(frozen=True)
class RewriteRule:
    lhs: ManifoldClass
    rhs: ManifoldClass

    def __str__(self):
        return f"{self.lhs} => {self.rhs}"


def _contains(big: Counter, small: Counter) -> bool:
    return all(big[k] >= v for k, v in small.items())


def canonicalize(c: ManifoldClass, rules: Sequence[RewriteRule] = (),
                 max_steps: int = MAX_REWRITE_STEPS) -> ManifoldClass:
    """Apply ``rules`` to ``c`` until none matches.

    Rules are tried in declaration order and the first match is rewritten;
    scanning restarts from the first rule after every rewrite.
    """
    if not rules:
        return c
    current = Counter(c.factors)
    lhs_counts = [(Counter(r.lhs.factors), Counter(r.rhs.factors)) for r in rules]
    steps = 0
    while True:
        for lhs, rhs in lhs_counts:
            if _contains(current, lhs):
                current -= lhs
                current += rhs
                break
        else:
            return ManifoldClass(tuple(current.elements()))
        steps += 1
        if steps > max_steps:
            raise RewriteLoopError(
                f"rewriting {c} did not terminate within {max_steps} steps")


def product(a: ManifoldClass, b: ManifoldClass,
            rules: Sequence[RewriteRule] = ()) -> ManifoldClass:
    return canonicalize(a * b, rules)


@dataclass
class SymbolTable:
    """Atoms and rewrite rules in declaration order.

    Mutated only while a graph file or fixture is being built.
    """

    atoms: dict[str, Atom] = field(default_factory=dict)
    rules: list[RewriteRule] = field(default_factory=list)

    def make_atom(self, name: str, dim: int, orientable: bool = True,
                  oriented: bool = False, reverse: str | None = None) -> Atom:
        if not name or not (name[0].isalpha() or name[0] == "_"):
            raise SymbolError(f"invalid atom name {name!r}")
        if name in self.atoms:
            raise SymbolError(f"duplicate atom {name}")
        if dim < 1:
            raise SymbolError(f"atom {name} has dim {dim} < 1")
        if oriented and not orientable:
            raise SymbolError(f"atom {name} is oriented but not orientable")
        atom = Atom(name, dim, orientable, oriented, reverse)
        self.atoms[name] = atom
        return atom

    def add_rule(self, lhs: ManifoldClass, rhs: ManifoldClass) -> RewriteRule:
        self._check_known(lhs)
        self._check_known(rhs)
        if self.dimension(lhs) != self.dimension(rhs):
            raise SymbolError(f"rule {lhs} => {rhs} changes dimension")
        if self.orientable(lhs) != self.orientable(rhs):
            raise SymbolError(f"rule {lhs} => {rhs} changes orientability")
        rule = RewriteRule(lhs, rhs)
        self.rules.append(rule)
        return rule

    def _check_known(self, c: ManifoldClass):
        for name in c.factors:
            if name not in self.atoms:
                raise SymbolError(f"unknown atom {name}")

    def label(self, *names: str) -> ManifoldClass:
        """Canonical class for the product of the named atoms."""
        c = ManifoldClass(names)
        self._check_known(c)
        return self.canonicalize(c)

    def parse_label(self, text: str, canonical: bool = True) -> ManifoldClass:
        names = [part.strip() for part in text.split("*")]
        if any(not n for n in names):
            raise SymbolError(f"malformed label {text!r}")
        if canonical:
            return self.label(*names)
        c = ManifoldClass(tuple(names))
        self._check_known(c)
        return c

    def dimension(self, c: ManifoldClass) -> int:
        self._check_known(c)
        return sum(self.atoms[n].dim for n in c.factors)

    def orientable(self, c: ManifoldClass) -> bool:
        return all(self.atoms[n].orientable for n in c.factors)

    def oriented(self, c: ManifoldClass) -> bool:
        return all(self.atoms[n].oriented for n in c.factors)

    def canonicalize(self, c: ManifoldClass) -> ManifoldClass:
        return canonicalize(c, self.rules)

    def product(self, a: ManifoldClass, b: ManifoldClass) -> ManifoldClass:
        return canonicalize(a * b, self.rules)

    def merged(self, other: SymbolTable) -> SymbolTable:
        """Union of two tables; shared atom names must agree."""
        out = SymbolTable(dict(self.atoms), list(self.rules))
        for name, atom in other.atoms.items():
            mine = out.atoms.get(name)
            if mine is None:
                out.atoms[name] = atom
            elif mine != atom:
                raise SymbolError(f"conflicting declarations of atom {name}")
        for rule in other.rules:
            if rule not in out.rules:
                out.rules.append(rule)
        return out

    def copy(self) -> SymbolTable:
        return SymbolTable(dict(self.atoms), list(self.rules))

    def without_rules(self) -> SymbolTable:
        return SymbolTable(dict(self.atoms), [])


def table_from(atoms: Iterable[tuple], rules: Iterable[tuple[str, str]] = ()) -> SymbolTable:
    """Build a table from ``(name, dim[, orientable[, oriented]])`` tuples
    and ``("A*B", "C*D")`` rule pairs."""
    table = SymbolTable()
    for spec in atoms:
        table.make_atom(*spec)
    for lhs, rhs in rules:
        table.add_rule(table.parse_label(lhs, canonical=False),
                       table.parse_label(rhs, canonical=False))
    return table
