"""Exact linear algebra over Z, Z/p and Q.

Formal sums of manifold classes, Smith normal form with transforms,
cokernel presentations and span membership with witnesses.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

from .symbols import ManifoldClass, SymbolTable

Matrix = list[list[int]]


# -- coefficient rings -------------------------------------------------------

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class CoefficientRing:
    kind: str  # "Z", "Zp" or "Q"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Zp", "Q"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Zp" and not _is_prime(self.p or 0):
            raise ValueError(f"Z/{self.p} is not a field: {self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __str__(self):
        if self.kind == "Zp":
            return f"Z/{self.p}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> CoefficientRing:
        t = text.strip().upper().replace("/", "")
        if t == "Z":
            return INTEGERS
        if t == "Q":
            return RATIONALS
        if t.startswith("Z") and t[1:].isdigit():
            return integers_mod(int(t[1:]))
        raise ValueError(f"unknown coefficient ring {text!r}")


INTEGERS = CoefficientRing("Z")
RATIONALS = CoefficientRing("Q")


def integers_mod(p: int) -> CoefficientRing:
    return CoefficientRing("Zp", p)


# -- formal sums ---------------------------------------------------------------

class Element(Mapping):
    """Finitely supported formal sum of manifold classes.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ManifoldClass, int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ManifoldClass, int] = {}
        for c, a in items:
            acc[c] = acc.get(c, 0) + a
        self._terms = {c: acc[c] for c in sorted(acc) if acc[c] != 0}

    @classmethod
    def of(cls, c: ManifoldClass, coeff: int = 1) -> Element:
        return cls({c: coeff})

    @classmethod
    def sum_of(cls, classes: Iterable[ManifoldClass]) -> Element:
        """The element represented by a disjoint union (each term positive)."""
        return cls((c, 1) for c in classes)

    @classmethod
    def from_vector(cls, vec: Sequence[int], basis: Sequence[ManifoldClass]) -> Element:
        return cls(zip(basis, vec))

    def __getitem__(self, c):
        return self._terms[c]

    def __iter__(self) -> Iterator[ManifoldClass]:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def coefficient(self, c: ManifoldClass) -> int:
        return self._terms.get(c, 0)

    @property
    def support(self) -> tuple[ManifoldClass, ...]:
        return tuple(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: Element) -> Element:
        return Element(list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def __neg__(self) -> Element:
        return Element({c: -a for c, a in self._terms.items()})

    def __mul__(self, k: int) -> Element:
        return Element({c: k * a for c, a in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Element):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def cross(self, c: ManifoldClass, table: SymbolTable | None = None) -> Element:
        """Term-wise product with a class: sum a_k [F_k x c]."""
        if table is None:
            return Element((f * c, a) for f, a in self._terms.items())
        return Element((table.product(f, c), a) for f, a in self._terms.items())

    def vector(self, basis: Sequence[ManifoldClass]) -> list[int]:
        index = {c: i for i, c in enumerate(basis)}
        vec = [0] * len(basis)
        for c, a in self._terms.items():
            if c not in index:
                raise ValueError(f"class {c} is not in the basis")
            vec[index[c]] = a
        return vec

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (c, a) in enumerate(self._terms.items()):
            mag = abs(a)
            term = f"[{c}]" if mag == 1 else f"{mag}[{c}]"
            if i == 0:
                parts.append(term if a > 0 else f"-{term}")
            else:
                parts.append(("+ " if a > 0 else "- ") + term)
        return " ".join(parts)

    def __repr__(self):
        return f"Element({self})"


# -- Smith normal form ---------------------------------------------------------

def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)]
            for row in a]


def smith_normal_form(a: Matrix, ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``D == U @ a @ V``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries, each dividing the next.  The pivot is the smallest nonzero
    absolute value of the active block, ties broken row-major.  ``ncols``
    is needed only when ``a`` has no rows.
    """
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    d = [list(map(int, row)) for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = d[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return u, d, v
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(d[i][j] % p for j in range(t + 1, n))), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            if p < 0:
                d[t] = [-x for x in d[t]]
                u[t] = [-x for x in u[t]]
            break
    return u, d, v


def invariant_factors(a: Matrix) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith normal form (units included)."""
    _, d, _ = smith_normal_form(a)
    return tuple(d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i])


def unimodular_inverse(v: Matrix) -> Matrix:
    n = len(v)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(v)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = []
    for row in aug:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in tail])
    return out


# -- echelon forms with combination tracking ------------------------------------

def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) > 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _combo_add(x: dict, y: dict, k) -> dict:
    out = dict(x)
    for i, c in y.items():
        v = out.get(i, 0) + k * c
        if v:
            out[i] = v
        else:
            out.pop(i, None)
    return out


class _IntegerEchelon:
    """Row echelon basis of an integer lattice; pivots are positive."""

    def __init__(self, n: int):
        self.n = n
        self.rows: dict[int, tuple[list[int], dict]] = {}

    def insert(self, vec: list[int], combo: dict):
        vec = list(vec)
        for col in range(self.n):
            a = vec[col]
            if not a:
                continue
            if col not in self.rows:
                if a < 0:
                    vec = [-x for x in vec]
                    combo = {i: -c for i, c in combo.items()}
                self.rows[col] = (vec, combo)
                return
            row, rc = self.rows[col]
            b = row[col]
            if a % b == 0:
                q = a // b
                vec = [x - q * y for x, y in zip(vec, row)]
                combo = _combo_add(combo, rc, -q)
                continue
            g, s, t = _ext_gcd(b, a)
            new_row = [s * y + t * x for x, y in zip(vec, row)]
            new_combo = _combo_add({i: s * c for i, c in rc.items()}, combo, t)
            ab, bb = a // g, b // g
            vec = [bb * x - ab * y for x, y in zip(vec, row)]
            combo = _combo_add({i: bb * c for i, c in combo.items()}, rc, -ab)
            self.rows[col] = (new_row, new_combo)

    def reduce(self, vec: list[int]) -> dict | None:
        """Combination expressing ``vec`` in the lattice, or None."""
        vec = list(vec)
        combo: dict = {}
        for col in range(self.n):
            a = vec[col]
            if not a:
                continue
            if col not in self.rows:
                return None
            row, rc = self.rows[col]
            if a % row[col]:
                return None
            q = a // row[col]
            vec = [x - q * y for x, y in zip(vec, row)]
            combo = _combo_add(combo, rc, q)
        return combo

    def matrix(self) -> Matrix:
        return [self.rows[c][0] for c in sorted(self.rows)]


class _FieldEchelon:
    """Row echelon basis over Z/p or Q with unit pivots."""

    def __init__(self, n: int, ring: CoefficientRing):
        self.n = n
        self.ring = ring
        self.rows: dict[int, tuple[list, dict]] = {}

    def norm(self, x):
        if self.ring.kind == "Zp":
            return x % self.ring.p
        return Fraction(x)

    def inv(self, x):
        if self.ring.kind == "Zp":
            return pow(x, -1, self.ring.p)
        return 1 / x

    def _norm_combo(self, combo):
        return {i: self.norm(c) for i, c in combo.items() if self.norm(c) != 0}

    def insert(self, vec, combo: dict):
        vec = [self.norm(x) for x in vec]
        combo = self._norm_combo(combo)
        for col in range(self.n):
            a = vec[col]
            if not a:
                continue
            if col not in self.rows:
                k = self.inv(a)
                self.rows[col] = ([self.norm(x * k) for x in vec],
                                  self._norm_combo({i: c * k for i, c in combo.items()}))
                return
            row, rc = self.rows[col]
            vec = [self.norm(x - a * y) for x, y in zip(vec, row)]
            combo = self._norm_combo(_combo_add(combo, rc, -a))

    def reduce(self, vec) -> dict | None:
        vec = [self.norm(x) for x in vec]
        combo: dict = {}
        for col in range(self.n):
            a = vec[col]
            if not a:
                continue
            if col not in self.rows:
                return None
            row, rc = self.rows[col]
            vec = [self.norm(x - a * y) for x, y in zip(vec, row)]
            combo = self._norm_combo(_combo_add(combo, rc, a))
        return combo

    def rref(self) -> dict[int, list]:
        """Pivot column -> fully reduced row."""
        out = {c: list(r) for c, (r, _) in self.rows.items()}
        for c in sorted(out, reverse=True):
            for c2 in out:
                if c2 < c and out[c2][c]:
                    f = out[c2][c]
                    out[c2] = [self.norm(x - f * y) for x, y in zip(out[c2], out[c])]
        return out


def _echelon(n: int, ring: CoefficientRing):
    return _IntegerEchelon(n) if ring.kind == "Z" else _FieldEchelon(n, ring)


# -- span membership -------------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    member: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.member


def _closure(elements: Iterable[Element]) -> list[ManifoldClass]:
    return sorted({c for e in elements for c in e.support})


class Span:
    """The submodule spanned by ``generators``, prepared for repeated queries."""

    def __init__(self, generators: Sequence[Element], ring: CoefficientRing = INTEGERS,
                 basis: Sequence[ManifoldClass] | None = None):
        self.generators = list(generators)
        self.ring = ring
        self.basis = list(basis) if basis is not None else _closure(self.generators)
        self._index = {c: i for i, c in enumerate(self.basis)}
        self._ech = _echelon(len(self.basis), ring)
        for i, g in enumerate(self.generators):
            self._ech.insert(g.vector(self.basis), {i: 1})

    @property
    def rank(self) -> int:
        return len(self._ech.rows)

    def contains(self, x: Element) -> Membership:
        if any(c not in self._index for c in x.support):
            return Membership(False)
        combo = self._ech.reduce(x.vector(self.basis))
        if combo is None:
            return Membership(False)
        witness = tuple(combo.get(i, 0) for i in range(len(self.generators)))
        self._check_witness(x, witness)
        return Membership(True, witness)

    def _check_witness(self, x: Element, witness: tuple):
        total = [0] * len(self.basis)
        for k, g in zip(witness, self.generators):
            if k:
                for c, a in g.items():
                    total[self._index[c]] += k * a
        target = x.vector(self.basis)
        if self.ring.kind == "Zp":
            ok = all((s - t) % self.ring.p == 0 for s, t in zip(total, target))
        else:
            ok = total == target
        if not ok:
            raise AssertionError(f"membership witness for {x} failed substitution")


def membership(x: Element, generators: Sequence[Element],
               ring: CoefficientRing = INTEGERS) -> Membership:
    """Decide whether ``x`` lies in the span of ``generators`` over ``ring``.

    A positive answer carries a coefficient vector that has been
    re-verified by substitution.
    """
    if x.is_zero():
        return Membership(True, tuple(0 for _ in generators))
    basis = _closure(list(generators) + [x])
    return Span(generators, ring, basis).contains(x)


# -- cokernel presentations ------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """A finitely generated module given as free module / relations.

    Quotient coordinates are ordered torsion first, then free.  ``moduli``
    holds the modulus of each coordinate: the invariant factor for torsion
    coordinates, ``p`` over Z/p, and 0 for free coordinates over Z or Q.
    """

    ring: CoefficientRing
    basis: tuple
    free_rank: int
    torsion: tuple[int, ...]
    projection: tuple[tuple, ...]
    moduli: tuple[int, ...]
    generators: tuple[Element, ...] = ()
    outside_zero: bool = field(default=False, compare=False)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.torsion

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def _reduce(self, k: int, x):
        mod = self.moduli[k]
        if mod:
            return x % mod
        return x

    def project(self, x: Element) -> tuple:
        index = {c: i for i, c in enumerate(self.basis)}
        out = [0] * self.rank
        for c, a in x.items():
            if c not in index:
                if self.outside_zero:
                    continue
                raise ValueError(f"class {c} is not in the presentation basis")
            row = self.projection[index[c]]
            for k in range(self.rank):
                out[k] += a * row[k]
        return tuple(self._reduce(k, v) for k, v in enumerate(out))

    def is_zero(self, x: Element) -> bool:
        return not any(self.project(x))

    def describe(self) -> str:
        parts = [f"Z/{d}" if self.ring.kind == "Z" else f"{self.ring}" for d in self.torsion]
        if self.free_rank:
            base = "Z" if self.ring.kind == "Z" else str(self.ring)
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def _unit_in(value, modulus) -> bool:
    if modulus == 0:
        return value in (1, -1) or (isinstance(value, Fraction) and value != 0)
    return gcd(int(value), modulus) == 1


def _name_generators(basis, projection, moduli, fallback) -> tuple[Element, ...]:
    """Prefer a single basis class as the generator of each coordinate."""
    gens = []
    for k, mod in enumerate(moduli):
        chosen = None
        for j, c in enumerate(basis):
            row = projection[j]
            if _unit_in(row[k], mod) and all(row[i] == 0 for i in range(len(moduli)) if i != k):
                chosen = Element.of(c)
                break
        gens.append(chosen if chosen is not None else fallback(k))
    return tuple(gens)


def cokernel_presentation(relations: Sequence[Element], basis: Sequence[ManifoldClass],
                          ring: CoefficientRing = INTEGERS,
                          outside_zero: bool = False) -> Presentation:
    """Present (free module on ``basis``) / span(``relations``) over ``ring``."""
    basis = tuple(basis)
    n = len(basis)
    allowed = set(basis)
    for r in relations:
        off = [c for c in r.support if c not in allowed]
        if off:
            raise ValueError(f"relation {r} is supported off the basis: {off[0]}")
    ech = _echelon(n, ring)
    for r in relations:
        ech.insert(r.vector(basis), {})

    if ring.kind == "Z":
        rows = ech.matrix()
        _, d, v = smith_normal_form(rows, ncols=n)
        diag = [d[i][i] for i in range(len(rows))] + [0] * (n - len(rows))
        keep = [k for k, dk in enumerate(diag) if dk != 1]
        keep.sort(key=lambda k: (diag[k] == 0, k))
        moduli = tuple(diag[k] for k in keep)
        projection = tuple(tuple(v[j][k] % diag[k] if diag[k] else v[j][k] for k in keep)
                           for j in range(n))
        vinv = unimodular_inverse(v) if n else []

        def fallback(i):
            return Element.from_vector(vinv[keep[i]], basis)

        torsion = tuple(m for m in moduli if m)
        free_rank = sum(1 for m in moduli if m == 0)
    else:
        reduced = ech.rref()
        free_cols = [c for c in range(n) if c not in reduced]
        zero = ech.norm(0)
        rows = []
        for j in range(n):
            if j in reduced:
                rows.append(tuple(ech.norm(-reduced[j][c]) for c in free_cols))
            else:
                rows.append(tuple(ech.norm(1) if c == j else zero for c in free_cols))
        projection = tuple(rows)
        moduli = tuple(ring.p if ring.kind == "Zp" else 0 for _ in free_cols)

        def fallback(i):
            return Element.of(basis[free_cols[i]])

        torsion = ()
        free_rank = len(free_cols)
    gens = _name_generators(basis, projection, moduli, fallback)
    return Presentation(ring, basis, free_rank, torsion, projection, moduli, gens, outside_zero)


def generates(elements: Sequence[Element], pres: Presentation,
              relations: Sequence[Element]) -> bool:
    """Whether the classes of ``elements`` generate the module ``pres``
    presents (``relations`` being its defining relations)."""
    span = Span(list(relations) + list(elements), pres.ring, pres.basis)
    return all(span.contains(Element.of(c)) for c in pres.basis)
