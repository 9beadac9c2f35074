import itertools
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors
from sympy.polys.domains import ZZ

from reebcob.exactlin import (INTEGERS, RATIONALS, CoefficientRing, Element, Span,
                              cokernel_presentation, integers_mod, invariant_factors,
                              matmul, membership, smith_normal_form)
from reebcob.symbols import ManifoldClass

A, B, C = (ManifoldClass.of(n) for n in "ABC")


def sympy_factors(rows):
    if not rows or not rows[0]:
        return ()
    out = sympy_invariant_factors(sympy.Matrix(rows), domain=ZZ)
    return tuple(abs(int(d)) for d in out if d != 0)


def det(m):
    return int(sympy.Matrix(m).det()) if m else 1


def check_snf(a):
    u, d, v = smith_normal_form(a)
    assert matmul(matmul(u, a), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    nonzero = [x for x in diag if x]
    assert all(x > 0 for x in nonzero)
    assert diag[:len(nonzero)] == nonzero
    for x, y in zip(nonzero, nonzero[1:]):
        assert y % x == 0
    return tuple(nonzero)


def test_known_snf():
    a = [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]
    assert check_snf(a) == (1, 10, 30)


def test_snf_edge_shapes():
    assert check_snf([[0, 0], [0, 0]]) == ()
    assert check_snf([[4]]) == (4,)
    assert check_snf([[2, 4, 6]]) == (2,)
    assert check_snf([[2], [3]]) == (1,)


matrices = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_matches_sympy(a):
    assert check_snf(a) == sympy_factors(a)
    assert invariant_factors(a) == sympy_factors(a)


def brute_member(x, gens, bound=3):
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(gens)):
        total = Element()
        for k, g in zip(coeffs, gens):
            total = total + g * k
        if total == x:
            return True
    return False


elements = st.dictionaries(st.sampled_from([A, B, C]), st.integers(-3, 3), max_size=3).map(Element)


@settings(max_examples=150, deadline=None)
@given(st.lists(elements, min_size=1, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_membership_of_combinations(gens, coeffs):
    x = Element()
    for k, g in zip(coeffs, gens):
        x = x + g * k
    m = membership(x, gens)
    assert m
    rebuilt = Element()
    for k, g in zip(m.witness, gens):
        rebuilt = rebuilt + g * k
    assert rebuilt == x


def test_membership_negative_and_torsion():
    two_a = Element({A: 2})
    assert not membership(Element.of(A), [two_a])
    assert membership(Element.of(A), [two_a], RATIONALS)
    assert not membership(Element.of(A), [two_a], integers_mod(2))
    assert membership(Element.of(A), [Element({A: 3})], integers_mod(2))
    assert not membership(Element.of(C), [Element({A: 1, B: -1})])


def test_cokernel_z2():
    rels = [Element({A: 1, B: -1}), Element({B: 2})]
    p = cokernel_presentation(rels, [A, B])
    assert p.torsion == (2,) and p.free_rank == 0
    assert p.describe() == "Z/2"
    assert not p.is_zero(Element.of(A))
    assert p.is_zero(Element({A: 2}))
    assert cokernel_presentation(rels, [A, B], RATIONALS).is_trivial
    assert cokernel_presentation(rels, [A, B], integers_mod(2)).rank == 1


def test_cokernel_free_part():
    p = cokernel_presentation([Element({A: 1, B: -1})], [A, B, C])
    assert p.free_rank == 2 and p.torsion == ()


def test_ring_parsing():
    assert CoefficientRing.parse("Z") == INTEGERS
    assert CoefficientRing.parse("Z2") == integers_mod(2)
    assert CoefficientRing.parse("Z/3") == integers_mod(3)
    assert CoefficientRing.parse("Q") == RATIONALS
    with pytest.raises(ValueError):
        integers_mod(4)


def test_element_arithmetic():
    x = Element({A: 1, B: -2})
    assert x - x == 0
    assert (x + x) == x * 2
    assert -x == Element({A: -1, B: 2})
    assert str(Element({A: 1, B: -2})) == "[A] - 2[B]"
    with pytest.raises(ValueError):
        Element.of(C).vector([A, B])


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_cokernel_order_matches_oracle(a):
    basis = [ManifoldClass.of(f"X{j}") for j in range(len(a[0]))]
    rels = [Element.from_vector(row, basis) for row in a]
    p = cokernel_presentation(rels, basis)
    factors = sympy_factors(a)
    assert p.torsion == tuple(d for d in factors if d > 1)
    assert p.free_rank == len(basis) - len(factors)


def test_span_witness_is_checked():
    span = Span([Element({A: 2}), Element({A: 3})], INTEGERS, [A])
    m = span.contains(Element.of(A))
    assert m and 2 * m.witness[0] + 3 * m.witness[1] == 1


def test_random_snf_sweep():
    rng = random.Random(7)
    for _ in range(100):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        a = [[rng.randint(-3, 3) for _ in range(c)] for _ in range(r)]
        assert check_snf(a) == sympy_factors(a)
