"""Set arithmetic: sumsets, growth, closure, ideals, representations."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import apxring as ax
from apxring.errors import BudgetExceededError, CrossRingError
from apxring.sets import (
    FiniteSet,
    _sumset_dense,
    _sumset_sparse,
    intersect,
    is_symmetric,
    union,
)

Z = ax.integers()


def iset(lo, hi):
    return FiniteSet(Z, range(lo, hi + 1))


def test_sumset_examples():
    zero = FiniteSet(Z, [0])
    assert ax.sumset(zero, zero) == zero
    m7 = ax.modular(7)
    a = ax.parse_set(m7, "{1,6}")
    assert ax.sumset(a, a) == ax.parse_set(m7, "{2,0,5}")
    assert ax.sumset(iset(-1, 1), iset(-1, 1)) == iset(-2, 2)


def test_prodset_examples():
    a = iset(-3, 3)
    got = ax.prodset(a, a)
    # oracle: exhaustive 49-pair enumeration
    expect = {x * y for x in range(-3, 4) for y in range(-3, 4)}
    assert got.elements() == frozenset(expect)
    assert sorted(expect) == [-9, -6, -4, -3, -2, -1, 0, 1, 2, 3, 4, 6, 9]

    zero = FiniteSet(Z, [0])
    assert ax.prodset(zero, a) == zero
    m5 = ax.modular(5)
    signs = ax.parse_set(m5, "{1,4}")
    assert ax.prodset(signs, signs) == signs


def test_negate_symmetrize_translate():
    m5 = ax.modular(5)
    assert ax.negate(ax.parse_set(m5, "{1,2}")) == ax.parse_set(m5, "{4,3}")
    s = ax.symmetrize(FiniteSet(Z, [1]))
    assert s == FiniteSet(Z, [1, -1])          # no forced 0
    assert ax.translate(3, ax.parse_set(m5, "{0,1}")) == ax.parse_set(m5, "{3,4}")
    assert ax.translate(3, ax.parse_set(m5, "{0,1}")) == ax.sumset(
        ax.parse_set(m5, "{3}"), ax.parse_set(m5, "{0,1}"))


def test_growth_step_examples():
    m2 = ax.modular(2)
    s = ax.parse_set(m2, "{0,1}")
    assert ax.growth_step(s) == s
    x = iset(-1, 1)
    got = ax.growth_step(x)
    # oracle: all 81 quadruples xy + u + v
    expect = {a * b + u + v
              for a in (-1, 0, 1) for b in (-1, 0, 1)
              for u in (-1, 0, 1) for v in (-1, 0, 1)}
    assert got.elements() == frozenset(expect) == frozenset(range(-3, 4))


def test_growth_sequence_sizes():
    prof = ax.growth_sequence(iset(-1, 1), 2)
    assert [e.size for e in prof.entries] == [3, 7, 31]
    # oracle for X_2 from X_1 by enumeration
    x1 = sorted(prof.entries[1].xset.elements())
    expect = {a * b + u + v for a in x1 for b in x1 for u in x1 for v in x1}
    assert prof.entries[2].xset.elements() == frozenset(expect)
    assert frozenset(expect) == frozenset(range(-15, 16))


def test_growth_sequence_subring_constant():
    m8 = ax.modular(8)
    s = ax.parse_set(m8, "{0,2,4,6}")
    prof = ax.growth_sequence(s, 3, with_covering=True)
    for e in prof.entries:
        assert e.xset == s
        assert e.covering == 1


def test_growth_sequence_empty():
    prof = ax.growth_sequence(FiniteSet(Z, []), 3)
    assert all(e.size == 0 for e in prof.entries)


def test_growth_monotone_with_zero():
    rng = random.Random(3)
    for _ in range(20):
        p = rng.choice((7, 11, 13))
        ring = ax.modular(p)
        elems = {0}
        for _ in range(rng.randrange(1, 3)):
            v = rng.randrange(1, p)
            elems |= {v, p - v}
        x = FiniteSet(ring, elems)
        assert is_symmetric(x) and ring.zero() in x
        assert x <= ax.growth_step(x)


def test_power_products():
    m2 = ax.modular(2)
    x = ax.parse_set(m2, "{0,1}")
    xm, upto = ax.power_products(x, 3)
    assert xm == x and upto == x
    two = FiniteSet(Z, [2])
    assert ax.power_products(two, 4)[0] == FiniteSet(Z, [16])
    m7 = ax.modular(7)
    signs = ax.parse_set(m7, "{1,6}")
    assert ax.power_products(signs, 2)[0] == ax.parse_set(m7, "{1,6}")


def test_iterated_sum_and_msum():
    assert ax.iterated_sum(FiniteSet(Z, [0]), 4) == FiniteSet(Z, [0])
    assert ax.iterated_sum(iset(-1, 1), 4) == iset(-4, 4)
    m2 = ax.modular(2)
    assert ax.msum(ax.parse_set(m2, "{0,1}"), 2) == ax.parse_set(m2, "{0,1}")
    # oracle: 2(X^{<=2}) for X = {-1,0,1} by enumeration
    x = (-1, 0, 1)
    upto = {a * b for a in x for b in x} | set(x)
    expect = {u + v for u in upto for v in upto}
    assert ax.msum(iset(-1, 1), 2).elements() == frozenset(expect)
    assert frozenset(expect) == frozenset(range(-2, 3))


def test_closure_examples():
    m6 = ax.modular(6)
    r = ax.closure(ax.parse_set(m6, "{1}"))
    assert r.complete and len(r.set) == 6
    m8 = ax.modular(8)
    r = ax.closure(ax.parse_set(m8, "{2}"))
    assert r.set == ax.parse_set(m8, "{0,2,4,6}")
    r = ax.closure(FiniteSet(Z, [1]), budget=100)
    assert not r.complete and r.partial is not None
    assert 1 in r.partial and -1 in r.partial


def test_closure_matches_brute_force_small():
    # smallest closed superset by exhaustive subset enumeration, |R| <= 16
    for ring, gens in ((ax.modular(8), (2,)), (ax.modular(12), (4, 6)),
                       (ax.modular(16), (4,)), (ax.modular(9), (3,))):
        got = ax.closure(FiniteSet(ring, gens)).set
        n = ring.cardinality
        best = None
        others = [e for e in ring.elements() if e not in gens]
        for mask in range(1 << len(others)):
            sub = set(gens) | {others[i] for i in range(len(others))
                               if mask >> i & 1}
            closed = all(ring.add(a, b) in sub and ring.mul(a, b) in sub
                         for a in sub for b in sub) and \
                all(ring.neg(a) in sub for a in sub)
            if closed and (best is None or len(sub) < len(best)):
                best = sub
        assert got.elements() == frozenset(best)


def test_ideal_generated_examples():
    m9 = ax.modular(9)
    r = ax.ideal_generated(m9, ax.parse_set(m9, "{3}"))
    assert r.set == ax.parse_set(m9, "{0,3,6}") and not r.heuristic
    r = ax.ideal_generated(m9, ax.parse_set(m9, "{0}"))
    assert r.set == ax.parse_set(m9, "{0}")
    m7 = ax.modular(7)
    r = ax.ideal_generated(m7, ax.parse_set(m7, "{2}"))
    assert len(r.set) == 7
    # lazy rings: budget-limited, flagged heuristic
    r = ax.ideal_generated(Z, FiniteSet(Z, [2]), budget=50)
    assert r.heuristic and not r.complete


def test_budget_exceeded_typed():
    with pytest.raises(BudgetExceededError) as exc:
        ax.sumset(iset(-300, 300), iset(-300, 300), cap=100)
    assert exc.value.partial is not None


def test_representation_tags():
    assert iset(-1, 1).rep == "sparse"
    assert ax.parse_set(ax.modular(7), "{1}").rep == "dense"


def test_dense_sparse_agree():
    rng = random.Random(11)
    rings = [ax.modular(n) for n in (6, 7, 12, 31)] + [
        ax.galois_field(3, 2, (1, 0, 1)), ax.matrix_ring("zmod:2", 2)]
    for trial in range(1000):
        ring = rings[trial % len(rings)]
        n = ring.cardinality
        a = FiniteSet(ring, {ring.element_at(rng.randrange(n))
                             for _ in range(rng.randrange(1, 6))})
        b = FiniteSet(ring, {ring.element_at(rng.randrange(n))
                             for _ in range(rng.randrange(1, 6))})
        dense = FiniteSet._from_mask(ring, _sumset_dense(a, b))
        sparse = FiniteSet(ring, _sumset_sparse(a, b))
        assert dense == sparse
        assert ax.sumset(a, b) == sparse


@settings(max_examples=200)
@given(st.sets(st.integers(-30, 30), min_size=1, max_size=8),
       st.sets(st.integers(-30, 30), min_size=1, max_size=8))
def test_sumset_commutative(xs, ys):
    a, b = FiniteSet(Z, xs), FiniteSet(Z, ys)
    assert ax.sumset(a, b) == ax.sumset(b, a)
    assert ax.prodset(a, b) == ax.prodset(b, a)


@settings(max_examples=100)
@given(st.sets(st.integers(-20, 20), min_size=1, max_size=6),
       st.sets(st.integers(-20, 20), min_size=1, max_size=6),
       st.sets(st.integers(-20, 20), min_size=1, max_size=6))
def test_sumset_associative(xs, ys, zs):
    a, b, c = FiniteSet(Z, xs), FiniteSet(Z, ys), FiniteSet(Z, zs)
    assert ax.sumset(ax.sumset(a, b), c) == ax.sumset(a, ax.sumset(b, c))


def test_set_literal_and_file(tmp_path):
    m7 = ax.modular(7)
    assert ax.parse_set(m7, "{}") == FiniteSet(m7, [])
    path = tmp_path / "set.txt"
    path.write_text("# window\n1\n6\n0\n")
    from apxring.sets import load_set_file
    assert load_set_file(m7, str(path)) == ax.parse_set(m7, "{0,1,6}")
    g = ax.galois_field(3, 2, (1, 0, 1))
    s = ax.parse_set(g, "{t, 2t+1, 0}")
    assert len(s) == 3
    assert s.to_json()["ring"] == "gf:3^2:t^2+1"


def test_union_intersect_cross_ring():
    a = ax.parse_set(ax.modular(5), "{1}")
    b = ax.parse_set(ax.modular(7), "{1}")
    with pytest.raises(CrossRingError):
        union(a, b)
    with pytest.raises(CrossRingError):
        intersect(a, b)
