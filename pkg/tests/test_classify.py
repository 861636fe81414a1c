"""Classification checks: core set, dichotomy, subring search, model checks."""

import pytest

import apxring as ax
from apxring.classify import core_set_bruteforce, find_zero_divisor
from apxring.errors import (
    InvalidParamsError,
    NotAnIdealError,
    ZeroDivisorError,
)
from apxring.sets import FiniteSet

Z = ax.integers()


def test_core_set_examples():
    m8 = ax.modular(8)
    s = ax.parse_set(m8, "{0,2,4,6}")
    assert ax.core_set(s) == s
    assert ax.core_set(FiniteSet(Z, [0])) == FiniteSet(Z, [0])
    m7 = ax.modular(7)
    x = ax.parse_set(m7, "{0,1,6}")
    core = ax.core_set(x)
    assert len(core) == 7                     # whole field, by enumeration
    assert core == core_set_bruteforce(x)


def test_core_set_two_orders_agree():
    import random
    rng = random.Random(2)
    for _ in range(15):
        p = rng.choice((5, 7, 11))
        ring = ax.modular(p)
        elems = {0}
        for _ in range(rng.randrange(1, 3)):
            v = rng.randrange(1, p)
            elems |= {v, p - v}
        x = FiniteSet(ring, elems)
        if len(x) > 12:
            continue
        assert ax.core_set(x) == core_set_bruteforce(x)
    x = FiniteSet(Z, (-1, 0, 1))
    assert ax.core_set(x) == core_set_bruteforce(x) == FiniteSet(Z, range(-8, 9))


def test_is_subring_examples():
    assert ax.is_subring(FiniteSet(Z, [0])) == (True, None)
    m8 = ax.modular(8)
    assert ax.is_subring(ax.parse_set(m8, "{0,2,4,6}")) == (True, None)
    ok, pair = ax.is_subring(FiniteSet(Z, [0, 1]))
    assert not ok and pair == ("add", 1, 1)
    ok, pair = ax.is_subring(FiniteSet(Z, []))
    assert not ok


def test_zero_divisor_oracle():
    assert find_zero_divisor(ax.modular(7))[0] is None
    pair, method = find_zero_divisor(ax.modular(6))
    assert pair is not None and method == "exhaustive"
    assert find_zero_divisor(ax.integers()) == (None, "known-domain")


def test_nzd_classify_whole_field():
    g = ax.galois_field(3, 2, (1, 0, 1))
    x = FiniteSet(g, g.elements())
    rep = ax.nzd_classify(x)
    assert rep.verdict == "structured"
    assert rep.core == x and rep.commensurability_to_x == 1
    assert rep.k == 1


def test_nzd_classify_zero_set_small():
    rep = ax.nzd_classify(FiniteSet(Z, [0]))
    assert rep.verdict == "small"


def test_nzd_classify_window_structured():
    m7 = ax.modular(7)
    rep = ax.nzd_classify(ax.parse_set(m7, "{0,1,6}"), small_threshold=0)
    assert rep.k == 2
    assert len(rep.core) == 7 and rep.core_is_subring
    assert rep.commensurability_to_x <= 3 <= 2 ** 11
    assert rep.verdict == "structured"


def test_nzd_classify_rejects_zero_divisors():
    m6 = ax.modular(6)
    with pytest.raises(ZeroDivisorError):
        ax.nzd_classify(ax.parse_set(m6, "{0,1,5}"))


def test_nzd_weakened_hypothesis():
    # Z/6 has zero divisors, but the core of {0,2,4} is a copy of Z/3:
    # the weakened (core-local) check passes where the ambient one fails
    m6 = ax.modular(6)
    x = ax.parse_set(m6, "{0,2,4}")
    with pytest.raises(ZeroDivisorError):
        ax.nzd_classify(x)
    rep = ax.nzd_classify(x, hypothesis="core-witnessed")
    assert rep.core_is_subring
    # Z/8 with X = {0,4}: 4*4 = 0 inside the core, witnessed locally
    m8 = ax.modular(8)
    with pytest.raises(ZeroDivisorError):
        ax.nzd_classify(ax.parse_set(m8, "{0,4}"),
                        hypothesis="core-witnessed")


def test_structured_verdict_bound_invariant():
    import random
    rng = random.Random(4)
    for _ in range(20):
        p = rng.choice((5, 7, 11, 13))
        ring = ax.modular(p)
        elems = {0}
        for _ in range(rng.randrange(1, 4)):
            v = rng.randrange(1, p)
            elems |= {v, p - v}
        rep = ax.nzd_classify(FiniteSet(ring, elems), small_threshold=1)
        if rep.verdict == "structured":
            assert rep.commensurability_to_x <= rep.k11_bound
        # prime fields: subring core means {0} or everything
        if rep.core_is_subring:
            assert len(rep.core) in (1, p)


def test_pos_char_search_examples():
    item = ax.gallery("linear-quo", p=3, d=3)
    res = ax.pos_char_search(item.xset)
    assert res.found is not None and len(res.found) == 27
    assert res.commensurability == 3
    assert res.strategy_used == "generated"

    m8 = ax.modular(8)
    s = ax.parse_set(m8, "{0,2,4,6}")
    res = ax.pos_char_search(s)
    assert res.found == s and res.commensurability == 1

    m9 = ax.modular(9)
    sub = ax.parse_set(m9, "{0,3,6}")
    res = ax.pos_char_search(sub)
    assert res.found == sub


def test_pos_char_search_exhaustive_flag():
    m5 = ax.modular(5)
    x = ax.parse_set(m5, "{0,1,4}")
    res = ax.pos_char_search(x)
    assert res.exhaustive                     # core is the 5-element field
    assert res.found is not None
    assert res.containment_ok


def test_finite_model_check_example():
    m9 = ax.modular(9)
    x = ax.parse_set(m9, "{0,1,8}")
    ideal = ax.parse_set(m9, "{0,3,6}")
    rep = ax.finite_model_check(x, ideal)
    assert rep.all_pass
    assert rep.m == 1 and rep.quotient_size == 3
    assert rep.max_genericity == 3
    assert rep.subsets_exhaustive
    assert rep.comm_constants == (3, 1)


def test_finite_model_check_trivial_ideal():
    m9 = ax.modular(9)
    x = ax.parse_set(m9, "{0,1,8}")
    rep = ax.finite_model_check(x, ax.parse_set(m9, "{0}"))
    assert rep.all_pass and rep.quotient_size == 9


def test_finite_model_check_full_ideal():
    m9 = ax.modular(9)
    x = ax.parse_set(m9, "{0,1,8}")
    whole = FiniteSet(m9, m9.elements())
    rep = ax.finite_model_check(x, whole)
    assert rep.all_pass and rep.quotient_size == 1


def test_finite_model_check_rejects_non_ideal():
    m9 = ax.modular(9)
    x = ax.parse_set(m9, "{0,1,8}")
    with pytest.raises(NotAnIdealError):
        ax.finite_model_check(x, ax.parse_set(m9, "{0,3}"))


def test_gallery_y_set():
    item = ax.gallery("y-set", p=3)
    assert len(item.xset) == 7
    ring = item.ring
    t = ring.parse("t")
    expected = {ring.zero()}
    for c in range(3):
        cc = ring.parse(str(c))
        expected.add(ring.add(t, cc))
        expected.add(ring.add(ring.neg(t), cc))
    assert item.xset.elements() == frozenset(expected)
    with pytest.raises(InvalidParamsError):
        ax.gallery("y-set", p=4)


def test_gallery_linear_polys():
    item = ax.gallery("linear-polys", p=2)
    ring = item.ring
    assert item.xset.elements() == frozenset(
        {(), (1,), (0, 1), (1, 1)})
    assert ring.descriptor == "poly:2"


def test_gallery_interval():
    item = ax.gallery("interval", n=1)
    assert item.xset == FiniteSet(Z, (-1, 0, 1))
    with pytest.raises(InvalidParamsError):
        ax.gallery("interval", n=0)
    with pytest.raises(InvalidParamsError):
        ax.gallery("no-such-item")


def test_y_set_constants_strictly_increase():
    ks = []
    for p in (3, 5):
        item = ax.gallery("y-set", p=p)
        cert = ax.approx_constant(item.xset, "ring", exact=True)
        assert cert.minimal
        ks.append(cert.k)
    assert ks == sorted(ks) and ks[0] < ks[1]
    assert ks[0] == 2                          # pinned oracle regression value
