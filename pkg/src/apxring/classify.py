"""Desk-scale classification checks for approximate subrings.

Built around the core set 4X + X·4X: the no-zero-divisor dichotomy
(either X is small or the core is a subring K^11-commensurable with X),
the positive-characteristic search for a commensurable subring inside
the core, the finite locally-compact-model checks (quotient of ⟨X⟩ by an
ideal sitting inside some X_m), and a gallery of named example sets.

Rings are non-unital throughout: a subring is a nonempty set closed
under addition, negation and multiplication — 0-membership follows, it
is not an axiom.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cover import (
    CommensurabilityResult,
    approx_constant,
    commensurability,
    cover_exact,
)
from .errors import (
    InfiniteRingError,
    InvalidParamsError,
    NotAnIdealError,
    NotSymmetricError,
    ZeroDivisorError,
)
from .rings import (
    GaloisField,
    IntegerRing,
    LazyPolyRing,
    ModularRing,
    check_same_ring,
    poly_quotient,
    quotient_ring,
    subring_table,
)
from .sets import (
    FiniteSet,
    closure,
    difference_set,
    growth_step,
    intersect,
    is_symmetric,
    iterated_sum,
    prodset,
    sumset,
)


def core_set(x, cap=None):
    """4X + X·(4X), with 4X the four-fold sumset."""
    kwargs = {} if cap is None else {"cap": cap}
    four = iterated_sum(x, 4, **kwargs) if len(x) else x
    if len(x) == 0:
        return x
    return sumset(four, prodset(x, four, **kwargs), **kwargs)


def core_set_bruteforce(x):
    """Independent expression order: elementwise quadruple enumeration.

    Only meant for cross-checks on small sets (|X|^5 pairs of loops).
    """
    ring = x.ring
    elems = list(x.elements())
    four = set()
    for a in elems:
        for b in elems:
            ab = ring.add(a, b)
            for c in elems:
                abc = ring.add(ab, c)
                for d in elems:
                    four.add(ring.add(abc, d))
    out = set()
    for s in four:
        for e in elems:
            es = ring.mul(e, s)
            for f in four:
                out.add(ring.add(f, es))
    return FiniteSet(ring, out)


def is_subring(s):
    """(True, None) or (False, violating pair).

    Nonempty, s = -s, s+s ⊆ s, s·s ⊆ s; these force 0 ∈ s.
    """
    if len(s) == 0:
        return False, ("empty",)
    ring = s.ring
    elems = sorted(s.elements(), key=ring.sort_key)
    for a in elems:
        for b in elems:
            if ring.add(a, b) not in s:
                return False, ("add", a, b)
            if ring.mul(a, b) not in s:
                return False, ("mul", a, b)
    for a in elems:
        if ring.neg(a) not in s:
            return False, ("neg", a)
    return True, None


_ZD_EXHAUSTIVE = 2 ** 12
_ZD_SAMPLES = 10 ** 5


def find_zero_divisor(ring, rng=None):
    """(pair or None, method).  Exhaustive on small finite rings,
    sampled above 2^12 elements, known-domain shortcut on lazy rings."""
    if not ring.is_finite:
        if isinstance(ring, (IntegerRing, LazyPolyRing)):
            return None, "known-domain"
        raise InfiniteRingError(
            f"no zero-divisor oracle for {ring.descriptor}")
    zero = ring.zero()
    if ring.cardinality <= _ZD_EXHAUSTIVE:
        for a in ring.elements():
            if a == zero:
                continue
            for b in ring.elements():
                if b != zero and ring.mul(a, b) == zero:
                    return (a, b), "exhaustive"
        return None, "exhaustive"
    rng = rng or random.Random(0)
    n = ring.cardinality
    for _ in range(_ZD_SAMPLES):
        a = ring.element_at(rng.randrange(1, n))
        b = ring.element_at(rng.randrange(1, n))
        if ring.mul(a, b) == zero:
            return (a, b), "sampled"
    return None, "sampled"


def _core_witnessed_zero_divisor(core):
    """Weakened hypothesis: a zero divisor inside Y = core witnessed by
    an element of 2(Y·Y + (Y+Y))."""
    ring = core.ring
    if len(core) == 0:
        return None
    body = sumset(prodset(core, core), sumset(core, core))
    window = iterated_sum(body, 2)
    zero = ring.zero()
    for c in sorted(window.elements(), key=ring.sort_key):
        if c == zero:
            continue
        for y in core:
            if y == zero:
                continue
            if ring.mul(c, y) == zero or ring.mul(y, c) == zero:
                return (c, y)
    return None


@dataclass(frozen=True)
class ClassificationReport:
    x: FiniteSet
    k: int
    certificate: object
    core: FiniteSet
    core_is_subring: bool
    violation: tuple | None
    commensurability_to_x: int | None
    k11_bound: int
    verdict: str                     # "small" | "structured" | "counterexample-candidate"
    small_threshold: int
    hypothesis: str                  # how no-zero-divisors was established
    comm_result: CommensurabilityResult | None = field(default=None, compare=False)

    def to_json(self):
        ring = self.x.ring
        out = {
            "schema_version": "1",
            "kind": "classification_report",
            "ring": ring.descriptor,
            "x": [ring.render(v) for v in self.x],
            "k": self.k,
            "core_size": len(self.core),
            "core_is_subring": self.core_is_subring,
            "commensurability_to_x": self.commensurability_to_x,
            "k11_bound": self.k11_bound,
            "verdict": self.verdict,
            "small_threshold": self.small_threshold,
            "hypothesis": self.hypothesis,
            "certificate": self.certificate.to_json(),
        }
        if self.comm_result is not None:
            out["comm_core_by_x"] = self.comm_result.witness_ab.to_json()
            out["comm_x_by_core"] = self.comm_result.witness_ba.to_json()
        return out


def nzd_classify(x, small_threshold=None, exact=True, hypothesis="ambient"):
    """Dichotomy check over a ring without zero divisors.

    Certifies K, computes the core 4X + X·4X, tests it for being a
    subring and measures its exact commensurability with X.  Verdicts:
    "small" when |X| < small_threshold (default 4K^2, the dichotomy's
    escape hatch), else "structured" when the core is a subring within
    the K^11 bound, else "counterexample-candidate".

    ``hypothesis`` is "ambient" (whole-ring zero-divisor check) or
    "core-witnessed" (the weakened form local to Y = 4X + X·4X).
    """
    ring = x.ring
    if not is_symmetric(x):
        raise NotSymmetricError("classification needs a symmetric set")
    core = core_set(x)
    if hypothesis == "ambient":
        pair, method = find_zero_divisor(ring)
        if pair is not None:
            raise ZeroDivisorError(
                f"zero divisors {ring.render(pair[0])}·{ring.render(pair[1])} = 0",
                pair=pair)
        hyp = f"ambient/{method}"
    elif hypothesis == "core-witnessed":
        pair = _core_witnessed_zero_divisor(core)
        if pair is not None:
            raise ZeroDivisorError(
                "zero divisor inside the core window", pair=pair)
        hyp = "core-witnessed"
    else:
        raise ValueError(f"unknown hypothesis {hypothesis!r}")

    cert = approx_constant(x, "ring", exact=exact)
    k = cert.k
    k11 = k ** 11
    if small_threshold is None:
        small_threshold = 4 * k * k
    subring_ok, violation = is_subring(core)
    comm = None
    comm_constant = None
    if len(x) and len(core):
        comm = commensurability(core, x, exact=exact)
        comm_constant = comm.constant
    if len(x) < small_threshold:
        verdict = "small"
    elif subring_ok and comm_constant is not None and comm_constant <= k11:
        verdict = "structured"
    else:
        verdict = "counterexample-candidate"
    return ClassificationReport(x, k, cert, core, subring_ok, violation,
                                comm_constant, k11, verdict, small_threshold,
                                hyp, comm)


# ---------------------------------------------------------------------------
# positive characteristic: subring search inside the core


@dataclass(frozen=True)
class SubringSearchResult:
    found: FiniteSet | None
    containment_ok: bool
    commensurability: int | None
    strategy_used: str
    exhaustive: bool
    comm_result: CommensurabilityResult | None = field(default=None, compare=False)
    core: FiniteSet | None = field(default=None, compare=False)

    def to_json(self):
        out = {
            "schema_version": "1",
            "kind": "subring_search",
            "strategy": self.strategy_used,
            "exhaustive": self.exhaustive,
            "containment_ok": self.containment_ok,
            "commensurability": self.commensurability,
        }
        if self.found is not None:
            ring = self.found.ring
            out["ring"] = ring.descriptor
            out["subring"] = [ring.render(v) for v in self.found]
            out["core_size"] = len(self.core) if self.core is not None else None
            if self.comm_result is not None:
                out["comm_s_by_x"] = self.comm_result.witness_ab.to_json()
                out["comm_x_by_s"] = self.comm_result.witness_ba.to_json()
        return out


def _additive_subgroups_within(ring, box):
    """All additive subgroups of the ring contained in ``box``.

    Closure-extension BFS from {0}; only useful below ~32 elements.
    """
    zero = ring.zero()
    box_set = set(box.elements())
    if zero not in box_set:
        return []
    seed = frozenset((zero,))
    seen = {seed}
    queue = [seed]
    out = [seed]
    while queue:
        h = queue.pop()
        for g in box_set - h:
            grown = set(h)
            frontier = {g}
            ok = True
            while frontier:
                e = frontier.pop()
                if e not in box_set:
                    ok = False
                    break
                grown.add(e)
                cand = {ring.neg(e)}
                cand.update(ring.add(e, b) for b in grown)
                frontier |= {c for c in cand if c not in grown}
            if not ok:
                continue
            key = frozenset(grown)
            if key not in seen:
                seen.add(key)
                queue.append(key)
                out.append(key)
    return out


POS_CHAR_EXHAUSTIVE_LIMIT = 32


def pos_char_search(x, strategies=("generated", "seeded", "exhaustive"),
                    exhaustive_limit=POS_CHAR_EXHAUSTIVE_LIMIT, exact=True):
    """Search for a subring S ⊆ 4X + X·4X minimizing commensurability
    with X.  Strategies, in order:

      generated   S = ⟨X⟩ when it stays inside the core
      seeded      S = ⟨X ∩ D⟩ for D among {kX : k <= 4} ∩ core
      exhaustive  every multiplication-closed additive subgroup inside
                  the core (cores up to ``exhaustive_limit`` elements)

    Returns the best candidate (smallest constant, then smallest set),
    tagged with the winning strategy and whether the exhaustive pass ran.
    """
    ring = x.ring
    if not ring.is_finite:
        raise InfiniteRingError("subring search needs a finite ring")
    if ring.characteristic <= 0:
        raise InvalidParamsError("ring must have positive characteristic")
    if not is_symmetric(x):
        raise NotSymmetricError("subring search needs a symmetric set")
    if len(x) == 0:
        raise InvalidParamsError("subring search needs a nonempty set")
    core = core_set(x)
    core_elems = core.elements()
    candidates = []

    def offer(elems, rank, tag):
        fs = FiniteSet(ring, elems)
        if len(fs) and fs.elements() <= core_elems:
            ok, _ = is_subring(fs)
            if ok and all(fs != c for c, _r, _tag in candidates):
                candidates.append((fs, rank, tag))

    if "generated" in strategies:
        gen = closure(x, budget=ring.cardinality).set
        offer(gen.elements(), 0, "generated")
    if "seeded" in strategies:
        for k in range(1, 5):
            d = intersect(iterated_sum(x, k), core)
            seed = intersect(x, d)
            if len(seed):
                offer(closure(seed, budget=ring.cardinality).set.elements(),
                      1, f"seeded:{k}X")
    ran_exhaustive = False
    if "exhaustive" in strategies and len(core) <= exhaustive_limit:
        ran_exhaustive = True
        for sub in _additive_subgroups_within(ring, core):
            offer(sub, 2, "exhaustive")

    if not candidates:
        return SubringSearchResult(None, False, None, "none", ran_exhaustive,
                                   core=core)
    # ties on the constant resolve by strategy order, then smaller S
    best = None
    for fs, rank, tag in candidates:
        comm = commensurability(fs, x, exact=exact)
        key = (comm.constant, rank, len(fs),
               tuple(ring.sort_key(e) for e in fs))
        if best is None or key < best[0]:
            best = (key, fs, tag, comm)
    _, fs, tag, comm = best
    return SubringSearchResult(fs, True, comm.constant, tag, ran_exhaustive,
                               comm, core)


# ---------------------------------------------------------------------------
# finite locally compact model checks


@dataclass(frozen=True)
class ModelCheckReport:
    x: FiniteSet
    ideal: FiniteSet
    m: int                           # least m with ideal ⊆ X_m
    quotient_size: int
    clause_zero_neighborhood: bool   # some U ∋ 0 with preimage ⊆ X_m
    neighborhood_size: int
    clause_generic: bool             # preimages of all tested U generic
    max_genericity: int
    subsets_tested: int
    subsets_exhaustive: bool
    clause_commensurable: bool
    comm_constants: tuple            # (cover of preimage by x, cover of x by preimage)

    @property
    def all_pass(self):
        return (self.clause_zero_neighborhood and self.clause_generic
                and self.clause_commensurable)

    def to_json(self):
        ring = self.x.ring
        return {
            "schema_version": "1",
            "kind": "model_check",
            "ring": ring.descriptor,
            "x": [ring.render(v) for v in self.x],
            "ideal": [ring.render(v) for v in self.ideal],
            "m": self.m,
            "quotient_size": self.quotient_size,
            "clauses": {
                "zero_neighborhood": self.clause_zero_neighborhood,
                "generic": self.clause_generic,
                "commensurable": self.clause_commensurable,
            },
            "neighborhood_size": self.neighborhood_size,
            "max_genericity": self.max_genericity,
            "subsets_tested": self.subsets_tested,
            "subsets_exhaustive": self.subsets_exhaustive,
            "comm_constants": list(self.comm_constants),
        }


_SUBSET_ENUM_LIMIT = 4096
_MODEL_DEPTH_CAP = 6


def finite_model_check(x, ideal, depth_cap=_MODEL_DEPTH_CAP,
                       subset_limit=_SUBSET_ENUM_LIMIT, seed=0):
    """Quotient-map checks of ⟨X⟩ / I at finite scale.

    I must be a two-sided ideal of ⟨X⟩ contained in some X_m (the least
    such m is found up to ``depth_cap``).  With f the projection:

      (i)   U := {a + I : a + I ⊆ X_m} contains 0 and f⁻¹[U] ⊆ X_m
      (ii)  f⁻¹[U] is generic relative to X for every tested U ∋ 0
            (all 0-containing subsets when there are at most
            ``subset_limit`` of them, a seeded sample plus {0} and the
            full quotient otherwise); the max exact constant is reported
      (iii) f⁻¹[π[X_m]] is additively commensurable with X
    """
    ring = x.ring
    if not ring.is_finite:
        raise InfiniteRingError("model checks need a finite ring")
    if len(x) == 0:
        raise InvalidParamsError("x must be nonempty")
    check_same_ring(ring, ideal.ring)
    gen = closure(x, budget=ring.cardinality).set
    if not ideal.elements() <= gen.elements():
        raise NotAnIdealError("ideal is not inside the subring generated by x",
                              witness=None)
    # two-sided ideal of <x>
    for a in ideal:
        if ring.neg(a) not in ideal:
            raise NotAnIdealError("ideal not closed under negation", (a,))
        for b in ideal:
            if ring.add(a, b) not in ideal:
                raise NotAnIdealError("ideal not closed under addition", (a, b))
        for r in gen:
            if ring.mul(r, a) not in ideal or ring.mul(a, r) not in ideal:
                raise NotAnIdealError("ideal not absorbing in the subring", (r, a))

    xm = x
    m = 0
    while not ideal.elements() <= xm.elements():
        if m >= depth_cap:
            raise InvalidParamsError(
                f"ideal not inside any X_m for m <= {depth_cap}")
        xm = growth_step(xm)
        m += 1

    handle, embed, restrict = subring_table(ring, gen.elements())
    quotient, project = quotient_ring(
        handle, [restrict(e) for e in ideal.elements()])

    def proj(e):
        return project(restrict(e))

    fibers = {}
    for e in gen:
        fibers.setdefault(proj(e), set()).add(e)
    q = quotient.cardinality

    # clause (i): cosets entirely inside X_m form a 0-neighborhood
    xm_elems = xm.elements()
    u_zero = {c for c, fiber in fibers.items() if fiber <= xm_elems}
    clause1 = quotient.zero() in u_zero
    preimage_u = set()
    for c in u_zero:
        preimage_u |= fibers[c]
    clause1 = clause1 and preimage_u <= xm_elems

    # clause (ii): genericity of preimages of 0-neighborhoods
    others = [c for c in range(q) if c != quotient.zero()]
    n_subsets = 2 ** len(others)
    exhaustive = n_subsets <= subset_limit
    if exhaustive:
        subsets = (frozenset({quotient.zero()}) | frozenset(
            c for i, c in enumerate(others) if mask >> i & 1)
            for mask in range(n_subsets))
        n_tested = n_subsets
    else:
        rng = random.Random(seed)
        picks = {frozenset({quotient.zero()}),
                 frozenset(range(q))}
        while len(picks) < subset_limit:
            picks.add(frozenset({quotient.zero()}) | frozenset(
                c for c in others if rng.random() < 0.5))
        subsets = picks
        n_tested = len(picks)
    max_constant = 0
    clause2 = True
    for u in subsets:
        pre = set()
        for c in u:
            pre |= fibers[c]
        pre_set = FiniteSet(ring, pre)
        w = cover_exact(x, pre_set, difference_set(x, pre_set))
        if not w.optimal:
            clause2 = False
            break
        max_constant = max(max_constant, len(w.translates))

    # clause (iii): preimage of the compact neighborhood π[X_m]
    u_image = {proj(e) for e in xm if e in gen.elements()}
    pre_img = set()
    for c in u_image:
        pre_img |= fibers[c]
    y = FiniteSet(ring, pre_img)
    comm = commensurability(y, x, exact=True)
    clause3 = comm.witness_ab.optimal and comm.witness_ba.optimal

    return ModelCheckReport(x, ideal, m, q, clause1, len(u_zero), clause2,
                            max_constant, n_tested, exhaustive, clause3,
                            (comm.k_ab, comm.k_ba))


# ---------------------------------------------------------------------------
# gallery


@dataclass(frozen=True)
class GalleryItem:
    name: str
    params: dict
    ring: object
    xset: FiniteSet
    expected: str

    def to_json(self):
        return {
            "schema_version": "1",
            "kind": "gallery_item",
            "name": self.name,
            "params": dict(self.params),
            "ring": self.ring.descriptor,
            "x": [self.ring.render(v) for v in self.xset],
            "expected": self.expected,
        }


def gallery(name, **params):
    """Named example sets with their expected-property tags.

    y-set(p):        (t + F_p) ∪ {0} ∪ (−t + F_p) inside F_{p^2}; its
                     exact ring-mode constant grows strictly with p.
    linear-polys(p): all degree-<=1 polynomials in F_p[t]; approximate
                     subring with no commensurable overring containing it.
    linear-quo(p,d): degree-<=1 elements of F_p[t]/(t^d).
    interval(n):     {-N..N} in the integers.
    interval-mod(p,n): the image of {-N..N} mod p.
    """
    if name == "y-set":
        p = params.get("p")
        if not isinstance(p, int) or p < 3 or not _prime(p):
            raise InvalidParamsError("y-set needs an odd prime p >= 3")
        ring = GaloisField(p, 2)
        t = (0, 1)  # the class of t: outside the prime subfield by degree
        elems = {ring.zero()}
        for c in range(p):
            const = (c,) if c else ()
            elems.add(ring.add(t, const))
            elems.add(ring.add(ring.neg(t), const))
        return GalleryItem(name, {"p": p}, ring, FiniteSet(ring, elems),
                           "exact ring-mode constant strictly increasing in p")
    if name == "linear-polys":
        p = params.get("p")
        if not isinstance(p, int) or not _prime(p):
            raise InvalidParamsError("linear-polys needs a prime p")
        ring = LazyPolyRing(p)
        elems = {_trim((a, b)) for a in range(p) for b in range(p)}
        return GalleryItem(name, {"p": p}, ring, FiniteSet(ring, elems),
                           "no additively commensurable subring contains it")
    if name == "linear-quo":
        p, d = params.get("p"), params.get("d")
        if not isinstance(p, int) or not _prime(p) or not isinstance(d, int) or d < 2:
            raise InvalidParamsError("linear-quo needs a prime p and degree d >= 2")
        ring = poly_quotient(p, (0,) * d + (1,))
        elems = {_trim((a, b)) for a in range(p) for b in range(p)}
        return GalleryItem(name, {"p": p, "d": d}, ring, FiniteSet(ring, elems),
                           "commensurable with a subring inside the core")
    if name == "interval":
        n = params.get("n")
        if not isinstance(n, int) or n < 1:
            raise InvalidParamsError("interval needs N >= 1")
        ring = IntegerRing()
        return GalleryItem(name, {"n": n}, ring,
                           FiniteSet(ring, range(-n, n + 1)),
                           "compact-neighborhood analogue; K nondecreasing in N")
    if name == "interval-mod":
        p, n = params.get("p"), params.get("n")
        if not isinstance(p, int) or p < 2 or not isinstance(n, int) or n < 1:
            raise InvalidParamsError("interval-mod needs p >= 2 and N >= 1")
        ring = ModularRing(p)
        return GalleryItem(name, {"p": p, "n": n}, ring,
                           FiniteSet(ring, {v % p for v in range(-n, n + 1)}),
                           "image of an integer window")
    raise InvalidParamsError(f"unknown gallery item {name!r}")


def _prime(n):
    from .rings import _is_prime
    return _is_prime(n)


def _trim(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


GALLERY_NAMES = ("y-set", "linear-polys", "linear-quo", "interval",
                 "interval-mod")
