"""Covering numbers by additive translates; approximation constants.

A cover witness certifies target ⊆ ∪_i (t_i + base) and is re-verified
element-wise on construction.  Two solvers are provided: a greedy cover
with the classical (1 + ln |target|) guarantee, and an exact
branch-and-bound (branch on the uncovered element with fewest covering
translates, bound by ceil(|uncovered| / |base|) and the greedy
incumbent).  Everything is deterministic: pools are processed in
canonical element order and ties always break toward the smaller
canonical encoding, so repeated runs reproduce witnesses bit for bit.

approx_constant certifies the minimal K with X*X ∪ (X+X) ⊆ F + X
(ring mode; group mode drops the product part).  The translate pool is
the difference set T − X: any f with (f + X) ∩ T nonempty lies in it,
and T − X sits inside the subring generated by X automatically, so the
restriction is exact rather than heuristic.  Each chosen translate
carries a formal derivation over X (used by the constructive covers and
by the membership verification on lazy rings).
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field

from .errors import NotSymmetricError, UncoverableError, VerificationFailedError
from .rings import check_same_ring
from .sets import (
    FiniteSet,
    closure,
    difference_set,
    is_symmetric,
    negate,
    prodset,
    sumset,
    translate,
    union,
)

DEFAULT_NODE_LIMIT = 10 ** 6


@dataclass(frozen=True)
class CoverWitness:
    """target ⊆ ∪ (t + base) for the listed translates."""

    target: FiniteSet
    base: FiniteSet
    translates: tuple
    optimal: bool
    method: str                      # "exact" | "greedy" | "constructive"
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def size(self):
        return len(self.translates)

    def to_json(self):
        ring = self.target.ring
        return {
            "schema_version": "1",
            "kind": "cover_witness",
            "ring": ring.descriptor,
            "target": [ring.render(x) for x in self.target],
            "base": [ring.render(x) for x in self.base],
            "translates": [ring.render(t) for t in self.translates],
            "optimal": self.optimal,
            "method": self.method,
            "stats": {k: v for k, v in self.stats.items()
                      if isinstance(v, (int, float, str, bool))},
        }


def verify_witness(w):
    """(ok, first uncovered element or None), checked from scratch."""
    ring = w.target.ring
    covered = set()
    for t in w.translates:
        covered |= translate(t, w.base).elements()
    for x in sorted(w.target.elements(), key=ring.sort_key):
        if x not in covered:
            return False, x
    return True, None


def make_witness(target, base, translates, optimal, method, stats=None):
    w = CoverWitness(target, base, tuple(translates), optimal, method,
                     dict(stats or {}))
    ok, missing = verify_witness(w)
    if not ok:
        raise VerificationFailedError(
            f"witness misses {target.ring.render(missing)}")
    return w


# ---------------------------------------------------------------------------
# solver core: targets become bit positions, translates become masks


def _instance(a, b, pool):
    ring = a.ring
    targets = sorted(a.elements(), key=ring.sort_key)
    pos = {x: i for i, x in enumerate(targets)}
    pool_sorted = sorted(pool.elements(), key=ring.sort_key)
    masks = []
    for t in pool_sorted:
        m = 0
        for x in b.elements():
            i = pos.get(ring.add(t, x))
            if i is not None:
                m |= 1 << i
        masks.append(m)
    full = (1 << len(targets)) - 1
    reach = 0
    for m in masks:
        reach |= m
    if reach != full:
        missing = full & ~reach
        idx = (missing & -missing).bit_length() - 1
        raise UncoverableError(
            f"{ring.render(targets[idx])} lies in no pool translate",
            element=targets[idx])
    return targets, pool_sorted, masks, full


def cover_greedy(a, b, pool):
    """Pick the translate covering most uncovered elements, ties toward
    the smaller canonical encoding.  Lazy-decrement heap: coverage counts
    only shrink as elements get covered, so stale entries are re-pushed.
    """
    if len(b) == 0:
        raise UncoverableError("base set is empty")
    check_same_ring(a.ring, b.ring, pool.ring)
    t0 = time.perf_counter()
    if len(a) == 0:
        return make_witness(a, b, (), False, "greedy",
                            {"elapsed": time.perf_counter() - t0})
    targets, pool_sorted, masks, full = _instance(a, b, pool)
    heap = [(-m.bit_count(), rank) for rank, m in enumerate(masks) if m]
    heapq.heapify(heap)
    covered = 0
    chosen = []
    while covered != full:
        while True:
            negcnt, rank = heapq.heappop(heap)
            fresh = (masks[rank] & ~covered).bit_count()
            if fresh == -negcnt:
                break
            if fresh:
                heapq.heappush(heap, (-fresh, rank))
        covered |= masks[rank]
        chosen.append(pool_sorted[rank])
    return make_witness(a, b, chosen, False, "greedy",
                        {"elapsed": time.perf_counter() - t0})


def _element_frequencies(masks, uncovered, n_targets):
    freq = [0] * n_targets
    for m in masks:
        live = m & uncovered
        while live:
            low = live & -live
            freq[low.bit_length() - 1] += 1
            live ^= low
    return freq


def cover_exact(a, b, pool, node_limit=DEFAULT_NODE_LIMIT, max_size=None):
    """Minimum-cardinality cover of a by pool translates of b.

    Returns an optimal witness, or the best incumbent flagged
    non-optimal when the node limit is hit.  ``max_size`` caps the
    search: if no cover of that size exists the result is the best
    (possibly larger) incumbent with stats["proved_above"] set.
    """
    if len(b) == 0:
        raise UncoverableError("base set is empty")
    check_same_ring(a.ring, b.ring, pool.ring)
    t0 = time.perf_counter()
    if len(a) == 0:
        return make_witness(a, b, (), True, "exact", {"nodes": 0})
    targets, pool_sorted, masks, full = _instance(a, b, pool)
    n_targets = len(targets)
    base_size = len(b)

    greedy_w = cover_greedy(a, b, pool)
    incumbent = [pool_sorted.index(t) for t in greedy_w.translates]
    best_size = len(incumbent)
    cutoff = best_size if max_size is None else min(best_size, max_size + 1)

    coverers = [[] for _ in range(n_targets)]
    for rank, m in enumerate(masks):
        live = m
        while live:
            low = live & -live
            coverers[low.bit_length() - 1].append(rank)
            live ^= low

    nodes = 0
    hit_limit = False
    best = list(incumbent)

    def dfs(covered, chosen):
        nonlocal nodes, best, cutoff, hit_limit
        nodes += 1
        if nodes > node_limit:
            hit_limit = True
            return
        if covered == full:
            if len(chosen) < cutoff:
                best[:] = chosen
                cutoff = len(chosen)
            return
        remaining = (full & ~covered).bit_count()
        bound = -(-remaining // base_size)
        if len(chosen) + bound >= cutoff:
            return
        # branch on the uncovered element with fewest live coverers
        pick, pick_opts = None, None
        live = full & ~covered
        while live:
            low = live & -live
            idx = low.bit_length() - 1
            opts = [r for r in coverers[idx] if masks[r] & ~covered]
            if pick_opts is None or len(opts) < len(pick_opts):
                pick, pick_opts = idx, opts
                if len(opts) <= 1:
                    break
            live ^= low
        if not pick_opts:
            return
        pick_opts.sort(key=lambda r: (-(masks[r] & ~covered).bit_count(), r))
        for r in pick_opts:
            if hit_limit or len(chosen) + 1 >= cutoff:
                break
            chosen.append(r)
            dfs(covered | masks[r], chosen)
            chosen.pop()

    dfs(0, [])
    proved_above = max_size is not None and not hit_limit and len(best) > max_size
    optimal = not hit_limit and (max_size is None or len(best) <= max_size)
    chosen_elems = sorted((pool_sorted[r] for r in best), key=a.ring.sort_key)
    stats = {"nodes": nodes, "elapsed": time.perf_counter() - t0,
             "node_limit_hit": hit_limit}
    if proved_above:
        stats["proved_above"] = max_size
    return make_witness(a, b, chosen_elems, optimal, "exact", stats)


def cover_brute_force(a, b, pool):
    """Independent oracle: complete DFS in increasing cover size.

    At each step only the translates containing the least-index
    uncovered element are branched on — every cover of the given size
    contains one of them, so each depth level is exhaustive.  No greedy
    ordering, no lower bounds, no incumbents.
    """
    if len(a) == 0:
        return 0, ()
    targets, pool_sorted, masks, full = _instance(a, b, pool)
    coverers = [[] for _ in targets]
    for rank, m in enumerate(masks):
        live = m
        while live:
            low = live & -live
            coverers[low.bit_length() - 1].append(rank)
            live ^= low

    def search(covered, depth, chosen):
        if covered == full:
            return tuple(chosen)
        if depth == 0:
            return None
        low = (full & ~covered)
        idx = (low & -low).bit_length() - 1
        for r in coverers[idx]:
            chosen.append(r)
            got = search(covered | masks[r], depth - 1, chosen)
            if got is not None:
                return got
            chosen.pop()
        return None

    k = 1
    while True:
        got = search(0, k, [])
        if got is not None:
            return k, tuple(pool_sorted[r] for r in got)
        k += 1


# ---------------------------------------------------------------------------
# approximation certificates


@dataclass(frozen=True)
class ApproxCertificate:
    """X*X ∪ (X+X) ⊆ F + X (ring mode) or X+X ⊆ F+X (group mode).

    ``derivations`` maps each element of F to a formal term over X (a
    tuple of words; a word (x_0,..,x_k) evaluates to x_k···x_0), which
    both proves F ⊆ ⟨X⟩ on lazy rings and drives the constructive
    covers.  ``f_location`` records where F was found.
    """

    x: FiniteSet
    k: int
    witness_f: FiniteSet
    mode: str                        # "ring" | "group"
    minimal: bool
    derivations: dict = field(compare=False)
    membership: str = "closure"      # how F ⊆ ⟨X⟩ was verified
    f_location: dict = field(default_factory=dict, compare=False)
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def ring(self):
        return self.x.ring

    def target(self):
        t = sumset(self.x, self.x)
        if self.mode == "ring":
            t = union(prodset(self.x, self.x), t)
        return t

    def has_zero(self):
        return self.ring.zero() in self.x

    def verify(self):
        """Re-check symmetry, the covering inclusion, |F| = k and that
        every derivation evaluates to its element."""
        if not is_symmetric(self.x):
            return False, "x is not additively symmetric"
        if len(self.witness_f) != self.k:
            return False, "|F| != k"
        t = self.target()
        covered = set()
        for f in self.witness_f:
            covered |= translate(f, self.x).elements()
        for v in t:
            if v not in covered:
                return False, f"uncovered {self.ring.render(v)}"
        for f in self.witness_f:
            term = self.derivations.get(f)
            if term is None:
                return False, f"no derivation for {self.ring.render(f)}"
            if eval_term(self.ring, term) != f:
                return False, f"derivation of {self.ring.render(f)} is wrong"
        return True, None

    def to_json(self):
        ring = self.ring
        return {
            "schema_version": "1",
            "kind": "approx_certificate",
            "ring": ring.descriptor,
            "x": [ring.render(v) for v in self.x],
            "k": self.k,
            "f": [ring.render(v) for v in self.witness_f],
            "mode": self.mode,
            "minimal": self.minimal,
            "membership": self.membership,
            "f_location": dict(self.f_location),
            "derivations": {
                ring.render(f): [[ring.render(x) for x in word] for word in term]
                for f, term in self.derivations.items()},
            "stats": {k: v for k, v in self.stats.items()
                      if isinstance(v, (int, float, str, bool))},
        }


def eval_term(ring, term):
    """Value of a formal term: sum over words, word (x_0..x_k) = x_k···x_0."""
    acc = ring.zero()
    for word in term:
        v = word[0]
        for letter in word[1:]:
            v = ring.mul(letter, v)
        acc = ring.add(acc, v)
    return acc


def _derive_term(x, value):
    """Term over X for ``value``: X-element, t − x decomposition over the
    certificate target, or a term-tracking closure search."""
    ring = x.ring
    if value in x:
        return ((value,),)
    elems = sorted(x.elements(), key=ring.sort_key)
    # value = t - w with t in X+X or X*X, w in X
    for w in elems:
        t = ring.add(value, w)
        for a in elems:
            b = ring.sub(t, a)
            if b in x:
                return ((a,), (b,), (ring.neg(w),))
        for a in elems:
            for b in elems:
                if ring.mul(a, b) == t:
                    return ((b, a), (ring.neg(w),))
    # fall back to a closure search carrying terms
    term = _closure_term_search(x, value)
    if term is None:
        raise VerificationFailedError(
            f"{ring.render(value)} not reachable in the subring generated by X")
    return term


def _closure_term_search(x, value, budget=20000):
    ring = x.ring
    terms = {}
    for e in x.elements():
        terms.setdefault(e, ((e,),))
    frontier = list(terms)
    while frontier and len(terms) < budget:
        if value in terms:
            return terms[value]
        new = {}

        def note(v, term):
            if v not in terms and v not in new:
                new[v] = term

        for a in frontier:
            ta = terms[a]
            note(ring.neg(a), _neg_term(ring, ta))
            for b in list(terms):
                tb = terms[b]
                note(ring.add(a, b), ta + tb)
                note(ring.mul(a, b), _mul_terms(ta, tb))
                note(ring.mul(b, a), _mul_terms(tb, ta))
        terms.update(new)
        frontier = list(new)
    return terms.get(value)


def _neg_term(ring, term):
    # -(sum of words) flips each word's head letter; heads are X-letters
    # and X is symmetric wherever terms are built, so words stay over X
    return tuple(word[:-1] + (ring.neg(word[-1]),) for word in term)


def _mul_terms(ta, tb):
    # (sum w_i)(sum v_j) = sum of concatenated words v_j ++ w_i
    return tuple(v + w for w in ta for v in tb)


def approx_constant(x, mode="ring", exact=True, node_limit=DEFAULT_NODE_LIMIT):
    """Certify the approximation constant of a symmetric set.

    Target T is X*X ∪ (X+X) (ring mode) or X+X (group mode); the pool is
    the difference set T − X.  ``exact`` yields the minimal K, otherwise
    a greedy upper bound.  Raises NotSymmetricError when X ≠ −X.
    """
    if mode not in ("ring", "group"):
        raise ValueError(f"unknown mode {mode!r}")
    ring = x.ring
    for v in x.elements():
        if ring.neg(v) not in x:
            raise NotSymmetricError(
                f"set is not symmetric: missing {ring.render(ring.neg(v))}",
                witness=v)
    t = sumset(x, x)
    if mode == "ring":
        t = union(prodset(x, x), t)
    if len(x) == 0:
        f = FiniteSet(ring, ())
        return ApproxCertificate(x, 0, f, mode, True, {}, "vacuous",
                                 {"pool": "T-X"}, {})
    pool = difference_set(t, x)
    if exact:
        w = cover_exact(t, x, pool, node_limit)
    else:
        w = cover_greedy(t, x, pool)
    f = FiniteSet(ring, w.translates)

    derivations = {v: _derive_term(x, v) for v in f}
    if ring.is_finite:
        gen = closure(x, budget=ring.cardinality)
        if not all(v in gen.set for v in f):
            raise VerificationFailedError("translate escaped the generated subring")
        membership = "closure"
    else:
        for v in f:
            if eval_term(ring, derivations[v]) != v:
                raise VerificationFailedError("derivation mismatch")
        membership = "derivation"

    location = {"pool": "T-X", "in_x2": _f_in_x2(x, f)}
    return ApproxCertificate(x, len(f), f, mode, w.optimal, derivations,
                             membership, location, dict(w.stats))


def _f_in_x2(x, f, size_limit=4096):
    from .sets import growth_step
    try:
        x1 = growth_step(x, cap=size_limit)
        x2 = growth_step(x1, cap=size_limit)
    except Exception:
        return None
    return all(v in x2 for v in f)


def certificate_from_f(x, f_elems, mode="ring", minimal=False):
    """Certificate for a hand-chosen F; verifies the inclusion."""
    ring = x.ring
    f = FiniteSet(ring, f_elems)
    cert = ApproxCertificate(
        x, len(f), f, mode, minimal,
        {v: _derive_term(x, v) for v in f},
        "closure" if ring.is_finite else "derivation",
        {"pool": "manual", "in_x2": _f_in_x2(x, f)}, {})
    ok, why = cert.verify()
    if not ok:
        raise VerificationFailedError(f"invalid certificate: {why}")
    return cert


# ---------------------------------------------------------------------------
# commensurability and genericity


@dataclass(frozen=True)
class CommensurabilityResult:
    a: FiniteSet
    b: FiniteSet
    k_ab: int                        # translates of b covering a
    k_ba: int                        # translates of a covering b
    witness_ab: CoverWitness
    witness_ba: CoverWitness

    @property
    def constant(self):
        return max(self.k_ab, self.k_ba)

    @property
    def exact(self):
        return self.witness_ab.optimal and self.witness_ba.optimal


def commensurability(a, b, exact=True, node_limit=DEFAULT_NODE_LIMIT):
    """Cover each set by translates of the other (pools: difference sets)."""
    check_same_ring(a.ring, b.ring)
    if len(a) == 0 or len(b) == 0:
        raise UncoverableError("commensurability needs nonempty sets")
    solver = (lambda t, s: cover_exact(t, s, difference_set(t, s), node_limit)) \
        if exact else (lambda t, s: cover_greedy(t, s, difference_set(t, s)))
    w_ab = solver(a, b)
    w_ba = solver(b, a)
    return CommensurabilityResult(a, b, len(w_ab.translates),
                                  len(w_ba.translates), w_ab, w_ba)


@dataclass(frozen=True)
class GenericityResult:
    generic: bool
    bound: int
    witness: CoverWitness | None
    constant: int | None             # exact cover number when established


def is_generic(d, x, bound, node_limit=DEFAULT_NODE_LIMIT):
    """Do <= bound additive translates of d cover x?  Exact search."""
    check_same_ring(d.ring, x.ring)
    if len(x) == 0:
        w = make_witness(x, d, (), True, "exact", {})
        return GenericityResult(True, bound, w, 0)
    if len(d) == 0:
        return GenericityResult(False, bound, None, None)
    pool = difference_set(x, d)
    w = cover_exact(x, d, pool, node_limit)
    size = len(w.translates)
    constant = size if w.optimal else None
    return GenericityResult(w.optimal and size <= bound, bound, w, constant)
