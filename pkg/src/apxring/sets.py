"""Finite-set arithmetic over a ring.

Sum and product sets, translates, the growth recursion
X_{n+1} = X_n*X_n + (X_n + X_n), iterated sums and products, subring
closure and two-sided ideal generation.

Sets are immutable and duplicate-free.  On finite rings up to the dense
threshold they carry a bit-indexed representation (one bit per dense
index); elsewhere they are plain hashed sets of canonical encodings.
Both representations implement every operation and must agree; modular
rings get a word-parallel sumset kernel (translation is a bit rotation).

All derived sets respect a cardinality cap; exceeding it raises the
typed BudgetExceededError so parameter sweeps can skip rather than die.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, CrossRingError, ParseError
from .rings import check_same_ring, _split_top_level

DENSE_THRESHOLD = 2 ** 20    # bit-indexed representation below this ring size
DEFAULT_SET_CAP = 2 ** 24    # cardinality cap for derived sets


class FiniteSet:
    """Immutable finite subset of one ring.

    ``rep`` is "dense" when the ring is finite and small enough for the
    bit-indexed form, else "sparse".  Iteration is always in canonical
    order (dense index, or the backend's sort key).
    """

    __slots__ = ("ring", "_elems", "_mask", "rep")

    def __init__(self, ring, elements, _mask=None):
        self.ring = ring
        self._elems = frozenset(elements)
        self.rep = ("dense" if ring.is_finite and ring.cardinality <= DENSE_THRESHOLD
                    else "sparse")
        self._mask = _mask

    @classmethod
    def of(cls, ring, elements):
        return cls(ring, elements)

    @classmethod
    def _from_mask(cls, ring, mask):
        elems = []
        m = mask
        while m:
            low = m & -m
            elems.append(ring.element_at(low.bit_length() - 1))
            m ^= low
        return cls(ring, elems, _mask=mask)

    def mask(self):
        """Bitmask over dense indices (dense representation only)."""
        if self.rep != "dense":
            raise ValueError("mask requires the dense representation")
        if self._mask is None:
            m = 0
            for x in self._elems:
                m |= 1 << self.ring.index_of(x)
            self._mask = m
        return self._mask

    def __len__(self):
        return len(self._elems)

    def __iter__(self):
        return iter(sorted(self._elems, key=self.ring.sort_key))

    def __contains__(self, x):
        return x in self._elems

    def __eq__(self, other):
        return (isinstance(other, FiniteSet) and self.ring == other.ring
                and self._elems == other._elems)

    def __hash__(self):
        return hash((self.ring.descriptor, self._elems))

    def __le__(self, other):
        if self.ring != other.ring:
            raise CrossRingError("subset test across rings")
        return self._elems <= other._elems

    def __repr__(self):
        inside = ", ".join(self.ring.render(x) for x in list(self)[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"FiniteSet({self.ring.descriptor}, {{{inside}{more}}}, n={len(self)})"

    def elements(self):
        return self._elems

    def render(self):
        return "{" + ", ".join(self.ring.render(x) for x in self) + "}"

    def to_json(self):
        return {"ring": self.ring.descriptor,
                "elements": [self.ring.render(x) for x in self]}


def parse_set(ring, text):
    """Parse a set literal ``{e1, e2, ...}`` in the ring's element grammar."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError("set literal must be {...}", text, 0)
    body = s[1:-1].strip()
    if not body:
        return FiniteSet(ring, ())
    return FiniteSet(ring, (ring.parse(p) for p in _split_top_level(body)))


def load_set_file(ring, path):
    """One element per line; blank lines and '#' comments ignored."""
    elems = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            stripped = line.split("#", 1)[0].strip()
            if stripped:
                elems.append(ring.parse(stripped))
    return FiniteSet(ring, elems)


def _guard(ring, elems, cap):
    if len(elems) > cap:
        raise BudgetExceededError(
            f"derived set exceeded cap {cap}", partial=FiniteSet(ring, elems))
    return FiniteSet(ring, elems)


def _sumset_sparse(a, b):
    ring = a.ring
    out = set()
    for x in a.elements():
        for y in b.elements():
            out.add(ring.add(x, y))
    return out


def _sumset_dense(a, b):
    """Mask kernel; modular rings reduce translation to a rotation."""
    ring = a.ring
    n = ring.cardinality
    bm = b.mask()
    out = 0
    if type(ring).__name__ == "ModularRing":
        full = (1 << n) - 1
        for x in a.elements():
            t = ring.index_of(x)
            out |= ((bm << t) | (bm >> (n - t))) & full if t else bm
    else:
        for x in a.elements():
            for y in b.elements():
                out |= 1 << ring.index_of(ring.add(x, y))
    return out


def sumset(a, b, cap=DEFAULT_SET_CAP):
    """{x + y : x in a, y in b}."""
    check_same_ring(a.ring, b.ring)
    if a.rep == "dense" and b.rep == "dense":
        return FiniteSet._from_mask(a.ring, _sumset_dense(a, b))
    return _guard(a.ring, _sumset_sparse(a, b), cap)


def prodset(a, b, cap=DEFAULT_SET_CAP):
    """{x * y : x in a, y in b}."""
    check_same_ring(a.ring, b.ring)
    ring = a.ring
    out = set()
    for x in a.elements():
        for y in b.elements():
            out.add(ring.mul(x, y))
    return _guard(ring, out, cap)


def negate(a):
    return FiniteSet(a.ring, (a.ring.neg(x) for x in a.elements()))


def symmetrize(a):
    """a ∪ (−a).  Does not force 0 in: symmetry and 0-membership stay
    orthogonal, callers that need 0 state it as a precondition."""
    return FiniteSet(a.ring, set(a.elements()) | {a.ring.neg(x) for x in a.elements()})


def translate(t, a):
    """{t + x : x in a}."""
    return FiniteSet(a.ring, (a.ring.add(t, x) for x in a.elements()))


def union(a, b):
    check_same_ring(a.ring, b.ring)
    return FiniteSet(a.ring, a.elements() | b.elements())


def intersect(a, b):
    check_same_ring(a.ring, b.ring)
    return FiniteSet(a.ring, a.elements() & b.elements())


def difference_set(a, b, cap=DEFAULT_SET_CAP):
    """Minkowski difference {x - y : x in a, y in b} = a + (-b)."""
    return sumset(a, negate(b), cap)


def is_symmetric(a):
    return all(a.ring.neg(x) in a for x in a.elements())


def growth_step(a, cap=DEFAULT_SET_CAP):
    """a*a + (a + a), one step of the growth recursion."""
    return sumset(prodset(a, a, cap), sumset(a, a, cap), cap)


@dataclass(frozen=True)
class GrowthEntry:
    n: int
    xset: FiniteSet
    size: int
    covering: int | None = None        # translates of the base covering X_n
    covering_method: str | None = None # "exact" | "greedy"


@dataclass(frozen=True)
class GrowthProfile:
    base: FiniteSet
    entries: tuple


_COVERING_EXACT_LIMIT = 2048


def growth_sequence(x, n_max, with_covering=False, cap=DEFAULT_SET_CAP):
    """Entries X_0..X_{n_max} chained by growth_step.

    With ``with_covering``, each entry carries the number of additive
    translates of ``x`` covering it: exact for targets up to
    2048 elements, a greedy upper bound beyond that (method recorded).
    """
    entries = []
    cur = x
    for n in range(n_max + 1):
        if n > 0:
            cur = growth_step(cur, cap)
        cov = method = None
        if with_covering and len(x) > 0:
            from .cover import cover_exact, cover_greedy  # cycle: cover uses sets
            pool = difference_set(cur, x, cap)
            if len(cur) <= _COVERING_EXACT_LIMIT:
                w = cover_exact(cur, x, pool)
                cov, method = len(w.translates), "exact" if w.optimal else "greedy"
            else:
                w = cover_greedy(cur, x, pool)
                cov, method = len(w.translates), "greedy"
        entries.append(GrowthEntry(n, cur, len(cur), cov, method))
    return GrowthProfile(base=x, entries=tuple(entries))


def power_products(x, m, cap=DEFAULT_SET_CAP):
    """(X^m, X^{<=m}): products of exactly / at most m elements.

    Associativity makes parenthesization irrelevant, so X^{k+1} is
    computed as X^k * X with memoized intermediates.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    powers = [x]
    for _ in range(m - 1):
        powers.append(prodset(powers[-1], x, cap))
    acc = set()
    for pw in powers:
        acc |= pw.elements()
    return powers[-1], _guard(x.ring, acc, cap)


def iterated_sum(a, m, cap=DEFAULT_SET_CAP):
    """m-fold sumset a + a + ... + a."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = a
    for _ in range(m - 1):
        out = sumset(out, a, cap)
    return out


def msum(x, m, cap=DEFAULT_SET_CAP):
    """m(X^{<=m}): sums of m elements, each a product of at most m."""
    _, up_to = power_products(x, m, cap)
    return iterated_sum(up_to, m, cap)


@dataclass(frozen=True)
class ClosureResult:
    generated: FiniteSet | None      # None when the budget ran out
    complete: bool
    steps: int
    budget: int
    partial: FiniteSet | None = None
    heuristic: bool = False          # lazy-ring ideal closure is sampled

    @property
    def set(self):
        return self.generated if self.complete else self.partial


def closure(gens, budget=DEFAULT_SET_CAP):
    """Smallest subset containing gens and closed under +, -, *.

    Budget overrun is a normal outcome carrying the partial set, not an
    error; on a finite ring any budget >= |R| completes.
    """
    ring = gens.ring
    if budget < len(gens):
        raise ValueError("budget smaller than the generating set")
    current = set(gens.elements())
    frontier = set(current)
    steps = 0
    while frontier:
        steps += 1
        new = set()
        for a in frontier:
            na = ring.neg(a)
            if na not in current:
                new.add(na)
        for a in frontier:
            for b in current:
                for v in (ring.add(a, b), ring.mul(a, b), ring.mul(b, a)):
                    if v not in current:
                        new.add(v)
        new -= current
        current |= new
        if len(current) > budget:
            return ClosureResult(None, False, steps, budget,
                                 partial=FiniteSet(ring, current))
        frontier = new
    return ClosureResult(FiniteSet(ring, current), True, steps, budget)


_LAZY_IDEAL_SAMPLE = 64


def ideal_generated(ring, gens, budget=DEFAULT_SET_CAP):
    """Smallest two-sided ideal containing gens.

    Finite rings multiply by every ring element (exact).  Lazy rings
    multiply by the first elements of the backend's canonical sample
    stream under the budget and mark the result heuristic.
    """
    check_same_ring(ring, gens.ring)
    if ring.is_finite:
        multipliers = list(ring.elements())
        heuristic = False
    else:
        import itertools as _it
        multipliers = list(_it.islice(ring.sample_stream(), _LAZY_IDEAL_SAMPLE))
        heuristic = True
    current = set(gens.elements())
    current.add(ring.zero())
    frontier = set(current)
    steps = 0
    while frontier:
        steps += 1
        new = set()
        for a in frontier:
            na = ring.neg(a)
            if na not in current:
                new.add(na)
            for b in current:
                s = ring.add(a, b)
                if s not in current:
                    new.add(s)
            for r in multipliers:
                for v in (ring.mul(r, a), ring.mul(a, r)):
                    if v not in current:
                        new.add(v)
        new -= current
        current |= new
        if len(current) > budget:
            return ClosureResult(None, False, steps, budget,
                                 partial=FiniteSet(ring, current),
                                 heuristic=heuristic)
        frontier = new
    return ClosureResult(FiniteSet(ring, current), True, steps, budget,
                         heuristic=heuristic)
