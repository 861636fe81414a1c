"""Constructive covers derived from an approximation certificate.

Given a certificate X*X ∪ (X+X) ⊆ F + X, covers by additive translates
of X are *built* (not searched) for:

  * word products:  (x_{m-1}···x_0)X, letters in X   (claim1_cover)
  * power sets:     X^m ⊆ F_m + X                    (claim2_cover)
  * m(X^{<=m}):     sums of m products of <= m terms (msum_cover)
  * the core set:   4X + X·4X ⊆ S_11 + X, |S_11| <= K^11   (k11_cover)

The recursions are derivation-directed: every translate carries a formal
term over X (tuple of words, word (x_0,..,x_k) evaluating to x_k···x_0)
because the word induction multiplies covers by word prefixes — values
alone cannot drive it.  Word covers chain C -> l·C + F; covers of sums
of words accumulate left to right as C_new + G + F; the power-set step
is F_{m+1} = G_m + F + F with G_m the union of the word-sum covers of
the F_m derivations.  Intermediate sets are deduplicated by ring value
(first term found in canonical order wins), capped by a budget, and the
final witness is always re-verified — a verification failure here means
an implementation bug and is surfaced, never corrected.

``bound_formula_value`` reports the no-collapse size the recursion
guarantees a priori (K per letter, products over summed words), which
the deduplicated sets can only undershoot.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cover import cover_exact, eval_term, make_witness
from .errors import BudgetExceededError, VerificationFailedError
from .sets import (
    FiniteSet,
    difference_set,
    iterated_sum,
    msum,
    power_products,
    prodset,
    sumset,
)

INTERMEDIATE_CAP = 2 ** 20


def _require_ring_cert(cert):
    if cert.mode != "ring":
        raise ValueError("constructive covers need a ring-mode certificate")
    ok, why = cert.verify()
    if not ok:
        raise VerificationFailedError(f"certificate failed verification: {why}")


class _Builder:
    """Shared state for one certificate: sorted F, memoized covers."""

    def __init__(self, cert, cap=INTERMEDIATE_CAP):
        self.cert = cert
        self.ring = cert.ring
        self.cap = cap
        self.k = cert.k
        key = self.ring.sort_key
        self.x_sorted = sorted(cert.x.elements(), key=key)
        self.f_sorted = sorted(cert.witness_f.elements(), key=key)
        self.f_terms = dict(cert.derivations)
        self._word_memo = {}
        self._term_memo = {}

    def _key(self, v):
        return self.ring.sort_key(v)

    def _cap_check(self, d, what):
        if len(d) > self.cap:
            raise BudgetExceededError(
                f"{what} exceeded the intermediate cap {self.cap}",
                partial=FiniteSet(self.ring, d.keys()))

    def word_cover(self, word):
        """Cover of (x_{k}···x_0)X: base F, step l·C + F.

        Returns (dict value -> term, no-collapse count).
        """
        if word in self._word_memo:
            return self._word_memo[word]
        ring = self.ring
        if len(word) == 1:
            d = {f: self.f_terms[f] for f in self.f_sorted}
            count = self.k
        else:
            prev, prev_count = self.word_cover(word[:-1])
            letter = word[-1]
            d = {}
            for c in sorted(prev, key=self._key):
                lifted = tuple(w + (letter,) for w in prev[c])
                lc = ring.mul(letter, c)
                for f in self.f_sorted:
                    v = ring.add(lc, f)
                    if v not in d:
                        d[v] = lifted + self.f_terms[f]
            count = prev_count * self.k
            self._cap_check(d, f"word cover of length {len(word)}")
        self._word_memo[word] = (d, count)
        return d, count

    def term_cover(self, term):
        """Cover of (v_1 + ... + v_r)X for the words of a term.

        Empty terms (the value 0) are covered by the single translate
        -x_0 for the canonically least x_0 in X.  Sums accumulate left
        to right: G -> C_new + G + F.
        """
        if term in self._term_memo:
            return self._term_memo[term]
        ring = self.ring
        if len(term) == 0:
            if not self.x_sorted:
                out = ({}, 1)
            else:
                c = ring.neg(self.x_sorted[0])
                out = ({c: ((c,),)}, 1)
            self._term_memo[term] = out
            return out
        d, count = self.word_cover(term[0])
        for word in term[1:]:
            cw, cw_count = self.word_cover(word)
            new = {}
            for cv in sorted(cw, key=self._key):
                for g in sorted(d, key=self._key):
                    part = ring.add(cv, g)
                    for f in self.f_sorted:
                        v = ring.add(part, f)
                        if v not in new:
                            new[v] = cw[cv] + d[g] + self.f_terms[f]
            d = new
            count = count * cw_count * self.k
            self._cap_check(d, "word-sum cover")
        self._term_memo[term] = (d, count)
        return d, count

    def f_sequence(self, m_max):
        """[F_1, .., F_{m_max}] as (dict value -> term, count) pairs.

        F_1 = {0} with the empty term; F_{m+1} = G_m + F + F where
        G_m unions the word-sum covers of the F_m derivations.
        """
        ring = self.ring
        seq = [({ring.zero(): ()}, 1)]
        while len(seq) < m_max:
            fm, fm_count = seq[-1]
            gm = {}
            gm_count = 0
            for g in sorted(fm, key=self._key):
                cov, cov_count = self.term_cover(fm[g])
                gm_count += cov_count
                for v in sorted(cov, key=self._key):
                    if v not in gm:
                        gm[v] = cov[v]
            self._cap_check(gm, f"G_{len(seq)}")
            nxt = {}
            for c in sorted(gm, key=self._key):
                for f1 in self.f_sorted:
                    part = ring.add(c, f1)
                    t1 = gm[c] + self.f_terms[f1]
                    for f2 in self.f_sorted:
                        v = ring.add(part, f2)
                        if v not in nxt:
                            nxt[v] = t1 + self.f_terms[f2]
            self._cap_check(nxt, f"F_{len(seq) + 1}")
            for v, t in nxt.items():
                if eval_term(ring, t) != v:
                    raise VerificationFailedError(
                        f"derivation of {ring.render(v)} evaluates wrongly")
            seq.append((nxt, gm_count * self.k * self.k))
        return seq


def claim1_cover(word, cert, cap=INTERMEDIATE_CAP):
    """Constructive cover of (x_{m-1}···x_0)X for a word over X."""
    _require_ring_cert(cert)
    word = tuple(word)
    if not word:
        raise ValueError("word must be nonempty")
    for letter in word:
        if letter not in cert.x:
            raise ValueError(
                f"word letter {cert.ring.render(letter)} is not in X")
    b = _Builder(cert, cap)
    d, count = b.word_cover(word)
    value = eval_term(cert.ring, (word,))
    target = prodset(FiniteSet(cert.ring, (value,)), cert.x)
    translates = sorted(d, key=cert.ring.sort_key)
    return make_witness(target, cert.x, translates, False, "constructive",
                        {"count_bound": count, "word_length": len(word)})


def claim2_cover(m, cert, cap=INTERMEDIATE_CAP, _builder=None):
    """Cover X^m ⊆ F_m + X; returns (witness, F_m set, derivations)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    _require_ring_cert(cert)
    b = _builder or _Builder(cert, cap)
    if len(cert.x) == 0:
        target = FiniteSet(cert.ring, ())
        w = make_witness(target, cert.x, (), False, "constructive",
                         {"count_bound": 0})
        return w, FiniteSet(cert.ring, ()), {}
    seq = b.f_sequence(m)
    fm, count = seq[m - 1]
    target, _ = power_products(cert.x, m)
    translates = sorted(fm, key=cert.ring.sort_key)
    w = make_witness(target, cert.x, translates, False, "constructive",
                     {"count_bound": count, "m": m})
    return w, FiniteSet(cert.ring, fm.keys()), dict(fm)


def msum_cover(m, cert, cap=INTERMEDIATE_CAP):
    """Cover of m(X^{<=m}) by translates of X.

    X^{<=m} ⊆ F'_m + X with F'_m = F_1 ∪ .. ∪ F_m, then the sum
    induction stacks m copies of F'_m and m-1 correction copies of F.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    _require_ring_cert(cert)
    ring = cert.ring
    if len(cert.x) == 0:
        target = FiniteSet(ring, ())
        return make_witness(target, cert.x, (), False, "constructive", {})
    b = _Builder(cert, cap)
    seq = b.f_sequence(m)
    f_prime = set()
    count_prime = 0
    for d, count in seq:
        f_prime |= d.keys()
        count_prime += count
    f_prime_set = FiniteSet(ring, f_prime)
    translates = f_prime_set
    for _ in range(m - 1):
        translates = sumset(translates, f_prime_set, cap)
    for _ in range(m - 1):
        translates = sumset(translates, cert.witness_f, cap)
    target = msum(cert.x, m, cap)
    count = count_prime ** m * max(cert.k, 1) ** (m - 1)
    return make_witness(target, cert.x, sorted(translates, key=ring.sort_key),
                        False, "constructive",
                        {"count_bound": count, "m": m,
                         "f_prime_size": len(f_prime_set)})


def k11_cover(cert, cap=INTERMEDIATE_CAP):
    """Cover 4X + X·4X by the 11-fold sumset of F (at most K^11 translates).

    Chain: jX ⊆ S_{j-1} + X and X·X ⊆ S_1 + X give
    X·4X ⊆ 4(X·X) ⊆ S_4 + 4X ⊆ S_7 + X, hence
    4X + X·4X ⊆ S_3 + S_7 + (X+X) ⊆ S_11 + X.
    """
    _require_ring_cert(cert)
    ring = cert.ring
    x = cert.x
    if len(x) == 0:
        target = FiniteSet(ring, ())
        return make_witness(target, x, (), False, "constructive",
                            {"k_power": 0})
    s = cert.witness_f
    for _ in range(10):
        s = sumset(s, cert.witness_f, cap)
    four = iterated_sum(x, 4, cap)
    target = sumset(four, prodset(x, four, cap), cap)
    bound = cert.k ** 11
    if len(s) > bound:
        raise VerificationFailedError(
            f"|S_11| = {len(s)} exceeds K^11 = {bound}")
    return make_witness(target, x, sorted(s, key=ring.sort_key), False,
                        "constructive", {"k_power": bound, "s11_size": len(s)})


@dataclass(frozen=True)
class ConstructiveCoverReport:
    certificate: object
    m: int
    constructed: object              # CoverWitness, method constructive
    constructed_size: int
    exact_size: int | None           # None = skipped (size threshold)
    bound_formula_value: int

    @property
    def ratio(self):
        if not self.exact_size:
            return None
        return self.constructed_size / self.exact_size

    def to_json(self):
        return {
            "schema_version": "1",
            "kind": "constructive_report",
            "m": self.m,
            "constructed_size": self.constructed_size,
            "exact_size": self.exact_size,
            "bound_formula_value": self.bound_formula_value,
            "witness": self.constructed.to_json(),
            "certificate": self.certificate.to_json(),
        }


BOUND_TABLE_EXACT_LIMIT = 512


def bound_table(cert, m_max, cap=INTERMEDIATE_CAP,
                exact_limit=BOUND_TABLE_EXACT_LIMIT):
    """Constructive |F_m| against the exact covering number of X^m.

    The exact column is computed by the branch-and-bound solver and
    skipped (None) when X^m outgrows ``exact_limit``.
    """
    _require_ring_cert(cert)
    b = _Builder(cert, cap)
    rows = []
    for m in range(1, m_max + 1):
        w, fm, _ = claim2_cover(m, cert, cap, _builder=b)
        exact = None
        if len(w.target) and len(w.target) <= exact_limit:
            pool = difference_set(w.target, cert.x)
            if len(pool) <= 4 * exact_limit:
                exact = len(cover_exact(w.target, cert.x, pool).translates)
        elif len(w.target) == 0:
            exact = 0
        count = w.stats.get("count_bound", 0)
        rows.append(ConstructiveCoverReport(cert, m, w, len(fm), exact, count))
    return rows
