"""Computable rings with canonical element encodings.

Backends: integers mod n, prime fields, polynomial quotient rings
F_p[t]/(m), Galois fields, d x d matrix rings, finite products, explicit
Cayley tables, and two lazy (infinite) backends: the integers and F_p[t].

Rings are never assumed unital or commutative; no operation here uses a
multiplicative identity.  Finite backends expose a fixed dense indexing
of their elements with the additive zero at index 0 (lexicographic on
coordinates / coefficients, documented per backend below); lazy backends
expose hashable canonical encodings only and refuse enumeration loudly.

Ring DSL, one line per ring:

    zmod:<n>              integers mod n, n >= 2
    gf:<p>^<k>:<poly>     Galois field F_{p^k}, irreducible monic <poly>
    polyquo:<p>:<poly>    F_p[t] / (<poly>), monic modulus of degree >= 1
    mat:<d>:<inner>       d x d matrices over a finite <inner> ring
    prod:(<dsl>,<dsl>,..) finite product ring
    int                   the integers (lazy)
    poly:<p>              F_p[t] (lazy)
    table:@<path>         Cayley tables from a text file: first line n,
                          then n lines of the addition table and n lines
                          of the multiplication table (index entries)

Element grammar: optionally signed integers for zmod/int; polynomials in
t with ^ for powers and integer coefficients ("t^2+2t+1"); matrices as
[[..],[..]] with rows of inner elements; tuples as (..,..); a bare index
for table rings.

Handles are immutable after construction and all operations are pure,
so they are safe for unrestricted concurrent use.
"""

from __future__ import annotations

import itertools
import math
import re

from .errors import (
    CrossRingError,
    InfiniteRingError,
    NotAnIdealError,
    ParseError,
    RingConstructionError,
)

_AXIOM_SAMPLE = 10_000       # random triples checked when |R| > exhaustive cap
_AXIOM_EXHAUSTIVE = 512      # full triple check below this size


def _is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers (coefficient tuples, lowest degree first, no trailing 0)


def _poly_trim(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = v
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % p
    return _poly_trim(out)


def _poly_neg(a, p):
    return _poly_trim((-v) % p for v in a)


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u == 0:
            continue
        for j, v in enumerate(b):
            out[i + j] = (out[i + j] + u * v) % p
    return _poly_trim(out)


def _poly_mod(a, modulus, p):
    # modulus is monic; long division, remainder only
    a = list(a)
    d = len(modulus) - 1
    while len(a) > d:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - d
            for i, v in enumerate(modulus):
                a[shift + i] = (a[shift + i] - lead * v) % p
        a.pop()
    return _poly_trim(a)


def _poly_render(coeffs, var="t"):
    if not coeffs:
        return "0"
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        if e == 0:
            terms.append(str(c))
        elif e == 1:
            terms.append(f"{c}{var}" if c != 1 else var)
        else:
            terms.append(f"{c}{var}^{e}" if c != 1 else f"{var}^{e}")
    return "+".join(terms)


_TERM_RE = re.compile(r"([+-]?)\s*(\d+)?\s*(t(?:\^(\d+))?)?")


def _poly_parse(text, p):
    """Parse a polynomial in t into a reduced coefficient tuple."""
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial", text, 0)
    coeffs = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ParseError("expected a polynomial term", text, pos)
        sign, num, tpart, exp = m.groups()
        if sign == "" and not first:
            raise ParseError("expected '+' or '-'", text, pos)
        coef = int(num) if num is not None else 1
        if sign == "-":
            coef = -coef
        if tpart:
            e = int(exp) if exp is not None else 1
        else:
            e = 0
        coeffs[e] = coeffs.get(e, 0) + coef
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
        first = False
    top = max(coeffs) if coeffs else 0
    out = [0] * (top + 1)
    for e, c in coeffs.items():
        out[e] = c % p
    return _poly_trim(out)


def poly_is_irreducible(coeffs, p):
    """Trial division by all monic polynomials of degree <= deg/2."""
    k = len(coeffs) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = tuple(tail) + (1,)
            if _poly_mod(coeffs, div, p) == ():
                return False
    return True


def find_irreducible(p, k):
    """Lexicographically least monic irreducible of degree k over F_p."""
    if not _is_prime(p):
        raise RingConstructionError(f"base {p} is not prime")
    for tail in itertools.product(range(p), repeat=k):
        cand = tuple(tail) + (1,)
        if poly_is_irreducible(cand, p):
            return cand
    raise RingConstructionError(f"no irreducible of degree {k} over F_{p}")


# ---------------------------------------------------------------------------
# ring handles


class Ring:
    """Common surface of every backend.

    Subclasses define ``add``/``neg``/``mul``/``zero`` on canonical
    encodings, plus encoding <-> dense index maps for finite backends.
    ``descriptor`` is the canonical DSL string and doubles as the
    identity used by cross-ring checks.
    """

    descriptor = None
    cardinality = None       # None = infinite
    characteristic = None

    @property
    def is_finite(self):
        return self.cardinality is not None

    # element operations -----------------------------------------------
    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    # enumeration / indexing --------------------------------------------
    def elements(self):
        """All elements in dense-index order, zero first (finite only)."""
        if not self.is_finite:
            raise InfiniteRingError(f"{self.descriptor} is infinite")
        return (self.element_at(i) for i in range(self.cardinality))

    def element_at(self, i):
        raise InfiniteRingError(f"{self.descriptor} has no dense indexing")

    def index_of(self, x):
        raise InfiniteRingError(f"{self.descriptor} has no dense indexing")

    def sort_key(self, x):
        """Total order on encodings; dense index on finite backends."""
        return self.index_of(x)

    def sample_stream(self):
        """Canonical element stream for budget-limited heuristics."""
        if self.is_finite:
            return self.elements()
        raise InfiniteRingError(f"{self.descriptor} provides no samples")

    # text --------------------------------------------------------------
    def parse(self, text):
        raise NotImplementedError

    def render(self, x):
        raise NotImplementedError

    def contains(self, x):
        """Cheap validity check of an encoding (not a membership oracle)."""
        try:
            self.index_of(x)
            return True
        except Exception:
            return False

    # identity ----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Ring) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __repr__(self):
        card = self.cardinality if self.is_finite else "inf"
        return f"<Ring {self.descriptor} |R|={card} char={self.characteristic}>"


def check_same_ring(ring, *others):
    for o in others:
        if o != ring:
            raise CrossRingError(
                f"operands mix rings {ring.descriptor} and {o.descriptor}")


class ModularRing(Ring):
    """Z/nZ; encodings are ints in 0..n-1, index = value."""

    def __init__(self, n, prime_required=False):
        if n < 2:
            raise RingConstructionError(f"modulus {n} < 2")
        if prime_required and not _is_prime(n):
            raise RingConstructionError(f"{n} is not prime")
        self.n = n
        self.descriptor = f"zmod:{n}"
        self.cardinality = n
        self.characteristic = n

    def add(self, x, y):
        return (x + y) % self.n

    def neg(self, x):
        return (-x) % self.n

    def mul(self, x, y):
        return (x * y) % self.n

    def zero(self):
        return 0

    def element_at(self, i):
        if not 0 <= i < self.n:
            raise IndexError(i)
        return i

    def index_of(self, x):
        if not isinstance(x, int) or not 0 <= x < self.n:
            raise ValueError(f"{x!r} is not an element of {self.descriptor}")
        return x

    def parse(self, text):
        s = text.strip()
        if not re.fullmatch(r"[+-]?\d+", s):
            raise ParseError("expected an integer", text, 0)
        return int(s) % self.n

    def render(self, x):
        return str(x)


class IntegerRing(Ring):
    """The integers, lazily: encodings are Python ints."""

    def __init__(self):
        self.descriptor = "int"
        self.cardinality = None
        self.characteristic = 0

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def zero(self):
        return 0

    def sort_key(self, x):
        # 0, 1, -1, 2, -2, ...: a canonical enumeration order of Z
        return (abs(x), 0 if x >= 0 else 1)

    def sample_stream(self):
        yield 0
        k = 1
        while True:
            yield k
            yield -k
            k += 1

    def parse(self, text):
        s = text.strip()
        if not re.fullmatch(r"[+-]?\d+", s):
            raise ParseError("expected an integer", text, 0)
        return int(s)

    def render(self, x):
        return str(x)

    def contains(self, x):
        return isinstance(x, int)


class PolyQuotientRing(Ring):
    """F_p[t] / (m(t)) for a monic modulus m of degree d >= 1.

    Encodings are coefficient tuples of length < d (lowest degree first,
    trimmed).  Dense index reads the coefficient vector as a base-p
    number with the degree-(d-1) coefficient most significant, so the
    order is lexicographic on (c_{d-1}, ..., c_0) and zero comes first.
    """

    kind = "polyquo"

    def __init__(self, p, modulus):
        if not _is_prime(p):
            raise RingConstructionError(f"base {p} is not prime")
        modulus = _poly_trim(v % p for v in modulus)
        if len(modulus) < 2:
            raise RingConstructionError("modulus must have degree >= 1")
        if modulus[-1] != 1:
            raise RingConstructionError("modulus must be monic")
        self.p = p
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self._validate()
        self.descriptor = f"{self.kind}:{p}:{_poly_render(modulus)}"
        self.cardinality = p ** self.degree
        self.characteristic = p

    def _validate(self):
        pass

    def add(self, x, y):
        return _poly_add(x, y, self.p)

    def neg(self, x):
        return _poly_neg(x, self.p)

    def mul(self, x, y):
        return _poly_mod(_poly_mul(x, y, self.p), self.modulus, self.p)

    def zero(self):
        return ()

    def element_at(self, i):
        if not 0 <= i < self.cardinality:
            raise IndexError(i)
        coeffs = []
        for _ in range(self.degree):
            coeffs.append(i % self.p)
            i //= self.p
        return _poly_trim(coeffs)

    def index_of(self, x):
        if not isinstance(x, tuple) or len(x) > self.degree:
            raise ValueError(f"{x!r} is not an element of {self.descriptor}")
        i = 0
        for e, c in enumerate(x):
            if not 0 <= c < self.p:
                raise ValueError(f"{x!r} has out-of-range coefficients")
            i += c * self.p ** e
        return i

    def parse(self, text):
        coeffs = _poly_parse(text, self.p)
        return _poly_mod(coeffs, self.modulus, self.p)

    def render(self, x):
        return _poly_render(x)


class GaloisField(PolyQuotientRing):
    """F_{p^k} as F_p[t]/(irreducible); construction checks irreducibility."""

    kind = "gf"

    def __init__(self, p, k, modulus=None):
        if modulus is None:
            modulus = find_irreducible(p, k)
        modulus = _poly_trim(v % p for v in modulus)
        if len(modulus) - 1 != k:
            raise RingConstructionError(
                f"modulus degree {len(modulus) - 1} != extension degree {k}")
        super().__init__(p, modulus)
        self.descriptor = f"gf:{p}^{k}:{_poly_render(self.modulus)}"

    def _validate(self):
        if not poly_is_irreducible(self.modulus, self.p):
            raise RingConstructionError(
                f"modulus {_poly_render(self.modulus)} is reducible over F_{self.p}")


class LazyPolyRing(Ring):
    """F_p[t] with no degree bound; encodings are trimmed coeff tuples."""

    def __init__(self, p):
        if not _is_prime(p):
            raise RingConstructionError(f"base {p} is not prime")
        self.p = p
        self.descriptor = f"poly:{p}"
        self.cardinality = None
        self.characteristic = p

    def add(self, x, y):
        return _poly_add(x, y, self.p)

    def neg(self, x):
        return _poly_neg(x, self.p)

    def mul(self, x, y):
        return _poly_mul(x, y, self.p)

    def zero(self):
        return ()

    def sort_key(self, x):
        return (len(x), tuple(reversed(x)))

    def sample_stream(self):
        d = 0
        while True:
            for tail in itertools.product(range(self.p), repeat=d):
                lead = range(1, self.p) if d else range(self.p)
                for c in lead:
                    poly = _poly_trim(tuple(tail) + (c,))
                    if d == 0 or poly:
                        yield poly
            d += 1

    def parse(self, text):
        return _poly_parse(text, self.p)

    def render(self, x):
        return _poly_render(x)

    def contains(self, x):
        return isinstance(x, tuple) and (not x or x[-1] != 0) and all(
            isinstance(c, int) and 0 <= c < self.p for c in x)


class MatrixRing(Ring):
    """d x d matrices over a finite base ring.

    Encodings are tuples of row tuples of base encodings.  Index order
    is mixed-radix over the base indices, entry (0,0) most significant;
    the zero matrix sits at index 0.
    """

    def __init__(self, base, d):
        if d < 1:
            raise RingConstructionError(f"matrix size {d} < 1")
        if not base.is_finite:
            raise RingConstructionError("matrix base ring must be finite")
        self.base = base
        self.d = d
        self.descriptor = f"mat:{d}:{base.descriptor}"
        self.cardinality = base.cardinality ** (d * d)
        self.characteristic = base.characteristic

    def add(self, x, y):
        b = self.base
        return tuple(tuple(b.add(u, v) for u, v in zip(rx, ry))
                     for rx, ry in zip(x, y))

    def neg(self, x):
        b = self.base
        return tuple(tuple(b.neg(u) for u in row) for row in x)

    def mul(self, x, y):
        b = self.base
        d = self.d
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                acc = b.zero()
                for k in range(d):
                    acc = b.add(acc, b.mul(x[i][k], y[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def zero(self):
        z = self.base.zero()
        return tuple(tuple(z for _ in range(self.d)) for _ in range(self.d))

    def element_at(self, i):
        if not 0 <= i < self.cardinality:
            raise IndexError(i)
        n = self.base.cardinality
        cells = []
        for _ in range(self.d * self.d):
            cells.append(self.base.element_at(i % n))
            i //= n
        cells.reverse()
        it = iter(cells)
        return tuple(tuple(next(it) for _ in range(self.d))
                     for _ in range(self.d))

    def index_of(self, x):
        n = self.base.cardinality
        i = 0
        for row in x:
            for cell in row:
                i = i * n + self.base.index_of(cell)
        return i

    def parse(self, text):
        rows = _split_bracketed(text.strip(), "[", "]")
        if len(rows) != self.d:
            raise ParseError(f"expected {self.d} rows", text, 0)
        out = []
        for row in rows:
            cells = _split_top_level(row)
            if len(cells) != self.d:
                raise ParseError(f"expected {self.d} entries per row", text, 0)
            out.append(tuple(self.base.parse(c) for c in cells))
        return tuple(out)

    def render(self, x):
        return "[" + ",".join(
            "[" + ",".join(self.base.render(c) for c in row) + "]"
            for row in x) + "]"


class ProductRing(Ring):
    """Finite product of finite rings; componentwise operations.

    Index order is mixed-radix with the first factor most significant,
    so (0, 0, ..., 0) comes first.
    """

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise RingConstructionError("product of zero rings")
        if any(not f.is_finite for f in factors):
            raise RingConstructionError("product factors must be finite")
        self.factors = factors
        self.descriptor = "prod:(" + ",".join(f.descriptor for f in factors) + ")"
        self.cardinality = math.prod(f.cardinality for f in factors)
        self.characteristic = math.lcm(*(f.characteristic for f in factors))

    def add(self, x, y):
        return tuple(f.add(u, v) for f, u, v in zip(self.factors, x, y))

    def neg(self, x):
        return tuple(f.neg(u) for f, u in zip(self.factors, x))

    def mul(self, x, y):
        return tuple(f.mul(u, v) for f, u, v in zip(self.factors, x, y))

    def zero(self):
        return tuple(f.zero() for f in self.factors)

    def element_at(self, i):
        if not 0 <= i < self.cardinality:
            raise IndexError(i)
        coords = []
        for f in reversed(self.factors):
            coords.append(f.element_at(i % f.cardinality))
            i //= f.cardinality
        coords.reverse()
        return tuple(coords)

    def index_of(self, x):
        i = 0
        for f, u in zip(self.factors, x):
            i = i * f.cardinality + f.index_of(u)
        return i

    def parse(self, text):
        s = text.strip()
        if not (s.startswith("(") and s.endswith(")")):
            raise ParseError("expected a tuple (..,..)", text, 0)
        parts = _split_top_level(s[1:-1])
        if len(parts) != len(self.factors):
            raise ParseError(f"expected {len(self.factors)} coordinates", text, 0)
        return tuple(f.parse(p) for f, p in zip(self.factors, parts))

    def render(self, x):
        return "(" + ",".join(f.render(u) for f, u in zip(self.factors, x)) + ")"


class TableRing(Ring):
    """Ring given by explicit Cayley tables; elements are indices 0..n-1.

    Construction verifies the full ring axioms exhaustively: addition is
    an abelian group with 0 at index 0, multiplication is associative
    and distributes over addition on both sides.
    """

    def __init__(self, add_table, mul_table, name=None):
        n = len(add_table)
        if n < 1 or len(mul_table) != n:
            raise RingConstructionError("tables must be square and same size")
        for tbl, label in ((add_table, "addition"), (mul_table, "multiplication")):
            for row in tbl:
                if len(row) != n or any(not 0 <= v < n for v in row):
                    raise RingConstructionError(
                        f"{label} table entries must be indices in 0..{n - 1}")
        self.n = n
        self.add_table = tuple(tuple(r) for r in add_table)
        self.mul_table = tuple(tuple(r) for r in mul_table)
        self._verify_axioms()
        tag = name or f"#{self._content_hash()}"
        self.descriptor = f"table:{n}:{tag}"
        self.cardinality = n
        self.characteristic = self._exponent()

    def _content_hash(self):
        return format(hash((self.add_table, self.mul_table)) & 0xFFFFFFFF, "08x")

    def _verify_axioms(self):
        n, A, M = self.n, self.add_table, self.mul_table
        rng = range(n)
        for i in rng:
            if A[0][i] != i or A[i][0] != i:
                raise RingConstructionError(
                    f"index 0 is not the additive zero (fails at {i})")
        for i in rng:
            if 0 not in A[i]:
                raise RingConstructionError(f"element {i} has no additive inverse")
            for j in rng:
                if A[i][j] != A[j][i]:
                    raise RingConstructionError(
                        f"addition not commutative at ({i},{j})")
        for i in rng:
            for j in rng:
                aij = A[i][j]
                mij = M[i][j]
                for k in rng:
                    if A[aij][k] != A[i][A[j][k]]:
                        raise RingConstructionError(
                            f"addition not associative at ({i},{j},{k})")
                    if M[mij][k] != M[i][M[j][k]]:
                        raise RingConstructionError(
                            f"multiplication not associative at ({i},{j},{k})")
                    if M[i][A[j][k]] != A[M[i][j]][M[i][k]]:
                        raise RingConstructionError(
                            f"left distributivity fails at ({i},{j},{k})")
                    if M[A[i][j]][k] != A[M[i][k]][M[j][k]]:
                        raise RingConstructionError(
                            f"right distributivity fails at ({i},{j},{k})")

    def _exponent(self):
        out = 1
        for i in range(self.n):
            order, acc = 1, i
            while acc != 0:
                acc = self.add_table[acc][i]
                order += 1
            out = math.lcm(out, order)
        return out

    def add(self, x, y):
        return self.add_table[x][y]

    def neg(self, x):
        return self.add_table[x].index(0)

    def mul(self, x, y):
        return self.mul_table[x][y]

    def zero(self):
        return 0

    def element_at(self, i):
        if not 0 <= i < self.n:
            raise IndexError(i)
        return i

    def index_of(self, x):
        if not isinstance(x, int) or not 0 <= x < self.n:
            raise ValueError(f"{x!r} is not an element of {self.descriptor}")
        return x

    def parse(self, text):
        s = text.strip()
        if not re.fullmatch(r"\d+", s):
            raise ParseError("expected an element index", text, 0)
        i = int(s)
        if i >= self.n:
            raise ParseError(f"index {i} out of range 0..{self.n - 1}", text, 0)
        return i

    def render(self, x):
        return str(x)


def zero_multiplication_ring(n):
    """Z/n addition with xy = 0 for all x, y: non-unital by construction."""
    add = [[(i + j) % n for j in range(n)] for i in range(n)]
    mul = [[0] * n for _ in range(n)]
    return TableRing(add, mul, name=f"zeromul{n}")


# ---------------------------------------------------------------------------
# descriptor parsing


def _split_top_level(text):
    """Split on commas not nested inside (), [] or {}."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail or parts:
        parts.append(tail)
    return [p for p in parts if p != ""]


def _split_bracketed(text, open_ch, close_ch):
    """Split '[[a,b],[c,d]]' into the inner row strings."""
    if not (text.startswith(open_ch) and text.endswith(close_ch)):
        raise ParseError(f"expected {open_ch}..{close_ch}", text, 0)
    inner = text[1:-1]
    rows, depth, cur = [], 0, []
    for ch in inner:
        if ch == open_ch:
            depth += 1
            if depth == 1:
                cur = []
                continue
        elif ch == close_ch:
            depth -= 1
            if depth == 0:
                rows.append("".join(cur))
                continue
        if depth >= 1:
            cur.append(ch)
    return rows


def load_table_file(path):
    """Read the table:@ file format: n, n add rows, n mul rows."""
    with open(path, "r", encoding="utf-8") as fh:
        tokens = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not tokens:
        raise RingConstructionError(f"empty table file {path}")
    n = int(tokens[0])
    if len(tokens) != 1 + 2 * n:
        raise RingConstructionError(
            f"table file {path} must hold {2 * n} rows after the size line")
    rows = [[int(v) for v in ln.split()] for ln in tokens[1:]]
    return TableRing(rows[:n], rows[n:])


def parse_ring(dsl):
    """Build a ring handle from its DSL string."""
    s = dsl.strip()
    if s == "int":
        return IntegerRing()
    if s.startswith("zmod:"):
        try:
            n = int(s[5:])
        except ValueError:
            raise ParseError("zmod modulus must be an integer", s, 5)
        return ModularRing(n)
    if s.startswith("gf:"):
        m = re.fullmatch(r"gf:(\d+)\^(\d+):(.+)", s)
        if not m:
            raise ParseError("expected gf:<p>^<k>:<poly>", s, 0)
        p, k = int(m.group(1)), int(m.group(2))
        return GaloisField(p, k, _poly_parse(m.group(3), p))
    if s.startswith("polyquo:"):
        m = re.fullmatch(r"polyquo:(\d+):(.+)", s)
        if not m:
            raise ParseError("expected polyquo:<p>:<poly>", s, 0)
        p = int(m.group(1))
        return PolyQuotientRing(p, _poly_parse(m.group(2), p))
    if s.startswith("mat:"):
        m = re.fullmatch(r"mat:(\d+):(.+)", s)
        if not m:
            raise ParseError("expected mat:<d>:<inner-dsl>", s, 0)
        return MatrixRing(parse_ring(m.group(2)), int(m.group(1)))
    if s.startswith("prod:"):
        body = s[5:]
        if not (body.startswith("(") and body.endswith(")")):
            raise ParseError("expected prod:(<dsl>,...)", s, 5)
        return ProductRing(parse_ring(p) for p in _split_top_level(body[1:-1]))
    if s.startswith("poly:"):
        try:
            p = int(s[5:])
        except ValueError:
            raise ParseError("poly base must be an integer", s, 5)
        return LazyPolyRing(p)
    if s.startswith("table:@"):
        return load_table_file(s[7:])
    raise ParseError(f"unknown ring DSL {dsl!r}", s, 0)


def make_ring(desc):
    """Ring handle from a DSL string or an existing handle (idempotent)."""
    if isinstance(desc, Ring):
        return desc
    return parse_ring(desc)


# constructor aliases matching the descriptor vocabulary
def modular(n):
    return ModularRing(n)


def prime_field(p):
    return ModularRing(p, prime_required=True)


def poly_quotient(p, modulus):
    return PolyQuotientRing(p, modulus)


def galois_field(p, k, modulus=None):
    return GaloisField(p, k, modulus)


def matrix_ring(base, d):
    return MatrixRing(make_ring(base), d)


def product_ring(factors):
    return ProductRing(make_ring(f) for f in factors)


def integers():
    return IntegerRing()


def poly_ring(p):
    return LazyPolyRing(p)


def table_ring(add_table, mul_table, name=None):
    return TableRing(add_table, mul_table, name)


# ---------------------------------------------------------------------------
# quotients


def quotient_ring(ring, ideal):
    """Quotient of a finite ring by a verified two-sided ideal.

    ``ideal`` is any iterable of elements of ``ring``.  Checks that it is
    an additive subgroup with r*I and I*r inside I (raising NotAnIdealError
    with a violating pair otherwise), then returns ``(quotient, project)``
    where the quotient is table-backed and ``project`` maps elements to
    quotient elements.  The projection is re-verified exhaustively to be
    a ring homomorphism.
    """
    if not ring.is_finite:
        raise InfiniteRingError("quotients need a finite ring")
    ideal_set = frozenset(ideal)
    if not ideal_set:
        raise NotAnIdealError("ideal must contain 0", None)
    zero = ring.zero()
    if zero not in ideal_set:
        raise NotAnIdealError("ideal does not contain 0", zero)
    for a in ideal_set:
        if ring.neg(a) not in ideal_set:
            raise NotAnIdealError(f"not closed under negation at {ring.render(a)}", (a,))
        for b in ideal_set:
            if ring.add(a, b) not in ideal_set:
                raise NotAnIdealError(
                    f"not closed under addition at ({ring.render(a)},{ring.render(b)})",
                    (a, b))
    for r in ring.elements():
        for a in ideal_set:
            if ring.mul(r, a) not in ideal_set:
                raise NotAnIdealError(
                    f"not absorbing on the left at ({ring.render(r)},{ring.render(a)})",
                    (r, a))
            if ring.mul(a, r) not in ideal_set:
                raise NotAnIdealError(
                    f"not absorbing on the right at ({ring.render(a)},{ring.render(r)})",
                    (a, r))

    coset_of = {}
    reps = []
    for x in ring.elements():
        if x in coset_of:
            continue
        cid = len(reps)
        reps.append(x)
        for i in ideal_set:
            coset_of[ring.add(x, i)] = cid
    q = len(reps)
    add = [[coset_of[ring.add(reps[i], reps[j])] for j in range(q)] for i in range(q)]
    mul = [[coset_of[ring.mul(reps[i], reps[j])] for j in range(q)] for i in range(q)]
    quotient = TableRing(add, mul, name=f"{ring.descriptor}/|I|={len(ideal_set)}")

    def project(x):
        return coset_of[x]

    for x in ring.elements():
        for y in ring.elements():
            if project(ring.add(x, y)) != quotient.add(project(x), project(y)):
                raise NotAnIdealError("projection not additive", (x, y))
            if project(ring.mul(x, y)) != quotient.mul(project(x), project(y)):
                raise NotAnIdealError("projection not multiplicative", (x, y))
    return quotient, project


def subring_table(ring, subset):
    """Table-backed handle for a finite subring, plus both element maps.

    Returns ``(handle, embed, restrict)`` where ``restrict`` maps ambient
    elements inside ``subset`` to handle elements and ``embed`` inverts it.
    Raises NotAnIdealError-style construction errors via TableRing when
    the subset is not closed.
    """
    elems = sorted(subset, key=ring.sort_key)
    if not elems or elems[0] != ring.zero():
        elems = [ring.zero()] + [e for e in elems if e != ring.zero()]
    pos = {e: i for i, e in enumerate(elems)}
    n = len(elems)

    def look(x, op):
        if x not in pos:
            raise RingConstructionError(
                f"subset not closed under {op} (escapes at {ring.render(x)})")
        return pos[x]

    add = [[look(ring.add(a, b), "addition") for b in elems] for a in elems]
    mul = [[look(ring.mul(a, b), "multiplication") for b in elems] for a in elems]
    handle = TableRing(add, mul, name=f"sub({ring.descriptor},n={n})")

    def embed(i):
        return elems[i]

    def restrict(x):
        return pos[x]

    return handle, embed, restrict


# ---------------------------------------------------------------------------
# axiom spot checks (used by tests and make_ring validation helpers)


def check_ring_axioms(ring, rng=None):
    """Raise if sampled triples violate the ring axioms.

    Exhaustive when |R| <= 512 (over precomputed index tables, so the
    n^3 loop stays cheap); otherwise 10^4 pseudorandom triples (a seeded
    Random must be supplied for the sampled path).
    """
    if ring.is_finite and ring.cardinality <= _AXIOM_EXHAUSTIVE:
        n = ring.cardinality
        pool = list(ring.elements())
        add = [[ring.index_of(ring.add(a, b)) for b in pool] for a in pool]
        mul = [[ring.index_of(ring.mul(a, b)) for b in pool] for a in pool]
        rng_n = range(n)
        for i in rng_n:
            row_a, row_m = add[i], mul[i]
            for j in rng_n:
                aij, mij = row_a[j], row_m[j]
                if aij != add[j][i]:
                    raise AssertionError(f"add not commutative at {i},{j}")
                arow_j, mrow_j = add[j], mul[j]
                for k in rng_n:
                    if add[aij][k] != row_a[arow_j[k]]:
                        raise AssertionError(f"add not associative at {i},{j},{k}")
                    if mul[mij][k] != row_m[mrow_j[k]]:
                        raise AssertionError(f"mul not associative at {i},{j},{k}")
                    if row_m[arow_j[k]] != add[row_m[j]][row_m[k]]:
                        raise AssertionError(
                            f"left distributivity fails at {i},{j},{k}")
                    if mul[aij][k] != add[row_m[k]][mul[j][k]]:
                        raise AssertionError(
                            f"right distributivity fails at {i},{j},{k}")
        zero = ring.zero()
        zero_idx = ring.index_of(zero)
        for i, x in enumerate(pool):
            if zero_idx not in add[i]:
                raise AssertionError(f"no additive inverse at index {i}")
            if ring.add(x, ring.neg(x)) != zero:
                raise AssertionError(f"neg fails at {x}")
        return
    else:
        if rng is None:
            raise ValueError("sampled axiom check needs a seeded Random")
        if ring.is_finite:
            def draw():
                return ring.element_at(rng.randrange(ring.cardinality))
        else:
            sample = list(itertools.islice(ring.sample_stream(), 200))

            def draw():
                return rng.choice(sample)
        triples = ((draw(), draw(), draw()) for _ in range(_AXIOM_SAMPLE))
    zero = ring.zero()
    for a, b, c in triples:
        if ring.add(a, b) != ring.add(b, a):
            raise AssertionError(f"add not commutative at {a},{b}")
        if ring.add(ring.add(a, b), c) != ring.add(a, ring.add(b, c)):
            raise AssertionError(f"add not associative at {a},{b},{c}")
        if ring.mul(ring.mul(a, b), c) != ring.mul(a, ring.mul(b, c)):
            raise AssertionError(f"mul not associative at {a},{b},{c}")
        if ring.mul(a, ring.add(b, c)) != ring.add(ring.mul(a, b), ring.mul(a, c)):
            raise AssertionError(f"left distributivity fails at {a},{b},{c}")
        if ring.mul(ring.add(a, b), c) != ring.add(ring.mul(a, c), ring.mul(b, c)):
            raise AssertionError(f"right distributivity fails at {a},{b},{c}")
        if ring.add(a, ring.neg(a)) != zero:
            raise AssertionError(f"neg fails at {a}")
