"""Exact arithmetic in F_q, F_{q^m} and A = F_q[T].

Finite fields are built from a shipped table of Conway polynomials; elements
are encoded as integers whose base-p digits are the coordinates in the
polynomial basis 1, x, x^2, ... of that field.  Polynomials in A store their
coefficients low-to-high as such integers.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError

# (p, n) -> coefficients of the Conway polynomial, low-to-high, monic.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (11, 1): (9, 1),
    (11, 2): (2, 7, 1),
    (13, 1): (11, 1),
    (13, 2): (2, 12, 1),
}

MAX_FIELD_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, s) with q = p^s, or raise DomainError."""
    if q < 2:
        raise DomainError(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    s, rest = 0, q
    while rest % p == 0:
        rest //= p
        s += 1
    if rest != 1:
        raise DomainError(f"q={q} is not a prime power")
    return p, s


class GF:
    """The finite field with p^n elements, elements encoded as ints 0..p^n-1."""

    def __init__(self, p: int, n: int = 1):
        if not is_prime(p):
            raise DomainError(f"p={p} is not prime")
        if (p, n) not in CONWAY:
            raise DomainError(f"no irreducible polynomial shipped for GF({p}^{n})")
        self.p, self.n = p, n
        self.order = p ** n
        self.modulus = CONWAY[(p, n)]
        if self.order > MAX_FIELD_ORDER:
            raise DomainError(f"field of order {self.order} is too large")
        self._pw = [p ** i for i in range(n + 1)]
        size = self.order - 1
        exp = [0] * (2 * size)
        log = [-1] * self.order
        cur = 1
        for i in range(size):
            if log[cur] != -1:
                raise DomainError(f"shipped polynomial for GF({p}^{n}) is not primitive")
            exp[i] = cur
            log[cur] = i
            cur = self._times_x(cur)
        if cur != 1:
            raise DomainError(f"shipped polynomial for GF({p}^{n}) is not primitive")
        for i in range(size, 2 * size):
            exp[i] = exp[i - size]
        self._exp, self._log = exp, log

    def _times_x(self, a: int) -> int:
        p, n = self.p, self.n
        if n == 1:
            return (a * (-self.modulus[0])) % p
        d = self.digits(a)
        top = d[-1]
        shifted = [0] + list(d[:-1])
        out = [(shifted[i] - top * self.modulus[i]) % p for i in range(n)]
        return self.from_digits(out)

    # -- encoding -----------------------------------------------------------
    def digits(self, a: int) -> tuple:
        out = []
        for _ in range(self.n):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, d) -> int:
        return sum(int(c) % self.p * w for c, w in zip(d, self._pw))

    # -- arithmetic ---------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_digits(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.n == 1:
            return (a * b) % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        if self.n == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.order - 1)]

    def frob(self, a: int, k: int = 1) -> int:
        """a^(p^k)."""
        return self.pow(a, self.p ** k)

    def generator(self) -> int:
        return self._exp[1] if self.order > 2 else 1

    def log(self, a: int) -> int:
        return self._log[a]

    def exp(self, i: int) -> int:
        return self._exp[i % (self.order - 1)]

    def elements(self) -> range:
        """All elements in the fixed canonical order (by integer code)."""
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    def mul_matrix(self, c: int) -> list:
        """Matrix over F_p of multiplication by c in the polynomial basis;
        column j holds the digits of c * x^j."""
        cols = [self.digits(self.mul(c, self._pw[j] if self.n > 1 else 1)) for j in range(self.n)]
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.n})"


@lru_cache(maxsize=None)
def galois_field(p: int, n: int = 1) -> GF:
    return GF(p, n)


@dataclass(frozen=True)
class FqConfig:
    """q = p^s and the extension degree m of the residue field F_{q^m}."""

    p: int
    s: int = 1
    m: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"p={self.p} is not prime")
        if self.s < 1 or self.m < 1:
            raise DomainError("s and m must be positive")
        galois_field(self.p, self.s)
        galois_field(self.p, self.s * self.m)

    @classmethod
    def from_q(cls, q: int, m: int = 1) -> "FqConfig":
        p, s = prime_power(q)
        return cls(p, s, m)

    @property
    def q(self) -> int:
        return self.p ** self.s

    @property
    def base(self) -> GF:
        return galois_field(self.p, self.s)

    @property
    def ext(self) -> GF:
        return galois_field(self.p, self.s * self.m)

    def embed(self, a: int) -> int:
        """Image of a in F_q under the fixed embedding F_q -> F_{q^m}."""
        return _embedding_table(self.p, self.s, self.m)[a]

    def restrict(self, b: int) -> int:
        """Inverse of embed on its image."""
        table = _embedding_table(self.p, self.s, self.m)
        try:
            return table.index(b)
        except ValueError:
            raise DomainError(f"{b} is not in the base field") from None


@lru_cache(maxsize=None)
def _embedding_table(p: int, s: int, m: int) -> tuple:
    base, ext = galois_field(p, s), galois_field(p, s * m)
    if m == 1:
        return tuple(range(base.order))
    step = (ext.order - 1) // (base.order - 1)
    # With compatible tables j = 1 works; the search only guards against a bad entry.
    for j in range(1, base.order):
        zeta = ext.exp(step * j)
        val = 0
        for c in reversed(base.modulus):
            val = ext.add(ext.mul(val, zeta), c % p if c else 0)
        if val == 0:
            break
    else:
        raise DomainError("cannot embed the base field")
    table = [0] * base.order
    for a in range(1, base.order):
        table[a] = ext.pow(zeta, base.log(a)) if base.order > 2 else 1
    return tuple(table)


# ---------------------------------------------------------------------------
# Polynomials over F_q
# ---------------------------------------------------------------------------


class APoly:
    """Element of F_q[T], coefficients low-to-high with no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs=()):
        c = [int(x) % field.order if field.n == 1 else int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, field: GF) -> "APoly":
        return cls(field, ())

    @classmethod
    def one(cls, field: GF) -> "APoly":
        return cls(field, (1,))

    @classmethod
    def const(cls, field: GF, c: int) -> "APoly":
        return cls(field, (c,))

    @classmethod
    def T(cls, field: GF, k: int = 1) -> "APoly":
        return cls(field, (0,) * k + (1,))

    @classmethod
    def parse(cls, field: GF, text: str) -> "APoly":
        """Parse strings like ``T^2+2*T+1`` (prime fields) or a JSON-ish list."""
        text = text.replace(" ", "")
        if text.startswith("["):
            return cls(field, [int(x) for x in text.strip("[]").split(",") if x != ""])
        total = cls.zero(field)
        for term in text.replace("-", "+-").split("+"):
            if not term:
                continue
            sign = 1
            if term.startswith("-"):
                sign, term = -1, term[1:]
            coef, _, mono = term.partition("*") if "*" in term else (
                ("1", "", term) if "T" in term else (term, "", ""))
            if not mono:
                deg = 0
            elif mono == "T":
                deg = 1
            elif mono.startswith("T^"):
                deg = int(mono[2:])
            else:
                raise DomainError(f"cannot parse polynomial term {term!r}")
            c = int(coef) * sign
            if field.n == 1:
                c %= field.p
            elif c < 0:
                c = field.neg(-c)
            total = total + cls(field, (0,) * deg + (c,))
        return total

    # -- basic properties ---------------------------------------------------
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1 (standing in for -infinity)."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "APoly":
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.lc()))

    def key(self) -> tuple:
        """Canonical sort key: degree first, then coefficients low-to-high."""
        return (self.degree(), self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, APoly) and self.coeffs == other.coeffs and \
            self.field.order == other.field.order

    def __hash__(self) -> int:
        return hash((self.field.order, self.coeffs))

    def __lt__(self, other: "APoly") -> bool:
        return self.key() < other.key()

    def __repr__(self) -> str:
        return f"APoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts)

    def to_json(self) -> list:
        return list(self.coeffs)

    # -- ring operations ----------------------------------------------------
    def __add__(self, other: "APoly") -> "APoly":
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return APoly(f, out)

    def __neg__(self) -> "APoly":
        return APoly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: "APoly") -> "APoly":
        return self + (-other)

    def __mul__(self, other: "APoly") -> "APoly":
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return APoly(f, ())
        out = [0] * (len(a) + len(b) - 1)
        if f.n == 1:
            p = f.p
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return APoly(f, [c % p for c in out])
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
        return APoly(f, out)

    def scale(self, c: int) -> "APoly":
        return APoly(self.field, [self.field.mul(c, x) for x in self.coeffs])

    def shift(self, k: int) -> "APoly":
        """Multiply by T^k."""
        if not self.coeffs:
            return self
        return APoly(self.field, (0,) * k + self.coeffs)

    def __pow__(self, k: int) -> "APoly":
        result = APoly.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "APoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        db = other.degree()
        inv_lc = f.inv(other.lc())
        quot = [0] * max(0, len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            t = f.mul(c, inv_lc)
            quot[i - db] = t
            for j, y in enumerate(other.coeffs):
                rem[i - db + j] = f.sub(rem[i - db + j], f.mul(t, y))
        return APoly(f, quot), APoly(f, rem[:db] if db > 0 else [])

    def __mod__(self, other: "APoly") -> "APoly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "APoly") -> "APoly":
        return divmod(self, other)[0]

    def divides(self, other: "APoly") -> bool:
        return (other % self).is_zero()

    def derivative(self) -> "APoly":
        f = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            c = self.coeffs[i]
            k = i % f.p
            out.append(0 if k == 0 else f.mul(c, k % f.order if f.n == 1 else _int_in_field(f, k)))
        return APoly(f, out)

    def powmod(self, k: int, mod: "APoly") -> "APoly":
        result = APoly.one(self.field) % mod
        base = self % mod
        while k:
            if k & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            k >>= 1
        return result

    def evaluate(self, x: int) -> int:
        f = self.field
        val = 0
        for c in reversed(self.coeffs):
            val = f.add(f.mul(val, x), c)
        return val


def _int_in_field(f: GF, k: int) -> int:
    """The image of the integer k in F (it lies in the prime field)."""
    return k % f.p


def gcd(a: APoly, b: APoly) -> APoly:
    """Monic gcd (zero if both inputs vanish)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: APoly, b: APoly):
    """Return (g, s, t) with g = s*a + t*b monic."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = APoly.one(f), APoly.zero(f)
    t0, t1 = APoly.zero(f), APoly.one(f)
    while not r1.is_zero():
        qt, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0.is_zero():
        return r0, s0, t0
    c = f.inv(r0.lc())
    return r0.scale(c), s0.scale(c), t0.scale(c)


def inverse_mod(a: APoly, n: APoly) -> APoly:
    g, s, _ = xgcd(a % n, n)
    if g.degree() != 0:
        raise DomainError(f"{a} is not invertible modulo {n}")
    return s % n


def polys_below(field: GF, d: int):
    """All polynomials of degree < d in canonical order."""
    out = []
    for deg in range(-1, d):
        out.extend(polys_of_degree(field, deg))
    return out


def polys_of_degree(field: GF, deg: int, monic_only: bool = False):
    if deg < 0:
        return [APoly.zero(field)]
    tops = [1] if monic_only else list(field.units())
    out = []
    for top in tops:
        for low in itertools.product(field.elements(), repeat=deg):
            out.append(APoly(field, low + (top,)))
    out.sort(key=APoly.key)
    return out


def monic_polys(field: GF, deg: int):
    return polys_of_degree(field, deg, monic_only=True)


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    unit: int
    factors: tuple  # ((APoly monic irreducible, multiplicity), ...)

    def expand(self, field: GF) -> APoly:
        out = APoly.const(field, self.unit)
        for g, k in self.factors:
            out = out * g ** k
        return out


def _squarefree_parts(f: APoly):
    """Yield (g, k) with f = prod g^k, each g squarefree (not nec. irreducible)."""
    fld = f.field
    p = fld.p
    out = []
    i = 1
    if f.degree() < 1:
        return out
    df = f.derivative()
    if df.is_zero():
        root = _pth_root(f)
        return [(g, k * p) for g, k in _squarefree_parts(root)]
    c = gcd(f, df)
    w = f // c
    while w.degree() > 0:
        y = gcd(w, c)
        fac = w // y
        if fac.degree() > 0:
            out.append((fac, i))
        w, c = y, c // y
        i += 1
    if c.degree() > 0:
        root = _pth_root(c)
        out.extend((g, k * p) for g, k in _squarefree_parts(root))
    return out


def _pth_root(f: APoly) -> APoly:
    fld = f.field
    p = fld.p
    # In F_q every element has a unique p-th root: a^(p^(s-1)).
    coeffs = [fld.pow(f.coeffs[i], fld.order // p) for i in range(0, len(f.coeffs), p)]
    return APoly(fld, coeffs)


def _distinct_degree(f: APoly):
    fld = f.field
    q = fld.order
    X = APoly.T(fld)
    out = []
    h = X % f
    d = 0
    rest = f
    while rest.degree() >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, rest)
        g = gcd(h - X, rest)
        if g.degree() > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.degree() > 0:
        out.append((rest, rest.degree()))
    return out


def _equal_degree(f: APoly, d: int, rng: random.Random):
    fld = f.field
    if f.degree() == d:
        return [f]
    q = fld.order
    n = f.degree()
    while True:
        a = APoly(fld, [rng.randrange(q) for _ in range(n)])
        if a.degree() < 1:
            continue
        if fld.p == 2:
            # trace map from F_{q^d} down to F_2
            t = a % f
            acc = t
            for _ in range(fld.n * d - 1):
                t = (t * t) % f
                acc = acc + t
            g = gcd(acc, f)
        else:
            g = gcd(a.powmod((q ** d - 1) // 2, f) - APoly.one(fld), f)
        if 0 < g.degree() < n:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor(f: APoly, seed: int = 0) -> Factorization:
    """Factor f into a unit times monic irreducibles; factors sorted canonically."""
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    fld = f.field
    unit = f.lc()
    g = f.monic()
    rng = random.Random(seed)
    mult: dict = {}
    for part, k in _squarefree_parts(g):
        for block, d in _distinct_degree(part):
            for irr in _equal_degree(block, d, rng):
                irr = irr.monic()
                mult[irr] = mult.get(irr, 0) + k
    factors = tuple(sorted(mult.items(), key=lambda t: t[0].key()))
    return Factorization(unit, factors)


def is_irreducible(f: APoly) -> bool:
    if f.degree() < 1:
        return False
    fac = factor(f)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1


def mobius(a: APoly) -> int:
    if a.is_zero():
        raise DomainError("Moebius function of zero")
    fac = factor(a)
    if any(k > 1 for _, k in fac.factors):
        return 0
    return -1 if len(fac.factors) % 2 else 1


def monic_divisors(a: APoly) -> list:
    if a.is_zero():
        raise DomainError("divisors of zero")
    fld = a.field
    divs = [APoly.one(fld)]
    for g, k in factor(a).factors:
        divs = [d * g ** j for d in divs for j in range(k + 1)]
    return sorted(divs, key=APoly.key)


def units_mod(N: APoly) -> list:
    """Representatives of (A/N)^*, canonical order."""
    return [a for a in polys_below(N.field, N.degree()) if not a.is_zero()
            and gcd(a, N).degree() == 0]


# ---------------------------------------------------------------------------
# Residue vectors
# ---------------------------------------------------------------------------


def vector_key(vec) -> tuple:
    return tuple(v.key() for v in vec)


def is_primitive_mod(vec, N: APoly) -> bool:
    g = N
    for v in vec:
        g = gcd(g, v)
        if g.degree() == 0:
            return True
    return g.degree() == 0


def primitive_monic_reps(N: APoly, r: int) -> list:
    """The set S: one monic representative per F^*-orbit of primitive vectors
    in (A/N)^r, sorted by vector_key."""
    if N.degree() < 1:
        raise DomainError("level must have positive degree")
    if r < 1:
        raise DomainError("rank must be positive")
    N = N.monic()
    residues = polys_below(N.field, N.degree())
    out = []
    for vec in itertools.product(residues, repeat=r):
        first = next((v for v in vec if not v.is_zero()), None)
        if first is None or not first.is_monic():
            continue
        if is_primitive_mod(vec, N):
            out.append(vec)
    out.sort(key=vector_key)
    return out


@dataclass(frozen=True)
class CongClass:
    """u = numerators / level in (N^-1 A / A)^r."""

    level: APoly
    numerators: tuple

    def __post_init__(self):
        if self.level.degree() < 1 or not self.level.is_monic():
            raise DomainError("level must be monic of positive degree")
        red = tuple(n % self.level for n in self.numerators)
        object.__setattr__(self, "numerators", red)

    @property
    def rank(self) -> int:
        return len(self.numerators)

    def is_zero(self) -> bool:
        return all(n.is_zero() for n in self.numerators)

    def scale(self, t: APoly) -> "CongClass":
        return CongClass(self.level, tuple(n * t for n in self.numerators))

    def act(self, gamma) -> "CongClass":
        """Row vector u times the matrix gamma (rows of APoly)."""
        r = self.rank
        out = []
        for j in range(r):
            acc = APoly.zero(self.level.field)
            for i in range(r):
                acc = acc + self.numerators[i] * gamma[i][j]
            out.append(acc)
        return CongClass(self.level, tuple(out))

    def key(self) -> tuple:
        return (self.level.key(), vector_key(self.numerators))

    def to_json(self) -> dict:
        return {"level": self.level.to_json(), "numerators": [n.to_json() for n in self.numerators]}

    def __str__(self) -> str:
        return "(" + ", ".join(f"({n})/({self.level})" for n in self.numerators) + ")"


def all_classes(N: APoly, r: int, include_zero: bool = False) -> list:
    residues = polys_below(N.field, N.degree())
    out = [CongClass(N, vec) for vec in itertools.product(residues, repeat=r)]
    if not include_zero:
        out = [u for u in out if not u.is_zero()]
    return out


@lru_cache(maxsize=None)
def ext_coordinates(p: int, s: int, m: int) -> tuple:
    """Table code -> coordinates (as F_q codes) in the basis 1, xi, ..., xi^(m-1)
    of F_{q^m} over F_q, xi the fixed primitive element."""
    cfg = FqConfig(p, s, m)
    base, ext = cfg.base, cfg.ext
    xi = ext.generator()
    powers = [ext.pow(xi, a) for a in range(m)]
    table = [None] * ext.order
    for coords in itertools.product(base.elements(), repeat=m):
        val = 0
        for c, w in zip(coords, powers):
            val = ext.add(val, ext.mul(cfg.embed(c), w))
        table[val] = coords
    return tuple(table)
