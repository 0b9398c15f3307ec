"""Exponential coefficients, Drinfeld modules, division polynomials and Goss
polynomials of a lattice, each computable along two independent routes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arithmetic import APoly, CongClass, all_classes
from .eisenstein import LatticeContext, context, eisenstein_full, eisenstein_partial_many, lattice_exp
from .errors import DomainError, PrecisionError
from .series import EXACT_ZERO_PREC, FieldSpec, SeriesElem

# alpha_k = SIGN * sum_{i<k} alpha_i * E_{q^(k-i)-1}^(q^i).  Fixed by comparison
# with the product expansion (see tests): with E_0 = -1 the identity reads
# sum_{i+j=k} alpha_i E_{q^j-1}^(q^i) = -1 for k = 0 and 0 otherwise.
SIGN = 1


@dataclass(frozen=True)
class AdditivePoly:
    """sum_i coeffs[i] * X^(q^i)."""

    coeffs: tuple
    q: int

    @property
    def spec(self) -> FieldSpec:
        return self.coeffs[0].spec

    @property
    def q_degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def scalar(cls, c: SeriesElem, q: int) -> "AdditivePoly":
        return cls((c,), q)

    def __add__(self, other: "AdditivePoly") -> "AdditivePoly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else None
            b = other.coeffs[i] if i < len(other.coeffs) else None
            out.append(a if b is None else b if a is None else a + b)
        return AdditivePoly(tuple(out), self.q)

    def compose(self, other: "AdditivePoly") -> "AdditivePoly":
        """(self o other)_k = sum_{i+j=k} self_i * other_j^(q^i)."""
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, f in enumerate(self.coeffs):
            for j, g in enumerate(other.coeffs):
                term = f * g.frobenius_pow(i)
                out[i + j] = term if out[i + j] is None else out[i + j] + term
        return AdditivePoly(tuple(out), self.q)

    def __call__(self, x: SeriesElem) -> SeriesElem:
        total = None
        for i, c in enumerate(self.coeffs):
            term = c * x.frobenius_pow(i)
            total = term if total is None else total + term
        return total

    def truncate(self, prec: int) -> "AdditivePoly":
        return AdditivePoly(tuple(c.truncate(prec) for c in self.coeffs), self.q)

    @property
    def prec(self) -> int:
        return min(c.prec for c in self.coeffs)

    def to_json(self) -> dict:
        return {"q": self.q, "coeffs": [c.to_json() for c in self.coeffs]}


@dataclass(frozen=True)
class ExpCoeffs:
    alphas: tuple
    n: int
    method: str
    tail_bounds: tuple     # valuation bound of the discarded part of each alpha_i (None: exact)
    radius: Fraction | None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "method": self.method,
            "radius": None if self.radius is None else str(self.radius),
            "tail_bounds": [None if t is None else str(t) for t in self.tail_bounds],
            "alphas": [a.to_json() for a in self.alphas],
        }


@dataclass(frozen=True)
class GossPoly:
    """G_k(X) = sum_j coeffs[j] X^j (coeffs[0] = 0)."""

    k: int
    coeffs: tuple

    def __call__(self, x: SeriesElem) -> SeriesElem:
        total = None
        for c in reversed(self.coeffs):
            total = c if total is None else total * x + c
        return total

    def to_json(self) -> dict:
        return {"k": self.k, "coeffs": [c.to_json() for c in self.coeffs]}


# ---------------------------------------------------------------------------
# Exponential coefficients
# ---------------------------------------------------------------------------


def _alphas_on_ball(ball, n: int, spec: FieldSpec):
    """Coefficients alpha_0..alpha_n of e_V through the factor chain."""
    q = ball.q
    W = max(b.prec for b in ball.basis) if ball.basis else EXACT_ZERO_PREC
    alphas = [SeriesElem.one(spec, W)] + [SeriesElem.zero(spec, EXACT_ZERO_PREC)] * n
    factors = []
    for b in ball.basis:
        beta = b
        for f in factors:
            beta = beta - beta.frobenius_pow(1) * f
        if beta.is_zero():
            raise PrecisionError("lattice basis vector collapses in the exponential chain")
        f = beta.inverse() ** (q - 1)
        factors.append(f)
        for i in range(n, 0, -1):
            alphas[i] = alphas[i] - f * alphas[i - 1].frobenius_pow(1)
    return alphas


def exp_coeffs(frame, n: int, method: str, P: int) -> ExpCoeffs:
    """alpha_0..alpha_n of e_Lambda to absolute precision P (u-digits)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    ctx = context(frame)
    spec = ctx.spec
    if method == "product":
        return _exp_product(ctx, n, P)
    if method == "eisenstein":
        return _exp_eisenstein(ctx, n, P)
    raise DomainError(f"unknown method {method!r}")


def _exp_product(ctx: LatticeContext, n: int, P: int) -> ExpCoeffs:
    spec = ctx.spec
    e = spec.e
    need = Fraction(P, e)
    for _ in range(64):
        ball = ctx.ball(need)
        tails = [None] + [ball.exp_tail(i) for i in range(1, n + 1)]
        short = [t for t in tails[1:] if t * e < P]
        if not short:
            break
        need = ball.bound + Fraction(1, e)
    else:
        raise PrecisionError("exponential tail bound does not reach the requested precision")
    alphas = _alphas_on_ball(ball, n, spec)
    out = [alphas[0].truncate(P)]
    for i in range(1, n + 1):
        a = alphas[i]
        if a.prec < P:
            raise PrecisionError(f"alpha_{i} known only to u^{a.prec} < u^{P}")
        out.append(a.truncate(P))
    return ExpCoeffs(tuple(out), n, "product", tuple(tails), ball.rho)


def _exp_eisenstein(ctx: LatticeContext, n: int, P: int) -> ExpCoeffs:
    spec = ctx.spec
    q = spec.q
    work = P
    for _ in range(8):
        E = {j: eisenstein_full(ctx, q ** j - 1, work) for j in range(1, n + 1)}
        alphas = [SeriesElem.one(spec, max(v.value.prec for v in E.values()) + work)]
        for k in range(1, n + 1):
            total = None
            for i in range(k):
                term = alphas[i] * E[k - i].value.frobenius_pow(i)
                total = term if total is None else total + term
            alphas.append(total if SIGN == 1 else -total)
        worst = min(a.prec for a in alphas)
        if worst >= P:
            tails = (None,) + tuple(min(E[j].tail_bound for j in range(1, i + 1)) for i in range(1, n + 1))
            return ExpCoeffs(tuple(a.truncate(P) for a in alphas), n, "eisenstein", tails,
                             max((v.radius for v in E.values() if v.radius is not None), default=None))
        work += P - worst + 4
    raise PrecisionError("recursion from Eisenstein series lost too much precision")


# ---------------------------------------------------------------------------
# Drinfeld module phi_T
# ---------------------------------------------------------------------------


def drinfeld_from_alphas(alphas, r: int) -> AdditivePoly:
    """g_0 = T and g_k = alpha_k T^(q^k) - T alpha_k - sum_{0<i<k} g_i alpha_{k-i}^(q^i)."""
    spec = alphas[0].spec
    q = spec.q
    fld = spec.config.base
    T = APoly.T(fld)
    g = [SeriesElem.from_apoly(spec, T, max(a.prec for a in alphas))]
    for k in range(1, r + 1):
        val = alphas[k].mul_apoly(T ** (q ** k)) - alphas[k].mul_apoly(T)
        for i in range(1, k):
            val = val - g[i] * alphas[k - i].frobenius_pow(i)
        g.append(val)
    return AdditivePoly(tuple(g), q)


def functional_residuals(phi: AdditivePoly, alphas) -> list:
    """alpha_k T^(q^k) - sum_{i+j=k} g_i alpha_j^(q^i) for k = 0..len(alphas)-1."""
    spec = alphas[0].spec
    q = spec.q
    T = APoly.T(spec.config.base)
    out = []
    for k in range(len(alphas)):
        val = alphas[k].mul_apoly(T ** (q ** k))
        for i in range(0, min(k, phi.q_degree) + 1):
            val = val - phi.coeffs[i] * alphas[k - i].frobenius_pow(i)
        out.append(val)
    return out


def alpha_precision_for(P: int, spec: FieldSpec, n: int) -> int:
    """Absolute precision of alpha_0..alpha_n so that alpha_k T^(q^k) is known to u^P."""
    return P + spec.e * spec.q ** n + 2 * spec.e


def drinfeld_coeffs(frame, P: int, method: str = "product") -> AdditivePoly:
    """phi_T = T X + g_1 X^q + ... + g_r X^(q^r)."""
    ctx = context(frame)
    r = ctx.rank
    alphas = exp_coeffs(ctx, r, method, alpha_precision_for(P, ctx.spec, r)).alphas
    phi = drinfeld_from_alphas(alphas, r)
    if phi.coeffs[-1].is_zero():
        raise PrecisionError("top Drinfeld coefficient vanishes to precision")
    return phi.truncate(max(P, min(c.prec for c in phi.coeffs)))


def division_poly(phi_T: AdditivePoly, N: APoly) -> AdditivePoly:
    """phi_N from phi_T via phi_{T a + c} = phi_T o phi_a + c (Horner)."""
    if N.is_zero():
        raise DomainError("division polynomial of zero")
    spec = phi_T.spec
    q = phi_T.q
    cfg = spec.config

    def const(c):
        return AdditivePoly.scalar(SeriesElem.monomial(spec, cfg.embed(c), 0, W)
                                   if c else SeriesElem.zero(spec, EXACT_ZERO_PREC), q)

    W = max(c.prec for c in phi_T.coeffs)
    coeffs = N.coeffs
    acc = const(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = phi_T.compose(acc) + const(c)
    return acc


def division_point(frame, u: CongClass, P: int) -> SeriesElem:
    """d_u = e_Lambda(u * omega)."""
    ctx = context(frame)
    z = ctx.translate(u, P + 8 * ctx.spec.e)
    if z is None:
        raise DomainError("u must be nonzero modulo A^r")
    return lattice_exp(ctx, z, P)


# ---------------------------------------------------------------------------
# Goss polynomials
# ---------------------------------------------------------------------------


def goss_polys(alphas, kmax: int) -> list:
    """[G_0, ..., G_kmax] with G_k = X (G_{k-1} + alpha_1 G_{k-q} + alpha_2 G_{k-q^2} + ...)."""
    spec = alphas[0].spec
    q = spec.q
    zero = SeriesElem.zero(spec, EXACT_ZERO_PREC)
    G = [[zero]]
    for k in range(1, kmax + 1):
        inner = [zero] * k
        for j, c in enumerate(G[k - 1]):
            inner[j] = inner[j] + c
        i = 1
        while k - q ** i >= 1:
            if i >= len(alphas):
                raise DomainError(f"Goss polynomial G_{k} needs alpha_{i}")
            for j, c in enumerate(G[k - q ** i]):
                inner[j] = inner[j] + alphas[i] * c
            i += 1
        if k == 1:
            inner = [SeriesElem.one(spec, max(a.prec for a in alphas))]
        G.append([zero] + inner)
    return [GossPoly(k, tuple(c)) for k, c in enumerate(G)]


def goss_poly(frame, k: int, P: int) -> GossPoly:
    if k < 1:
        raise DomainError("k must be positive")
    ctx = context(frame)
    q = ctx.spec.q
    n = 0
    while q ** (n + 1) <= k - 1:
        n += 1
    alphas = exp_coeffs(ctx, max(n, 1), "product", P).alphas
    return goss_polys(alphas, k)[k]


# ---------------------------------------------------------------------------
# Polynomials in X with series coefficients (division product identity)
# ---------------------------------------------------------------------------


def product_poly(N: APoly, values, spec: FieldSpec) -> list:
    """Coefficients (low to high in X) of N X prod (1 - v X)."""
    poly = [SeriesElem.one(spec, max(v.prec for v in values))]
    for v in values:
        nxt = poly + [SeriesElem.zero(spec, EXACT_ZERO_PREC)]
        for j in range(len(poly)):
            nxt[j + 1] = nxt[j + 1] - v * poly[j]
        poly = nxt
    return [SeriesElem.zero(spec, EXACT_ZERO_PREC)] + [c.mul_apoly(N) for c in poly]


def elementary_symmetric(values, upto: int, spec: FieldSpec) -> list:
    """[s_0, ..., s_upto] of the given values."""
    s = [SeriesElem.one(spec, max(v.prec for v in values))] + [SeriesElem.zero(spec, EXACT_ZERO_PREC)] * upto
    for v in values:
        for j in range(upto, 0, -1):
            s[j] = s[j] + v * s[j - 1]
    return s
