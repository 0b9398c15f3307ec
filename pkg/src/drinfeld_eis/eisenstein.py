"""Certified evaluation of Eisenstein series attached to A-lattices.

Lattice sums are split into a finite ball V (all lattice points of norm at
most q^rho, an F_q-vector space) and the remaining cosets.  For c outside V
every element of c + V has norm >= q^rho', so

    log_q |e_V(c)| >= B := rho' + sum_{mu in V, mu != 0} (rho' - log_q|mu|),

and a coset contributes G_{k,V}(1/e_V(c)), whose valuation is at least
B + (k-1) * min(B, w_min) with w_min the smallest norm exponent in V.  The
ball grows until that bound passes the requested precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arithmetic import (APoly, CongClass, gcd, inverse_mod, polys_below,
                         primitive_monic_reps, units_mod)
from .errors import DomainError, PrecisionError
from .lattice import (Ball, GammaMatrix, LatticeFrame, SMBCertificate, ball_for_bound, fixed_ball,
                      smb_reduce)
from .series import FieldSpec, SeriesElem, invert_units, power_rows


@dataclass(frozen=True)
class EisenValue:
    value: SeriesElem
    k: int
    tail_bound: Fraction | None   # valuation bound of the discarded tail; None if exact
    D_used: int                   # largest T-degree of a ball generator
    radius: Fraction | None       # log_q of the ball radius

    @property
    def exact(self) -> bool:
        return self.tail_bound is None

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "tail_bound": None if self.tail_bound is None else str(self.tail_bound),
            "D_used": self.D_used,
            "radius": None if self.radius is None else str(self.radius),
            "value": self.value.to_json(),
        }


class LatticeContext:
    """A frame together with its reduced basis and cached balls."""

    def __init__(self, frame: LatticeFrame):
        self.frame = frame
        self.cert: SMBCertificate = smb_reduce(frame)
        self.cob_inverse: GammaMatrix = self.cert.change_of_basis.inverse()
        self._balls: dict = {}
        self.partials: dict = {}   # (k, class key, P) -> EisenValue

    @property
    def spec(self) -> FieldSpec:
        return self.frame.spec

    @property
    def rank(self) -> int:
        return self.frame.rank

    def ball(self, need: Fraction) -> Ball:
        for b, ball in sorted(self._balls.items()):
            if b >= need:
                return ball
        ball = ball_for_bound(self.cert, need)
        self._balls[ball.bound] = ball
        return ball

    def translate(self, u: CongClass, prec: int) -> SeriesElem | None:
        """u*omega rewritten as u'*b with b the reduced basis and |u'_i| < 1."""
        if u.rank != self.rank:
            raise DomainError("congruence class rank does not match the frame")
        spec = self.spec
        N = u.level
        nums = u.act(self.cob_inverse).numerators
        if all(n.is_zero() for n in nums):
            return None
        n_inv = SeriesElem.from_apoly(spec, N, prec + 2 * spec.e * N.degree()).inverse()
        total = None
        for n, b in zip(nums, self.cert.frame.omegas):
            if n.is_zero():
                continue
            term = b.mul_apoly(n) * n_inv
            total = term if total is None else total + term
        return total


def context(frame) -> LatticeContext:
    return frame if isinstance(frame, LatticeContext) else LatticeContext(frame)


def power_sums(ctx: LatticeContext, z: SeriesElem | None, ks, P: int) -> dict:
    """sum over lambda in the lattice of (z + lambda)^(-k), for each k in ks.

    With z None the term lambda = 0 is omitted.  z must be a reduced
    translate (as produced by LatticeContext.translate).  Values are returned
    to absolute precision P (u-digits).
    """
    spec = ctx.spec
    e, p = spec.e, spec.p
    kmax = max(ks)
    w0 = ctx.cert.minima[0]
    need = Fraction(P, e) + max(Fraction(0), -(kmax - 1) * w0)
    ball = ctx.ball(need)
    hi = min([b.prec for b in ball.basis] + ([z.prec] if z is not None else []))
    leads = [b.lead for b in ball.basis]
    if z is not None and not z.is_zero():
        leads.append(z.lead)
    lo = min(leads) if leads else hi - 1
    if hi <= lo:
        raise PrecisionError("lattice generators carry no precision")
    if ball.dim:
        pts = ball.points_array(lo, hi)
    else:
        pts = np.zeros((1, hi - lo, spec.nd), dtype=np.int64)
    if z is not None:
        pts = (pts + z.window(lo, hi)[None]) % p
    else:
        pts = pts[1:]
    tails = {k: ball.coset_tail(k) for k in ks}
    sums = sum_inverse_powers(spec, pts, lo, hi, tails, P)
    deg_used = ball_degree(ctx, ball)
    return {k: EisenValue(sums[k], k, tails[k], deg_used, ball.rho) for k in ks}


def sum_inverse_powers(spec: FieldSpec, pts: np.ndarray, lo: int, hi: int, tails: dict, P: int) -> dict:
    """For each k in tails: sum over rows x of pts of x^-k, to precision P.

    pts holds digit windows for exponents lo..hi-1, each row known to u^hi.
    tails[k] is the valuation bound of everything not in pts; PrecisionError
    if either that or the row precision falls short of P.
    """
    e, p = spec.e, spec.p
    nz = pts.any(axis=2)
    if not nz.any(axis=1).all():
        raise PrecisionError("a lattice point vanishes to precision in the ball sum")
    ell = lo + nz.argmax(axis=1)
    maxl = int(ell.max()) if ell.size else 0
    for k, tail in tails.items():
        avail = min(hi - (k + 1) * maxl, math.ceil(e * tail))
        if avail < P:
            raise PrecisionError(
                f"weight {k} sum reaches u^{avail} < u^{P} (generators known to u^{hi})")
    out = {}
    if ell.size == 0:
        return {k: SeriesElem.zero(spec, P) for k in tails}
    n_need = max(1, max(int((P + k * ell).max()) for k in tails))
    idx = (ell - lo)[:, None] + np.arange(n_need)[None, :]
    valid = idx < (hi - lo)
    idx = np.minimum(idx, hi - lo - 1)
    rel = np.take_along_axis(pts, idx[:, :, None], axis=1) * valid[:, :, None]
    inv = invert_units(rel, spec, n_need)
    for k in tails:
        n_i = P + k * ell
        keep = n_i > 0
        if not keep.any():
            out[k] = SeriesElem.zero(spec, P)
            continue
        nk = int(n_i[keep].max())
        powk = power_rows(inv[keep, :nk], k, spec, nk)
        ell_k = ell[keep]
        out_lo = int((-k * ell_k).min())
        acc = np.zeros((P - out_lo, spec.nd), dtype=np.int64)
        for lv in np.unique(ell_k):
            sel = ell_k == lv
            length = int(P + k * lv)
            off = int(-k * lv) - out_lo
            acc[off:off + length] += powk[sel, :length].sum(axis=0)
        out[k] = SeriesElem(spec, out_lo, P, acc % p)
    return out


def ball_degree(ctx: LatticeContext, ball: Ball) -> int:
    """Largest j with T^j s_i among the ball generators (the degree bound D used)."""
    return max((j for _, j in ball.members), default=0)


# ---------------------------------------------------------------------------
# Full and partial series
# ---------------------------------------------------------------------------


def eisenstein_full(frame, k: int, P: int) -> EisenValue:
    if k < 1:
        raise DomainError("weight must be positive")
    ctx = context(frame)
    q = ctx.spec.q
    if k % (q - 1):
        return EisenValue(SeriesElem.zero(ctx.spec, P), k, None, 0, None)
    return power_sums(ctx, None, [k], P)[k]


def eisenstein_partial(frame, k: int, u: CongClass, P: int) -> EisenValue:
    return eisenstein_partial_many(frame, [k], [u], P)[(k, u)]


def eisenstein_partial_many(frame, ks, classes, P: int) -> dict:
    """{(k, u): E_{k,u}} sharing one reduction; u = 0 gives the full series."""
    ctx = context(frame)
    out = {}
    todo = []
    for u in classes:
        if all((k, u.key(), P) in ctx.partials for k in ks):
            for k in ks:
                out[(k, u)] = ctx.partials[(k, u.key(), P)]
        else:
            todo.append(u)
    for u in todo:
        z = ctx.translate(u, P + 8 * ctx.spec.e)
        if z is None:
            for k in ks:
                out[(k, u)] = eisenstein_full(ctx, k, P)
            continue
        vals = power_sums(ctx, z, list(ks), P)
        for k in ks:
            out[(k, u)] = vals[k]
    for u in todo:
        for k in ks:
            ctx.partials[(k, u.key(), P)] = out[(k, u)]
    return out


def class_of(N: APoly, nums) -> CongClass:
    return CongClass(N, tuple(nums))


def all_nonzero_classes(N: APoly, r: int) -> list:
    residues = polys_below(N.field, N.degree())
    out = []
    for vec in itertools.product(residues, repeat=r):
        if any(not v.is_zero() for v in vec):
            out.append(CongClass(N, vec))
    return out


# ---------------------------------------------------------------------------
# Restricted series
# ---------------------------------------------------------------------------


class UnitGroup:
    """(A/N)^* with a multiplication table, elements in canonical order."""

    def __init__(self, N: APoly):
        self.N = N
        self.elements = units_mod(N)
        self.index = {a: i for i, a in enumerate(self.elements)}
        n = len(self.elements)
        self.mul = [[self.index[(a * b) % N] for b in self.elements] for a in self.elements]
        self.inv = [self.index[inverse_mod(a, N)] for a in self.elements]
        self.one = self.index[APoly.one(N.field)]

    def __len__(self):
        return len(self.elements)


def _shell_bound(D: int, n: int, q: int, k: int) -> Fraction:
    """Valuation bound for sum of a^-k over monic a of degree D in one class mod N."""
    if D < n:
        return Fraction(k * D)
    B = Fraction(D)
    for j in range(D - n):
        B += (q - 1) * q ** j * (D - n - j)
    return B + (k - 1) * min(B, Fraction(n))


def _inverse_power(spec: FieldSpec, a: APoly, k: int, P: int) -> SeriesElem:
    """a^-k to absolute precision P."""
    D = a.degree()
    e = spec.e
    rel = max(1, P - e * k * D)
    x = SeriesElem.from_apoly(spec, a, -e * D + rel)
    return x.inverse() ** k


def class_zeta(spec: FieldSpec, N: APoly, k: int, P: int, group: UnitGroup | None = None):
    """Z_t = sum over monic a = t (mod N) of a^-k for t in (A/N)^*, to precision P.

    Returns ({t index: SeriesElem}, shell degree where summation stopped).
    """
    group = group or UnitGroup(N)
    q, e = spec.q, spec.e
    n = N.degree()
    fld = N.field
    Z = {i: SeriesElem.zero(spec, P) for i in range(len(group))}
    D = 0
    while _shell_bound(D, n, q, k) * e < P or D < n:
        for a in _monic_of_degree(fld, D):
            if gcd(a, N).degree() != 0:
                continue
            t = group.index[a % N]
            Z[t] = Z[t] + _inverse_power(spec, a, k, P)
        D += 1
    return Z, D


def _monic_of_degree(fld, D: int):
    for low in itertools.product(fld.elements(), repeat=D):
        yield APoly(fld, low + (1,))


def _ring_mul(group: UnitGroup, x: dict, y: dict, P: int) -> dict:
    out = {}
    for i, a in x.items():
        if a.is_zero():
            continue
        for j, b in y.items():
            if b.is_zero():
                continue
            t = group.mul[i][j]
            term = (a * b).truncate(P)
            out[t] = term if t not in out else out[t] + term
    spec = next(iter(x.values())).spec
    return {t: out.get(t, SeriesElem.zero(spec, P)).truncate(P) for t in range(len(group))}


_MOEBIUS_CACHE: dict = {}


def moebius_coefficients(spec: FieldSpec, N: APoly, k: int, P: int, group: UnitGroup | None = None):
    """M_s = sum over monic a = s (mod N) of mu(a) a^-k, as the inverse of Z in
    the group ring of (A/N)^* (a Neumann series, since Z = [1] + O(T^-k))."""
    key = (spec, N.key(), k, P)
    if key not in _MOEBIUS_CACHE:
        _MOEBIUS_CACHE[key] = _moebius_coefficients(spec, N, k, P, group or UnitGroup(N))
    return _MOEBIUS_CACHE[key]


def _moebius_coefficients(spec: FieldSpec, N: APoly, k: int, P: int, group: UnitGroup):
    Z, _ = class_zeta(spec, N, k, P, group)
    one = group.one
    Y = dict(Z)
    Y[one] = Y[one] - SeriesElem.one(spec, P)
    negY = {t: -v for t, v in Y.items()}
    M = {t: SeriesElem.zero(spec, P) for t in range(len(group))}
    M[one] = SeriesElem.one(spec, P)
    term = dict(M)
    J = 0
    # the j-th power of Y has valuation >= j*k
    while (J + 1) * k * spec.e < P:
        term = _ring_mul(group, term, negY, P)
        M = {t: M[t] + term[t] for t in M}
        J += 1
    return M


def restricted_moebius(frame, k: int, u: CongClass, P: int) -> EisenValue:
    ctx = context(frame)
    N = u.level
    group = UnitGroup(N)
    classes = [u.scale(t) for t in group.elements]
    vals = eisenstein_partial_many(ctx, [k], classes, P)
    low = min([v.value.lead for v in vals.values() if not v.value.is_zero()], default=0)
    M = moebius_coefficients(ctx.spec, N, k, P + max(0, -low), group)
    total = SeriesElem.zero(ctx.spec, P)
    tail = None
    for i, t in enumerate(group.elements):
        ev = vals[(k, classes[i])]
        total = total + (M[group.inv[i]] * ev.value).truncate(P)
        if ev.tail_bound is not None:
            tail = ev.tail_bound if tail is None else min(tail, ev.tail_bound)
    D_used = max(v.D_used for v in vals.values())
    radius = max((v.radius for v in vals.values() if v.radius is not None), default=None)
    return EisenValue(total.truncate(P), k, tail, D_used, radius)


def restricted_direct(frame, k: int, u: CongClass, P: int, max_points: int = 1 << 14) -> EisenValue:
    """N^k times the sum over primitive a = N*u (mod N) of (a.omega)^-k, summed
    literally over a ball; the tail is bounded term by term (valuation k*rho')."""
    ctx = context(frame)
    spec = ctx.spec
    e = spec.e
    N = u.level
    n = N.degree()
    fld = N.field
    q = fld.order
    target = Fraction(P, e) + k * n
    norms = list(ctx.cert.minima)
    # numerators with respect to the ascending reduced basis
    nums = tuple(reversed(u.act(ctx.cob_inverse).numerators))
    rho = min(norms) - 1
    while True:
        ball = fixed_ball(ctx.cert, rho)
        if k * ball.rho_next >= target:
            break
        if q ** (ball.dim + 1) > max_points:
            raise PrecisionError(f"direct restricted sum needs more than {max_points} points")
        rho = ball.rho_next
    members = ball.members
    degs = [max([j for (ii, j) in members if ii == i], default=-1) for i in range(len(norms))]
    position = {m: t for t, m in enumerate(members)}
    selected = []
    for a in itertools.product(*[polys_below(fld, d + 1) for d in degs]):
        if all(x.is_zero() for x in a):
            continue
        if any(not ((x - y) % N).is_zero() for x, y in zip(a, nums)):
            continue
        if not _is_primitive(a):
            continue
        index = 0
        for i, x in enumerate(a):
            for j, c in enumerate(x.coeffs):
                index += c * q ** position[(i, j)]
        selected.append(index)
    tail = k * ball.rho_next
    P_inner = P + e * k * n
    if not selected:
        total = SeriesElem.zero(spec, P_inner)
    else:
        hi = min(b.prec for b in ball.basis)
        lo = min(b.lead for b in ball.basis)
        pts = ball.points_array(lo, hi)[np.array(selected)]
        total = sum_inverse_powers(spec, pts, lo, hi, {k: tail}, P_inner)[k]
    value = total.mul_apoly(N ** k).truncate(P)
    if value.prec < P:
        raise PrecisionError(f"direct restricted sum only reached u^{value.prec}")
    return EisenValue(value, k, tail - k * n, max((j for _, j in members), default=0), ball.rho)


def _is_primitive(a) -> bool:
    g = a[0]
    for x in a[1:]:
        g = gcd(g, x)
    return g.degree() == 0


def eisenstein_restricted(frame, k: int, u: CongClass, P: int, method: str = "moebius") -> EisenValue:
    if method == "moebius":
        return restricted_moebius(frame, k, u, P)
    if method == "direct":
        return restricted_direct(frame, k, u, P)
    raise DomainError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Eisenstein coordinates, rank, boundary parameter
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EisenCoordVector:
    level: APoly
    reps: tuple        # numerator vectors (the set S)
    entries: tuple     # EisenValue of weight 1

    def to_json(self) -> dict:
        return {
            "level": self.level.to_json(),
            "entries": [{"n": [x.to_json() for x in n], "value": v.value.to_json()}
                        for n, v in zip(self.reps, self.entries)],
        }


def embed_jN(frame, N: APoly, P: int) -> EisenCoordVector:
    ctx = context(frame)
    if N.degree() < 1:
        raise DomainError("level must have positive degree")
    N = N.monic()
    reps = primitive_monic_reps(N, ctx.rank)
    classes = [CongClass(N, n) for n in reps]
    vals = eisenstein_partial_many(ctx, [1], classes, P)
    entries = tuple(vals[(1, u)] for u in classes)
    if all(v.value.is_zero() for v in entries):
        raise PrecisionError("every Eisenstein coordinate vanishes to precision")
    return EisenCoordVector(N, tuple(reps), entries)


def projective_normalize(values):
    """Divide by the entry of largest absolute value; returns (index, ratios)."""
    best = None
    for i, v in enumerate(values):
        if not v.is_zero() and (best is None or v.lead < values[best].lead):
            best = i
    if best is None:
        raise PrecisionError("projective vector vanishes to precision")
    inv = values[best].inverse()
    return best, [v * inv for v in values]


def projective_residual(a, b):
    """(valuation, precision) of the worst difference of ratios, both vectors
    divided by their entry at the dominant position of a.

    Valuation 0 (the ratios differ in a unit) when b vanishes there.
    """
    i, ra = projective_normalize(a)
    if b[i].is_zero():
        return 0, min(x.prec for x in ra)
    inv = b[i].inverse()
    worst, prec = None, None
    for x, y in zip(ra, b):
        d = x - y * inv
        val = d.prec if d.is_zero() else d.lead
        worst = val if worst is None else min(worst, val)
        prec = d.prec if prec is None else min(prec, d.prec)
    return worst, prec


def projective_equal(a: EisenCoordVector, b: EisenCoordVector, P: int) -> bool:
    """Projective equality of two coordinate vectors, ratios compared to
    relative precision P; PrecisionError if the ratios are not known that far."""
    val, prec = projective_residual([v.value for v in a.entries], [v.value for v in b.entries])
    if val < min(P, prec):
        return False
    if prec < P:
        raise PrecisionError(f"projective ratios known only to u^{prec}")
    return True


def _dominant(entries) -> int:
    return min((x.lead for x in entries if not x.is_zero()), default=0)


def valuation_rank(matrix, P: int) -> int:
    """Rank of a matrix of series by full valuation pivoting, entries of
    valuation >= P counting as zero.

    The rank is final once every remaining entry is known to vanish below
    u^P; PrecisionError otherwise.
    """
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    # rank is unchanged by shifting rows and columns; put each dominant entry at u^0
    for _ in range(2):
        rows = [[x.shift(-_dominant(row)) for x in row] for row in rows]
        cols = [_dominant([row[j] for row in rows]) for j in range(len(rows[0]))]
        rows = [[x.shift(-c) for x, c in zip(row, cols)] for row in rows]
    live_r = list(range(len(rows)))
    live_c = list(range(len(rows[0])))
    rank = 0
    while live_r and live_c:
        best = None
        for i in live_r:
            for j in live_c:
                x = rows[i][j]
                if not x.is_zero() and x.lead < P and (best is None or x.lead < best[0]):
                    best = (x.lead, i, j)
        if best is None:
            break
        _, i, j = best
        live_r.remove(i)
        live_c.remove(j)
        rank += 1
        piv_inv = rows[i][j].inverse()
        for a in live_r:
            if rows[a][j].is_zero():
                continue
            f = rows[a][j] * piv_inv
            for b in live_c:
                rows[a][b] = rows[a][b] - f * rows[i][b]
    for i in live_r:
        for j in live_c:
            if rows[i][j].prec < P and rows[i][j].is_zero():
                raise PrecisionError(f"rank undecided: residual entry known only to u^{rows[i][j].prec}")
    return rank


def eis_rank(N: APoly, k: int, sample_frames, P: int, method: str = "moebius") -> int:
    """Rank of [F_{k,u}(omega_j)] over the sample frames and u in N^-1 S,
    entries evaluated with headroom and compared against the threshold u^P."""
    N = N.monic()
    frames = [context(f) for f in sample_frames]
    r = frames[0].rank
    reps = primitive_monic_reps(N, r)
    if len(frames) < len(reps):
        raise DomainError("need at least as many sample frames as classes")
    work = P + 16
    for _ in range(3):
        matrix = [[eisenstein_restricted(ctx, k, CongClass(N, n), work, method).value for n in reps]
                  for ctx in frames]
        try:
            return valuation_rank(matrix, P)
        except PrecisionError:
            work *= 2
    raise PrecisionError(f"rank undecided at working precision u^{work // 2}")


# ---------------------------------------------------------------------------
# Lattice exponential (product over a ball with certified remainder)
# ---------------------------------------------------------------------------


def exp_on_ball(ball: Ball, z: SeriesElem) -> SeriesElem:
    """e_V(z) through the chain of F_q-linear factors w -> w - w^q / beta^(q-1),
    beta running over the images of the basis under the partial products."""
    factors = []
    for b in ball.basis:
        beta = b
        for f in factors:
            beta = beta - beta.frobenius_pow(1) * f
        if beta.is_zero():
            raise PrecisionError("lattice basis vector collapses in the exponential chain")
        factors.append(beta.inverse() ** (ball.q - 1))
    w = z
    for f in factors:
        w = w - w.frobenius_pow(1) * f
    return w


def lattice_exp(frame, z: SeriesElem, P: int, reduced: bool = False) -> SeriesElem:
    """e_Lambda(z) to absolute precision P.

    The ball grows until the remainder factor prod (1 - (w/lambda')^(q-1)) is
    within the requested precision; it is enough that B exceeds
    (P/e + q*log|w|)/(q-1) with w = e_V(z).
    """
    ctx = context(frame)
    spec = ctx.spec
    e, q = spec.e, spec.q
    need = Fraction(P, e) / (q - 1)
    for _ in range(64):
        ball = ctx.ball(need)
        w = exp_on_ball(ball, z)
        if w.is_zero():
            raise PrecisionError("exponential vanishes to precision (z in the lattice?)")
        lw = w.log_norm()
        if ball.bound <= lw:
            need = lw + 1
            continue
        err = (q - 1) * ball.bound - q * lw
        if err * e >= P:
            return w.truncate(min(P, math.ceil(err * e)))
        need = (Fraction(P, e) + q * lw) / (q - 1) + Fraction(1, e)
    raise PrecisionError("exponential did not converge")


def boundary_parameter(frame: LatticeFrame, N: APoly, P: int) -> SeriesElem:
    """t(omega) = 1 / e_{N Lambda'}(omega_1), Lambda' spanned by omega_2..omega_r."""
    if frame.rank < 2:
        raise DomainError("boundary parameter needs rank >= 2")
    sub = LatticeFrame(tuple(w.mul_apoly(N) for w in frame.omegas[1:]))
    ctx = LatticeContext(sub)
    w1 = frame.omegas[0]
    # 1/x to absolute precision P needs x to absolute precision P + 2 * lead(x)
    work = P
    for _ in range(4):
        try:
            val = lattice_exp(ctx, w1, work)
        except PrecisionError:
            raise DomainError("omega_1 lies in N*Lambda' to precision") from None
        if val.is_zero() or work >= P + 2 * val.lead:
            break
        work = P + 2 * val.lead
    if val.is_zero():
        raise DomainError("omega_1 lies in N*Lambda' to precision")
    return val.inverse().truncate(P)
