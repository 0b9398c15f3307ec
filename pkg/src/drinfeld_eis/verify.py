"""Registry of identity checks run by ``verify``.

Every check computes one or more residuals (series that must vanish) and
reports the worst certified valuation in u-digits.  A residual that vanishes
to its known precision but not to the required one is "precision-insufficient",
never "fail"; so is a rank or separation test that could only be decided at
higher precision.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import drinfeld, eisenstein, modspace
from .arithmetic import APoly, CongClass, FqConfig, all_classes, primitive_monic_reps
from .errors import DomainError, PrecisionError, ResourceError
from .lattice import (GammaMatrix, LatticeFrame, builtin_frame, gamma_act, gamma_act_raw, in_fundamental_domain,
                      is_orthogonal, random_fd_frame, random_gamma, sample_frames, smb_reduce)
from .series import FieldSpec, SeriesElem

PASS, FAIL, INSUFFICIENT = "pass", "fail", "precision-insufficient"


@dataclass(frozen=True)
class RunConfig:
    q: int = 2
    ext_m: int = 1
    ram_e: int = 2
    P: int = 64
    deg_cap: int = 3
    seed: int = 0

    def __post_init__(self):
        FqConfig.from_q(self.q)  # validates q
        if self.ext_m < 1 or self.ram_e < 1:
            raise DomainError("--ext-m and --ram-e must be positive")
        if self.P < 1:
            raise DomainError("--P must be positive")
        if self.deg_cap < 1:
            raise DomainError("--deg-cap must be positive")

    @property
    def fq(self) -> FqConfig:
        c = FqConfig.from_q(self.q)
        return FqConfig(c.p, c.s, self.ext_m)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class CheckResult:
    name: str
    status: str
    required: int | None          # u-digits the residuals must reach
    residual: int | None          # worst certified residual valuation (u-digits)
    precision: int                # requested precision P
    instances: int
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "required": self.required,
            "residual": self.residual,
            "precision": self.precision,
            "instances": self.instances,
            "details": self.details,
        }


class Tally:
    """Accumulates residuals against a required valuation."""

    def __init__(self, required: int | None):
        self.required = required
        self.worst: int | None = None
        self.failed = False
        self.short = False
        self.count = 0
        self.notes: list = []

    def _record(self, v: int):
        self.worst = v if self.worst is None else min(self.worst, v)

    def residual(self, x: SeriesElem, required: int | None = None):
        req = self.required if required is None else required
        self.count += 1
        if x.is_zero():
            self._record(x.prec)
            if x.prec < req:
                self.short = True
        else:
            self._record(x.lead)
            if x.lead < req:
                self.failed = True

    def truth(self, ok: bool, note: str | None = None):
        self.count += 1
        if not ok:
            self.failed = True
            if note:
                self.notes.append(note)

    def undecided(self, note: str):
        self.count += 1
        self.short = True
        self.notes.append(note)

    def result(self, name: str, P: int, **details) -> CheckResult:
        status = FAIL if self.failed else INSUFFICIENT if self.short else PASS
        if self.notes:
            details["notes"] = self.notes[:5]
        return CheckResult(name, status, self.required, self.worst, P, self.count, details)


def _retry(compute, tally: Tally, extra: int = 8, rounds: int = 4):
    """Run compute(extra) -> residual list, widening the margin while some
    residual vanishes only to insufficient precision."""
    for _ in range(rounds):
        res = compute(extra)
        if all(not (r.is_zero() and r.prec < tally.required) for r in res):
            break
        extra *= 2
    for r in res:
        tally.residual(r)


class Suite:
    """Shared state for one verification run: config, frames and caches."""

    def __init__(self, cfg: RunConfig, fault: str | None = None):
        self.cfg = cfg
        self.fault = fault
        self.P = cfg.P
        self.fld = cfg.fq.base
        self.T = APoly.T(self.fld)
        self._frames: dict = {}
        self._ctx: dict = {}

    def rng(self, name: str) -> random.Random:
        return random.Random(self.cfg.seed * 1000003 + zlib.crc32(name.encode()))

    def frame(self, name: str) -> LatticeFrame:
        if name not in self._frames:
            r = {"carlitz": 1, "rank2-sqrt": 2, "rank3-cbrt": 3}[name]
            # e = r for the builtins; the largest q-power any check needs is
            # q^(r+1) (exponential recursion) or q^(r d) (division by T^d)
            top = max(r + 1, r * max(N.degree() for N in _division_levels(self, r)))
            prec = 2 * self.P + 2 * r * self.cfg.q ** top + 64
            self._frames[name] = builtin_frame(name, self.cfg.fq, prec)
        return self._frames[name]

    def ctx(self, name: str):
        if name not in self._ctx:
            self._ctx[name] = eisenstein.context(self.frame(name))
        return self._ctx[name]

    def builtins(self):
        return ("carlitz", "rank2-sqrt", "rank3-cbrt")

    def ray(self, c: int, prec: int | None = None) -> LatticeFrame:
        """(T^(c+1/2), 1) over the ramified field with e = 2."""
        spec = FieldSpec(self.cfg.fq, 2)
        prec = prec or 4 * self.P + 64
        return LatticeFrame((SeriesElem.monomial(spec, 1, -(2 * c + 1), prec), SeriesElem.one(spec, prec)))


# ---------------------------------------------------------------------------
# Lattice checks
# ---------------------------------------------------------------------------


def _random_kinf(spec: FieldSpec, rng: random.Random, prec: int) -> SeriesElem:
    fld = spec.config.base
    coeffs = tuple(rng.randrange(fld.order) for _ in range(3))
    a = APoly(fld, coeffs)
    if a.is_zero():
        a = APoly.one(fld)
    return SeriesElem.from_apoly(spec, a, prec).shift(spec.e * rng.randint(0, 2))


def check_smb_orthogonality(s: Suite) -> CheckResult:
    tally = Tally(None)
    rng = s.rng("smb-orthogonality")
    for name in s.builtins():
        fr = s.frame(name)
        frames = [fr]
        if fr.rank > 1:
            frames += [gamma_act(random_gamma(s.fld, fr.rank, rng), fr)[0] for _ in range(3)]
        for f in frames:
            cert = smb_reduce(f)
            tally.truth(is_orthogonal(cert.frame.omegas), f"{name}: reduced frame not orthogonal")
            for _ in range(5):
                a = [_random_kinf(f.spec, rng, f.prec) for _ in range(f.rank)]
                terms = [x * w for x, w in zip(a, cert.frame.omegas)]
                total = terms[0]
                for t in terms[1:]:
                    total = total + t
                tally.truth(total.lead == min(t.lead for t in terms), f"{name}: valuation not additive")
    return tally.result("smb-orthogonality", s.P)


def check_smb_invariance(s: Suite) -> CheckResult:
    tally = Tally(None)
    rng = s.rng("smb-invariance")
    minima = {}
    for name in s.builtins():
        fr = s.frame(name)
        base = smb_reduce(fr).minima
        minima[name] = [str(x) for x in base]
        for _ in range(10 if fr.rank > 1 else 0):
            g = random_gamma(s.fld, fr.rank, rng, max_deg=2)
            tally.truth(smb_reduce(gamma_act_raw(g, fr)).minima == base, f"{name}: minima changed")
    return tally.result("smb-invariance", s.P, minima=minima)


def check_fundamental_domain(s: Suite) -> CheckResult:
    tally = Tally(None)
    rng = s.rng("fundamental-domain")
    for name in s.builtins():
        fr = s.frame(name)
        tally.truth(in_fundamental_domain(fr), f"{name} outside the fundamental domain")
        c = _random_kinf(fr.spec, rng, fr.prec)
        tally.truth(in_fundamental_domain(fr.scaled(c)), f"{name}: membership not scale invariant")
        if fr.rank > 1:
            swapped = LatticeFrame(tuple(reversed(fr.omegas))).normalized()
            tally.truth(not in_fundamental_domain(swapped), f"{name}: reversed frame accepted")
    return tally.result("fundamental-domain", s.P)


# ---------------------------------------------------------------------------
# Eisenstein checks
# ---------------------------------------------------------------------------


def _cov_required(P: int) -> int:
    return P - P // 6


def _covariance(s: Suite, name: str, kind: str) -> CheckResult:
    P = s.P
    tally = Tally(_cov_required(P))
    rng = s.rng(name)
    q = s.cfg.q
    N = s.T
    for fname in ("rank2-sqrt", "rank3-cbrt"):
        fr = s.frame(fname)
        ctx = s.ctx(fname)
        classes = all_classes(N, fr.rank)
        for _ in range(10):
            g = random_gamma(s.fld, fr.rank, rng, max_deg=2)
            gw, aut = gamma_act(g, fr)
            gctx = eisenstein.context(gw)
            u = classes[rng.randrange(len(classes))]
            for k in sorted({1, q - 1}):
                def compute(extra, k=k, u=u):
                    if kind == "full":
                        if k % (q - 1):
                            return []
                        lhs = eisenstein.eisenstein_full(gctx, k, P).value
                        rhs = eisenstein.eisenstein_full(ctx, k, P + extra).value
                    elif kind == "partial":
                        lhs = eisenstein.eisenstein_partial(gctx, k, u, P).value
                        rhs = eisenstein.eisenstein_partial(ctx, k, u.act(g), P + extra).value
                    else:
                        lhs = eisenstein.eisenstein_restricted(gctx, k, u, P).value
                        rhs = eisenstein.eisenstein_restricted(ctx, k, u.act(g), P + extra).value
                    return [lhs - (aut ** k) * rhs]
                _retry(compute, tally, extra=8 - 2 * min(0, aut.lead) * k)
    return tally.result(name, P, gammas=10, max_degree=2, level=str(N))


def check_full_covariance(s):
    return _covariance(s, "full-covariance", "full")


def check_partial_covariance(s):
    return _covariance(s, "partial-covariance", "partial")


def check_restricted_covariance(s):
    return _covariance(s, "restricted-covariance", "restricted")


def check_distribution(s: Suite) -> CheckResult:
    """(N/N')^-k sum_{(N/N') u = v} E_{k,u} = E_{k,v}, N = T^2, N' = T."""
    P = s.P
    tally = Tally(P)
    N, Np = s.T ** 2, s.T
    Q = N // Np
    ctx = s.ctx("rank2-sqrt")
    spec = ctx.spec
    for k in (1, 2):
        for v in all_classes(Np, 2, include_zero=True):
            us = [u for u in all_classes(N, 2, include_zero=True)
                  if all(((n - m) % Np).is_zero() for n, m in zip(u.numerators, v.numerators))]

            def compute(extra, k=k, v=v, us=us):
                work = P + extra
                vals = eisenstein.eisenstein_partial_many(ctx, [k], us, work)
                total = None
                for u in us:
                    total = vals[(k, u)].value if total is None else total + vals[(k, u)].value
                inv = SeriesElem.from_apoly(spec, Q ** k, work + 2 * spec.e * k * Q.degree()).inverse()
                rhs = eisenstein.eisenstein_partial_many(ctx, [k], [v], P)[(k, v)].value
                return [total * inv - rhs]
            _retry(compute, tally)
    return tally.result("distribution", P, level="T^2", sublevel="T", weights=[1, 2])


def check_scaling(s: Suite) -> CheckResult:
    """E_{k,cu} = c^-k E_{k,u} for c in F^*."""
    P = s.P
    tally = Tally(P)
    ctx = s.ctx("rank2-sqrt")
    spec = ctx.spec
    q = s.cfg.q
    fld = s.fld
    classes = all_classes(s.T, 2)
    for k in range(1, q + 1):
        vals = eisenstein.eisenstein_partial_many(ctx, [k], classes, P)
        for u in classes:
            for c in fld.units():
                cu = u.scale(APoly.const(fld, c))
                factor = spec.config.embed(fld.inv(fld.pow(c, k)))
                tally.residual(vals[(k, cu)].value - vals[(k, u)].value.scale(factor))
    return tally.result("scaling", P)


def direct_weight(ctx, N: APoly, P: int, max_points: int = 1 << 14) -> int:
    """Smallest weight for which the literal primitive sum fits in max_points."""
    from .lattice import fixed_ball
    e = ctx.spec.e
    q = ctx.spec.q
    for k in range(1, 64):
        target = Fraction(P, e) + k * N.degree()
        rho = min(ctx.cert.minima) - 1
        while True:
            ball = fixed_ball(ctx.cert, rho)
            if k * ball.rho_next >= target:
                return k
            if q ** (ball.dim + 1) > max_points:
                break
            rho = ball.rho_next
    raise ResourceError("no weight makes the direct restricted sum feasible")


def check_moebius_direct(s: Suite) -> CheckResult:
    P = s.P
    tally = Tally(P)
    ctx = s.ctx("rank2-sqrt")
    N = s.T
    k = direct_weight(ctx, N, P)
    for n in primitive_monic_reps(N, 2):
        u = CongClass(N, n)
        a = eisenstein.eisenstein_restricted(ctx, k, u, P, "moebius").value
        b = eisenstein.eisenstein_restricted(ctx, k, u, P, "direct").value
        tally.residual(a - b)
    return tally.result("moebius-direct", P, weight=k, level=str(N))


def _rank_config(cfg: RunConfig) -> FqConfig:
    """Residue field for the rank samples.  For q = p the weight-q columns are
    Frobenius powers of the weight-1 ones, which multiplies pivot valuations
    by q; a larger residue field lets the samples sit in distinct residue
    discs and keeps the pivots small."""
    c = cfg.fq
    return FqConfig(c.p, c.s, max(cfg.ext_m, 4 if cfg.q == 2 else 2))


RANK_CASES = ((2, 2, 1), (3, 2, 1), (2, 2, 2), (2, 3, 1))   # (q, r, deg N), N = T^deg


def rank_cases(q: int) -> list:
    cases = [(r, d) for qq, r, d in RANK_CASES if qq == q]
    return cases or [(2, 1)]


def check_basis_rank(s: Suite) -> CheckResult:
    P = s.P
    tally = Tally(None)
    q = s.cfg.q
    ranks = {}
    for r, d in rank_cases(q):
        N = s.T ** d
        expected = modspace.cusp_count(N, r)
        spec = FieldSpec(_rank_config(s.cfg), r)
        frames = sample_frames(spec, r, expected + 2, s.cfg.seed, 2 * P + 64)
        for k in sorted({1, q - 1, q}):
            label = f"r={r} N={N} k={k}"
            try:
                rk = eisenstein.eis_rank(N, k, frames, P)
            except PrecisionError as exc:
                tally.undecided(f"{label}: {exc}")
                continue
            ranks[label] = [rk, expected]
            if rk > expected:
                tally.truth(False, f"{label}: rank {rk} exceeds {expected}")
            elif rk < expected:
                tally.undecided(f"{label}: rank {rk} < {expected} at threshold u^{P}")
            else:
                tally.truth(True)
    return tally.result("basis-rank", P, ranks=ranks)


def check_boundary_degeneration(s: Suite) -> CheckResult:
    """Along w_1 = T^(c+1/2) with c = 4, 6, 8: E_{k,u} -> 0 if u_1 != 0, and
    E_{k,u} -> E_{k,u_2} (rank 1) if u_1 = 0; certified monotone prefix."""
    P = s.P
    tally = Tally(None)
    N = s.T
    fld = s.fld
    rank1 = LatticeFrame((SeriesElem.one(FieldSpec(s.cfg.fq, 2), 4 * P + 64),))
    classes = all_classes(N, 2)
    rays = [s.ray(c) for c in (4, 6, 8)]
    for k in (1, s.cfg.q - 1) if s.cfg.q > 2 else (1,):
        limits = {}
        for u in classes:
            if u.numerators[0].is_zero():
                limits[u.key()] = eisenstein.eisenstein_partial(rank1, k, CongClass(N, u.numerators[1:]), P).value
        seqs = {u.key(): [] for u in classes}
        for fr in rays:
            vals = eisenstein.eisenstein_partial_many(fr, [k], classes, P)
            for u in classes:
                x = vals[(k, u)].value
                if u.key() in limits:
                    x = x - limits[u.key()]
                seqs[u.key()].append((x.lead, x.is_zero()))
        for u in classes:
            seq = seqs[u.key()]
            vals_ = [v for v, _ in seq]
            monotone = all(a <= b for a, b in zip(vals_, vals_[1:]))
            last, last_zero = seq[-1]
            if not monotone:
                tally.truth(False, f"{u}: valuations {vals_} not monotone")
            elif last < P / 2:
                if last_zero:
                    tally.undecided(f"{u}: only u^{last} known")
                else:
                    tally.truth(False, f"{u}: limit not reached, valuation {last}")
            else:
                tally.truth(True)
    return tally.result("boundary-degeneration", P, distances=["q^4", "q^6", "q^8"])


def check_separation(s: Suite) -> CheckResult:
    P = s.P
    tally = Tally(None)
    N = s.T
    spec = FieldSpec(s.cfg.fq, max(2, s.cfg.ram_e))
    rng = s.rng("separation")
    frames = []
    while len(frames) < 10:
        f = random_fd_frame(spec, 2, rng, 2 * P + 64)
        if all(not (f.omegas[0] - g.omegas[0]).is_zero() for g in frames):
            frames.append(f)
    vecs = [eisenstein.embed_jN(f, N, P) for f in frames]
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            try:
                same = eisenstein.projective_equal(vecs[i], vecs[j], P // 2)
            except PrecisionError:
                tally.undecided(f"points {i}, {j} agree to the known precision")
                continue
            if same:
                tally.undecided(f"points {i}, {j} not separated at u^{P // 2}")
            else:
                tally.truth(True)
    return tally.result("separation", P, points=10, level=str(N))


def check_level_invariance(s: Suite) -> CheckResult:
    P = s.P
    tally = Tally(P // 2)
    N = s.T
    rng = s.rng("level-invariance")
    fr = s.frame("rank2-sqrt")
    base = eisenstein.embed_jN(fr, N, P)
    for _ in range(5):
        g = random_gamma(s.fld, 2, rng, max_deg=2, level=N)
        gw, _ = gamma_act(g, fr)
        moved = eisenstein.embed_jN(gw, N, P)
        val, prec = eisenstein.projective_residual([v.value for v in base.entries],
                                                   [v.value for v in moved.entries])
        tally.count += 1
        tally._record(val)
        if val < min(prec, tally.required):
            tally.failed = True
        elif prec < tally.required:
            tally.short = True
    return tally.result("level-invariance", P, gammas=5, level=str(N))


# ---------------------------------------------------------------------------
# Drinfeld checks
# ---------------------------------------------------------------------------


def check_exp_recursion(s: Suite) -> CheckResult:
    P = s.P
    tally = Tally(P)
    for name in s.builtins():
        ctx = s.ctx(name)
        n = ctx.rank + 1
        a = drinfeld.exp_coeffs(ctx, n, "product", P).alphas
        b = drinfeld.exp_coeffs(ctx, n, "eisenstein", P).alphas
        for x, y in zip(a, b):
            tally.residual(x - y)
    return tally.result("exp-recursion", P, sign=drinfeld.SIGN)


def check_functional_equation(s: Suite) -> CheckResult:
    P = s.P
    tally = Tally(P)
    for name in s.builtins():
        ctx = s.ctx(name)
        r = ctx.rank
        alphas = drinfeld.exp_coeffs(ctx, r + 1, "product",
                                     drinfeld.alpha_precision_for(P, ctx.spec, r + 1)).alphas
        phi = drinfeld.drinfeld_from_alphas(alphas, r)
        if s.fault == "g1":
            g = list(phi.coeffs)
            g[1] = g[1] + SeriesElem.one(ctx.spec, g[1].prec)
            phi = drinfeld.AdditivePoly(tuple(g), phi.q)
        tally.truth(not phi.coeffs[-1].is_zero(), f"{name}: top coefficient vanishes")
        for res in drinfeld.functional_residuals(phi, alphas):
            tally.residual(res)
    return tally.result("functional-equation", P, through="q^(r+1)",
                        fault=s.fault)


def _division_levels(s: Suite, r: int):
    levels = [s.T]
    if s.cfg.q ** (2 * r) <= 64 and s.cfg.deg_cap >= 2:
        levels.append(s.T ** 2)
    return levels


def _division_data(s: Suite, name: str, N: APoly, extra: int):
    ctx = s.ctx(name)
    spec = ctx.spec
    r = ctx.rank
    P = s.P + extra
    d = N.degree()
    alphas = drinfeld.exp_coeffs(ctx, r, "product",
                                 drinfeld.alpha_precision_for(P, spec, r) + spec.e * spec.q ** (r * d)).alphas
    phi_T = drinfeld.drinfeld_from_alphas(alphas, r)
    phi_N = drinfeld.division_poly(phi_T, N)
    classes = all_classes(N, r)
    # symmetric functions of n values of norm > 1 lose the sum of their leads
    rough = eisenstein.eisenstein_partial_many(ctx, [1], classes, s.P)
    loss = -sum(min(0, rough[(1, u)].value.lead) for u in classes)
    vals = eisenstein.eisenstein_partial_many(ctx, [1], classes, P + loss)
    return phi_T, phi_N, [vals[(1, u)].value for u in classes]


def check_division_product(s: Suite) -> CheckResult:
    P = s.P
    tally = Tally(P)
    q = s.cfg.q
    for name in s.builtins():
        for N in _division_levels(s, s.ctx(name).rank):
            def compute(extra, name=name, N=N):
                _, phi_N, E = _division_data(s, name, N, extra)
                prod = drinfeld.product_poly(N, E, s.ctx(name).spec)
                out = []
                for j, c in enumerate(prod):
                    i = _log_q(j, q)
                    out.append(c - phi_N.coeffs[i] if i is not None else c)
                return out
            _retry(compute, tally)
    return tally.result("division-product", P)


def _log_q(j: int, q: int):
    if j < 1:
        return None
    i = 0
    while q ** i < j:
        i += 1
    return i if q ** i == j else None


def check_division_points(s: Suite) -> CheckResult:
    """d_u * E_u = 1, and phi_N(d_u) = 0 relative to its largest term."""
    P = s.P
    tally = Tally(P)
    for name in s.builtins():
        ctx = s.ctx(name)
        N = s.T
        classes = all_classes(N, ctx.rank)

        def compute(extra, ctx=ctx, classes=classes):
            vals = eisenstein.eisenstein_partial_many(ctx, [1], classes, P + extra)
            out = []
            for u in classes:
                d = drinfeld.division_point(ctx, u, P + extra)
                out.append(d * vals[(1, u)].value - SeriesElem.one(ctx.spec, d.prec + extra))
            return out
        _retry(compute, tally)
        phi_T = drinfeld.drinfeld_coeffs(ctx, P + 32)
        for u in classes[:4]:
            d = drinfeld.division_point(ctx, u, P + 32)
            terms = [c * d.frobenius_pow(i) for i, c in enumerate(phi_T.coeffs)]
            top = min(t.lead for t in terms)
            total = terms[0]
            for t in terms[1:]:
                total = total + t
            tally.residual(total.shift(-top))
    return tally.result("division-points", P, relative_root_check=True)


def check_symmetric_functions(s: Suite) -> CheckResult:
    """l_i = N s_{q^i - 1}(E_u) for 1 <= i <= r d, and l_{rd} = Delta^((q^rd-1)/(q^r-1))."""
    P = s.P
    tally = Tally(P)
    q = s.cfg.q
    for name in s.builtins():
        ctx = s.ctx(name)
        r = ctx.rank
        for N in _division_levels(s, r):
            d = N.degree()

            def compute(extra, name=name, N=N, r=r, d=d):
                phi_T, phi_N, E = _division_data(s, name, N, extra)
                spec = s.ctx(name).spec
                sym = drinfeld.elementary_symmetric(E, q ** (r * d) - 1, spec)
                out = [phi_N.coeffs[0] - SeriesElem.from_apoly(spec, N, phi_N.coeffs[0].prec)]
                for i in range(1, r * d + 1):
                    out.append(phi_N.coeffs[i] - sym[q ** i - 1].mul_apoly(N))
                g_r = phi_T.coeffs[r]
                expo = (q ** (r * d) - 1) // (q ** r - 1)
                out.append(phi_N.coeffs[r * d] - g_r ** expo)
                return out
            _retry(compute, tally)
    return tally.result("symmetric-functions", P)


def check_goss_identity(s: Suite) -> CheckResult:
    """E_{k,u} = G_k(E_{1,u}) for 1 <= k <= q + 1, N = T, every u."""
    P = s.P
    tally = Tally(P)
    q = s.cfg.q
    kmax = q + 1
    for name in s.builtins():
        ctx = s.ctx(name)
        classes = all_classes(s.T, ctx.rank)

        def compute(extra, ctx=ctx, classes=classes):
            work = P + extra
            vals = eisenstein.eisenstein_partial_many(ctx, list(range(1, kmax + 1)), classes, work)
            alphas = drinfeld.exp_coeffs(ctx, 1, "product", work).alphas
            goss = drinfeld.goss_polys(alphas, kmax)
            out = []
            for u in classes:
                x = vals[(1, u)].value
                for k in range(1, kmax + 1):
                    out.append(goss[k](x) - vals[(k, u)].value)
            return out
        _retry(compute, tally, extra=8 * kmax)
    return tally.result("goss-identity", P, kmax=kmax)


# ---------------------------------------------------------------------------
# Boundary parameter
# ---------------------------------------------------------------------------


def _t_lead(fr, N: APoly, P: int) -> Fraction:
    """log_q |t(w)|, raising the precision until t is certified nonzero."""
    work = P
    for _ in range(12):
        t = eisenstein.boundary_parameter(fr, N, work)
        if not t.is_zero():
            return Fraction(-t.lead, fr.spec.e)
        work *= 2
    raise PrecisionError("boundary parameter vanishes to every tried precision")


def check_t_invariance(s: Suite) -> CheckResult:
    P = s.P
    tally = Tally(P)
    rng = s.rng("t-invariance")
    N = s.T
    for c in (2, 3, 4):
        fr = s.ray(c)
        for _ in range(3):
            b = APoly(s.fld, tuple(rng.randrange(s.fld.order) for _ in range(2)))
            g = GammaMatrix.elementary(s.fld, 2, 0, 1, N * b)
            gw, aut = gamma_act(g, fr)
            tally.residual(eisenstein.boundary_parameter(gw, N, P) - eisenstein.boundary_parameter(fr, N, P))
    return tally.result("t-invariance", P, level=str(N))


def check_t_monotone(s: Suite) -> CheckResult:
    tally = Tally(None)
    logs = [_t_lead(s.ray(c), s.T, 8) for c in (1, 2, 3, 4)]
    tally.truth(all(a > b for a, b in zip(logs, logs[1:])), f"log|t| = {[str(x) for x in logs]}")
    return tally.result("t-monotone", s.P, log_t=[str(x) for x in logs])


def _slope(xs, ys) -> Fraction:
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


def check_vanishing_order(s: Suite) -> CheckResult:
    """Slope of log|E_u| against log|t| along w_1 = T^(c+1/2), u_1 = a/N."""
    tally = Tally(None)
    T, one = s.T, APoly.one(s.fld)
    r = 2
    slopes = {}
    for N, a in ((T, one), (T ** 2, T)):
        xs, ys = [], []
        for c in range(2, 7):
            fr = s.ray(c)
            xs.append(_t_lead(fr, N, 8))
            d = drinfeld.division_point(fr, CongClass(N, (a, one)), 8)
            ys.append(Fraction(d.lead, fr.spec.e))   # log|E_u| = -log|d_u|
        slope = _slope(xs, ys)
        want = s.cfg.q ** (a.degree() * (r - 1))
        slopes[f"a={a}"] = [str(slope), want]
        tally.truth(abs(slope - want) <= Fraction(1, 4), f"a={a}: slope {slope} vs {want}")
    return tally.result("vanishing-order", s.P, slopes=slopes, tolerance="1/4")


# ---------------------------------------------------------------------------
# Combinatorial checks
# ---------------------------------------------------------------------------


def check_cusp_count(s: Suite) -> CheckResult:
    tally = Tally(None)
    skipped = 0
    for r in (2, 3):
        for N in modspace.levels(s.fld, s.cfg.deg_cap):
            try:
                b = modspace.cusp_count(N, r, "enumerate")
            except ResourceError:
                skipped += 1
                continue
            a = modspace.cusp_count(N, r, "formula")
            tally.truth(a == b, f"r={r} N={N}: {a} != {b}")
    return tally.result("cusp-count", s.P, deg_cap=s.cfg.deg_cap, skipped=skipped)


def check_curve_formulas(s: Suite) -> CheckResult:
    tally = Tally(None)
    q = s.cfg.q
    for N in modspace.levels(s.fld, s.cfg.deg_cap):
        inv = modspace.curve_invariants(N, 6)
        d = N.degree()
        tally.truth(inv.cusps == modspace.cusp_count(N, 2), f"N={N}: cusp numbers differ")
        step = inv.lam * q ** d // (q * q - 1)
        for k in range(2, 7):
            tally.truth(inv.dim_mod[k] - inv.dim_mod[k - 1] == step, f"N={N}: increment at k={k}")
            tally.truth(inv.deg_m * k + 1 - inv.genus == inv.dim_mod[k], f"N={N}: Riemann-Roch at k={k}")
        tally.truth(inv.dim_mod[1] == inv.cusps, f"N={N}: dim Mod_1 != c(N)")
    return tally.result("curve-formulas", s.P, deg_cap=s.cfg.deg_cap)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


REGISTRY = (
    ("smb-orthogonality", check_smb_orthogonality),
    ("smb-invariance", check_smb_invariance),
    ("fundamental-domain", check_fundamental_domain),
    ("full-covariance", check_full_covariance),
    ("partial-covariance", check_partial_covariance),
    ("restricted-covariance", check_restricted_covariance),
    ("exp-recursion", check_exp_recursion),
    ("functional-equation", check_functional_equation),
    ("division-product", check_division_product),
    ("division-points", check_division_points),
    ("symmetric-functions", check_symmetric_functions),
    ("distribution", check_distribution),
    ("scaling", check_scaling),
    ("moebius-direct", check_moebius_direct),
    ("basis-rank", check_basis_rank),
    ("boundary-degeneration", check_boundary_degeneration),
    ("goss-identity", check_goss_identity),
    ("t-invariance", check_t_invariance),
    ("t-monotone", check_t_monotone),
    ("vanishing-order", check_vanishing_order),
    ("cusp-count", check_cusp_count),
    ("curve-formulas", check_curve_formulas),
    ("separation", check_separation),
    ("level-invariance", check_level_invariance),
)

CHECK_NAMES = tuple(name for name, _ in REGISTRY)


def run_check(cfg: RunConfig, name: str, fault: str | None = None) -> CheckResult:
    func = dict(REGISTRY)[name]
    suite = Suite(cfg, fault)
    try:
        return func(suite)
    except PrecisionError as exc:
        return CheckResult(name, INSUFFICIENT, None, None, cfg.P, 0, {"error": str(exc)})


def run_suite(cfg: RunConfig, names=None, fault: str | None = None, jobs: int = 1) -> list:
    """Results in registry order, whatever order they finish in."""
    names = [n for n in CHECK_NAMES if names is None or n in names]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_check, [cfg] * len(names), names, [fault] * len(names)))
    return [run_check(cfg, n, fault) for n in names]


def summarize(results) -> dict:
    counts = {PASS: 0, FAIL: 0, INSUFFICIENT: 0}
    for r in results:
        counts[r.status] += 1
    return {"total": len(results), **counts}
