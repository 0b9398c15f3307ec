"""A-lattices spanned by series: independence, reduction to a successive
minimum basis, the GL(r, A) action and certified enumeration of lattice balls."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arithmetic import APoly, CongClass, FqConfig, ext_coordinates, gcd
from .errors import DomainError, PrecisionError, ResourceError
from .series import FieldSpec, SeriesElem, EXACT_ZERO_PREC

MAX_BALL_POINTS = 1 << 16


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeFrame:
    """An ordered tuple (w_1, ..., w_r) of series spanning the lattice sum A*w_i."""

    omegas: tuple

    def __post_init__(self):
        if not self.omegas:
            raise DomainError("a frame needs at least one vector")
        spec = self.omegas[0].spec
        if any(w.spec != spec for w in self.omegas):
            raise DomainError("frame vectors live in different fields")
        object.__setattr__(self, "omegas", tuple(self.omegas))

    @property
    def spec(self) -> FieldSpec:
        return self.omegas[0].spec

    @property
    def rank(self) -> int:
        return len(self.omegas)

    @property
    def prec(self) -> int:
        return min(w.prec for w in self.omegas)

    def __getitem__(self, i: int) -> SeriesElem:
        return self.omegas[i]

    def __iter__(self):
        return iter(self.omegas)

    def normalized(self) -> "LatticeFrame":
        """The same point of Omega^r, scaled so that the last vector is 1."""
        last = self.omegas[-1]
        if last.is_zero():
            raise PrecisionError("last frame vector vanishes to precision")
        inv = last.inverse()
        return LatticeFrame(tuple(w * inv for w in self.omegas[:-1]) + (SeriesElem.one(self.spec, inv.prec),))

    def scaled(self, c: SeriesElem) -> "LatticeFrame":
        return LatticeFrame(tuple(w * c for w in self.omegas))

    def truncate(self, prec: int) -> "LatticeFrame":
        return LatticeFrame(tuple(w.truncate(prec) for w in self.omegas))

    def combine(self, coeffs) -> SeriesElem:
        """sum a_i w_i for a vector of APoly."""
        total = None
        for a, w in zip(coeffs, self.omegas):
            if a.is_zero():
                continue
            term = w.mul_apoly(a)
            total = term if total is None else total + term
        return total if total is not None else SeriesElem.zero(self.spec, EXACT_ZERO_PREC)

    def to_json(self) -> list:
        return [w.to_json() for w in self.omegas]

    @classmethod
    def from_json(cls, data, spec: FieldSpec | None = None) -> "LatticeFrame":
        if isinstance(data, dict):
            data = data["omegas"]
        return cls(tuple(SeriesElem.from_json(d, spec) for d in data))


# ---------------------------------------------------------------------------
# Matrices over A
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaMatrix:
    """r x r matrix over A = F_q[T], stored as a tuple of rows."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise DomainError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def field(self):
        return self.rows[0][0].field

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    @classmethod
    def identity(cls, fld, r: int) -> "GammaMatrix":
        return cls(tuple(tuple(APoly.one(fld) if i == j else APoly.zero(fld) for j in range(r))
                         for i in range(r)))

    @classmethod
    def elementary(cls, fld, r: int, i: int, j: int, a: APoly) -> "GammaMatrix":
        """Identity plus a in position (i, j), i != j."""
        rows = [list(row) for row in cls.identity(fld, r).rows]
        rows[i][j] = rows[i][j] + a
        return cls(tuple(tuple(x) for x in rows))

    @classmethod
    def permutation(cls, fld, perm) -> "GammaMatrix":
        """Row i of the result is e_{perm[i]}."""
        r = len(perm)
        return cls(tuple(tuple(APoly.one(fld) if perm[i] == j else APoly.zero(fld) for j in range(r))
                         for i in range(r)))

    @classmethod
    def diagonal(cls, fld, entries) -> "GammaMatrix":
        r = len(entries)
        return cls(tuple(tuple(APoly.const(fld, entries[i]) if i == j else APoly.zero(fld)
                               for j in range(r)) for i in range(r)))

    def __matmul__(self, other: "GammaMatrix") -> "GammaMatrix":
        r = self.size
        fld = self.field
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = APoly.zero(fld)
                for k in range(r):
                    acc = acc + self.rows[i][k] * other.rows[k][j]
                row.append(acc)
            out.append(tuple(row))
        return GammaMatrix(tuple(out))

    def det(self) -> APoly:
        return _det([list(r) for r in self.rows], self.field)

    def is_unimodular(self) -> bool:
        return self.det().degree() == 0

    def inverse(self) -> "GammaMatrix":
        d = self.det()
        if d.degree() != 0:
            raise DomainError("matrix is not in GL(r, A)")
        fld = self.field
        inv_d = fld.inv(d.lc())
        r = self.size
        rows = [list(x) for x in self.rows]
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                minor = [rows[a][:i] + rows[a][i + 1:] for a in range(r) if a != j]
                cof = _det(minor, fld) if minor else APoly.one(fld)
                if (i + j) % 2:
                    cof = -cof
                row.append(cof.scale(inv_d))
            out.append(tuple(row))
        return GammaMatrix(tuple(out))

    def level(self) -> APoly:
        """Largest monic N with self = 1 mod N (zero polynomial for the identity)."""
        fld = self.field
        g = APoly.zero(fld)
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                y = x - APoly.one(fld) if i == j else x
                g = gcd(g, y)
        return g

    def max_degree(self) -> int:
        return max(x.degree() for row in self.rows for x in row)

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.rows]

    @classmethod
    def from_json(cls, fld, data) -> "GammaMatrix":
        return cls(tuple(tuple(APoly(fld, x) for x in row) for row in data))

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(x) for x in row) for row in self.rows) + "]"


def _det(m, fld) -> APoly:
    r = len(m)
    if r == 1:
        return m[0][0]
    if r == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = APoly.zero(fld)
    for j in range(r):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor, fld)
        total = total - term if j % 2 else total + term
    return total


def _random_poly(fld, rng: random.Random, max_deg: int) -> APoly:
    d = rng.randint(0, max_deg)
    return APoly(fld, [rng.randrange(fld.order) for _ in range(d + 1)])


def random_gamma(fld, r: int, rng: random.Random, max_deg: int = 2, level: APoly | None = None,
                 steps: int = 4) -> GammaMatrix:
    """Seeded element of GL(r, A) (or of Gamma(level)) with entry degrees <= max_deg.

    Built as a product of elementary matrices and, outside Gamma(N), a random
    diagonal unit and permutation; draws with larger entries are rejected.
    """
    for _ in range(1000):
        g = GammaMatrix.identity(fld, r)
        for _ in range(steps):
            i, j = rng.sample(range(r), 2)
            if level is None:
                a = _random_poly(fld, rng, 1)
            else:
                a = level * _random_poly(fld, rng, max(0, max_deg - level.degree()))
            g = g @ GammaMatrix.elementary(fld, r, i, j, a)
        if level is None:
            g = g @ GammaMatrix.diagonal(fld, [rng.randrange(1, fld.order) for _ in range(r)])
            perm = list(range(r))
            rng.shuffle(perm)
            g = g @ GammaMatrix.permutation(fld, perm)
        if g.max_degree() <= max_deg and g != GammaMatrix.identity(fld, r):
            return g
    raise ResourceError("could not draw a matrix within the degree bound")


# ---------------------------------------------------------------------------
# K_infinity coordinates and independence
# ---------------------------------------------------------------------------


def kinf_spec(spec: FieldSpec) -> FieldSpec:
    """F_q((1/T)) itself, as a series field with e = m = 1."""
    cfg = spec.config
    return FieldSpec(FqConfig(cfg.p, cfg.s, 1), 1)


def kinf_coordinates(x: SeriesElem) -> list:
    """Coordinates of x over K_infinity in the basis xi^a u^j (a < m, j < e)."""
    spec = x.spec
    e, m = spec.e, spec.m
    cfg = spec.config
    coords = ext_coordinates(cfg.p, cfg.s, m)
    kspec = kinf_spec(spec)
    out = []
    for a in range(m):
        for j in range(e):
            # exponents n = e*t + j with lead <= n < prec
            t_lo = -((-(x.lead - j)) // e)
            t_hi = -((-(x.prec - j)) // e)
            terms = {}
            for t in range(t_lo, t_hi):
                n = e * t + j
                c = x.coeff(n)
                if c:
                    terms[t] = coords[c][a]
            out.append(SeriesElem.from_terms(kspec, terms, t_hi))
    return out


def _row_prec(row) -> int:
    return min(x.prec for x in row)


def check_independent(frame: LatticeFrame, P: int | None = None) -> bool:
    """Whether the frame vectors are K_infinity-linearly independent.

    A dependency is reported only when the eliminated row vanishes to at
    least P digits of 1/T (default: half of the frame's relative precision,
    converted to K_infinity digits); anything weaker raises PrecisionError.
    """
    spec = frame.spec
    r = frame.rank
    if P is None:
        P = max(1, min(w.prec - min(w.lead, w.prec) for w in frame) // (2 * spec.e))
    if r > spec.e * spec.m:
        return False
    rows = [kinf_coordinates(w) for w in frame]
    live = list(range(r))
    while live:
        best = None
        for i in live:
            for j, x in enumerate(rows[i]):
                if not x.is_zero() and (best is None or x.lead < best[0]):
                    best = (x.lead, i, j)
        if best is None:
            break
        _, i, j = best
        live.remove(i)
        piv_inv = rows[i][j].inverse()
        for k in live:
            if rows[k][j].is_zero():
                continue
            f = rows[k][j] * piv_inv
            rows[k] = [a - f * b for a, b in zip(rows[k], rows[i])]
    if not live:
        return True
    worst = max(_row_prec(rows[i]) for i in live)
    if worst >= P:
        return False
    raise PrecisionError(f"independence undecided: residual row vanishes only to 1/T^{worst}")


# ---------------------------------------------------------------------------
# Successive minimum bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SMBCertificate:
    """Reduced frame (norms non-increasing), change of basis C with
    frame = C * input, and the successive minima as log_q norms, ascending."""

    frame: LatticeFrame
    change_of_basis: GammaMatrix
    minima: tuple

    @property
    def ascending(self) -> tuple:
        return tuple(reversed(self.frame.omegas))

    def to_json(self) -> dict:
        return {
            "frame": self.frame.to_json(),
            "change_of_basis": self.change_of_basis.to_json(),
            "minima": [str(x) for x in self.minima],
        }


def _fq_dependency(codes, spec: FieldSpec):
    """A nonzero F_q-vector c with sum c_i * codes_i = 0, or None."""
    cfg = spec.config
    base = cfg.base
    coords = ext_coordinates(cfg.p, cfg.s, cfg.m)
    n = len(codes)
    # Gaussian elimination over F_q on the columns = code coordinates,
    # tracking combinations of the input vectors.
    vecs = [list(coords[c]) for c in codes]
    combo = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivots = []
    for i in range(n):
        v, cmb = vecs[i], combo[i]
        for (col, pv, pc) in pivots:
            if v[col]:
                f = base.mul(v[col], base.inv(pv[col]))
                v = [base.sub(a, base.mul(f, b)) for a, b in zip(v, pv)]
                cmb = [base.sub(a, base.mul(f, b)) for a, b in zip(cmb, pc)]
        nz = next((c for c, x in enumerate(v) if x), None)
        if nz is None:
            return cmb
        pivots.append((nz, v, cmb))
    return None


def _orthogonality_defect(vectors, spec: FieldSpec):
    """Return (class members, F_q dependency) for a class whose leading
    coefficients are dependent, or None if the vectors are orthogonal."""
    e = spec.e
    classes: dict = {}
    for i, w in enumerate(vectors):
        if w.is_zero():
            raise PrecisionError(f"vector {i} vanishes to precision u^{w.prec}")
        classes.setdefault(w.lead % e, []).append(i)
    for key in sorted(classes):
        members = classes[key]
        dep = _fq_dependency([vectors[i].leading_coeff() for i in members], spec)
        if dep is not None:
            return members, dep
    return None


def is_orthogonal(vectors) -> bool:
    vectors = list(vectors)
    return _orthogonality_defect(vectors, vectors[0].spec) is None


def smb_reduce(frame: LatticeFrame, max_steps: int = 10000) -> SMBCertificate:
    spec = frame.spec
    fld = spec.config.base
    r = frame.rank
    e = spec.e
    vecs = list(frame.omegas)
    C = [list(row) for row in GammaMatrix.identity(fld, r).rows]
    for _ in range(max_steps):
        defect = _orthogonality_defect(vecs, spec)
        if defect is None:
            break
        members, dep = defect
        support = [(i, c) for i, c in zip(members, dep) if c]
        # reduce the longest vector in the dependency
        j, cj = min(support, key=lambda t: (vecs[t[0]].lead, -t[0]))
        inv = fld.inv(cj)
        new = vecs[j]
        new_row = C[j]
        for i, c in support:
            if i == j:
                continue
            shift = (vecs[i].lead - vecs[j].lead) // e
            a = APoly(fld, (0,) * shift + (fld.mul(c, inv),))
            new = new + vecs[i].mul_apoly(a)
            new_row = [x + a * y for x, y in zip(new_row, C[i])]
        if new.is_zero() or new.lead <= vecs[j].lead:
            raise PrecisionError(f"reduction of vector {j} lost precision at u^{new.prec}")
        vecs[j], C[j] = new, new_row
    else:
        raise ResourceError("lattice reduction did not terminate")
    order = sorted(range(r), key=lambda i: (vecs[i].lead, i))
    frame_out = LatticeFrame(tuple(vecs[i] for i in order))
    cob = GammaMatrix(tuple(tuple(C[i]) for i in order))
    minima = tuple(sorted(Fraction(-v.lead, e) for v in vecs))
    return SMBCertificate(frame_out, cob, minima)


def in_fundamental_domain(frame: LatticeFrame) -> bool:
    """Whether (w_r, ..., w_1) is a successive minimum basis of its lattice."""
    leads = [w.lead for w in frame]
    if any(w.is_zero() for w in frame):
        raise PrecisionError("frame vector vanishes to precision")
    if any(a > b for a, b in zip(leads, leads[1:])):
        return False
    return is_orthogonal(frame.omegas)


# ---------------------------------------------------------------------------
# GL(r, A) action
# ---------------------------------------------------------------------------


def gamma_act_raw(gamma: GammaMatrix, frame: LatticeFrame) -> LatticeFrame:
    """gamma * frame without renormalisation (action on Psi^r)."""
    if gamma.size != frame.rank:
        raise DomainError("matrix size does not match frame rank")
    if not gamma.is_unimodular():
        raise DomainError("matrix is not in GL(r, A)")
    return LatticeFrame(tuple(frame.combine(row) for row in gamma.rows))


def gamma_act(gamma: GammaMatrix, frame: LatticeFrame):
    """Return (gamma*w renormalised to last coordinate 1, aut(gamma, w))."""
    moved = gamma_act_raw(gamma, frame)
    aut = moved.omegas[-1]
    if aut.is_zero():
        raise PrecisionError("factor of automorphy vanishes to precision")
    return moved.normalized(), aut


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def enumerate_points(frame: LatticeFrame, deg_bound: int):
    """Yield (a, sum a_i w_i) for every nonzero a in A^r with deg a_i <= D."""
    if deg_bound < 0:
        raise DomainError("degree bound must be nonnegative")
    fld = frame.spec.config.base
    polys = [APoly(fld, c) for c in itertools.product(fld.elements(), repeat=deg_bound + 1)]
    polys.sort(key=APoly.key)
    for vec in itertools.product(polys, repeat=frame.rank):
        if all(a.is_zero() for a in vec):
            continue
        yield vec, frame.combine(vec)


# ---------------------------------------------------------------------------
# Balls of lattice points with certified tail data
# ---------------------------------------------------------------------------


@dataclass
class Ball:
    """V = lattice points of norm <= q^rho, an F_q-space with orthogonal basis.

    ``rho_next`` is the smallest norm exponent outside V, ``bound`` the
    quantity B with log_q |e_V(c)| >= B for every c outside V (and every
    translate by a reduced class), ``w_min`` the smallest norm exponent in V.
    """

    basis: list      # SeriesElem, ascending norms
    norms: list      # Fractions
    rho: Fraction
    rho_next: Fraction
    bound: Fraction
    w_min: Fraction | None
    q: int
    members: list    # (i, j): generator T^j * s_i, s the ascending reduced basis

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.q ** self.dim

    def coset_tail(self, k: int) -> Fraction:
        """Valuation bound for the sum over cosets outside V of (y + mu)^-k."""
        if self.dim == 0:
            return k * self.bound
        beta = min(self.bound, self.w_min)
        return self.bound + (k - 1) * beta

    def exp_tail(self, i: int) -> Fraction:
        """Valuation bound for alpha_i(lattice) - alpha_i(V)."""
        q, B = self.q, self.bound
        w = self.w_min if self.dim else Fraction(0)
        return min((q ** j - 1) * B + (q ** i - q ** j) * w for j in range(1, i + 1)) if i else None

    def points_array(self, lo: int, hi: int) -> np.ndarray:
        """All q^dim points as digit windows u^lo..u^(hi-1), canonical order."""
        spec = self.basis[0].spec if self.basis else None
        if spec is None:
            raise DomainError("empty ball has no field")
        df = spec.digits
        base = spec.config.base
        cfg = spec.config
        pts = np.zeros((1, hi - lo, spec.nd), dtype=np.int64)
        for b in self.basis:
            win = b.window(lo, hi)
            layers = [pts]
            for c in range(1, base.order):
                mat = df.scalar_matrix(cfg.embed(c))
                layers.append((pts + (win @ mat)[None]) % spec.p)
            pts = np.concatenate(layers)
        return pts

    def to_json(self) -> dict:
        return {"dim": self.dim, "rho": str(self.rho), "rho_next": str(self.rho_next),
                "bound": str(self.bound)}


def _ball_data(norms_asc, r_norms, rho: Fraction, q: int):
    """Basis exponents (i, j) of V(rho) and its tail quantities."""
    members = []
    nxt = None
    for i, w in enumerate(r_norms):
        j = 0
        while w + j <= rho:
            members.append((w + j, i, j))
            j += 1
        cand = w + j
        nxt = cand if nxt is None else min(nxt, cand)
    members.sort()
    bound = nxt
    for t, (w, _, _) in enumerate(members):
        bound += (q - 1) * q ** t * (nxt - w)
    return members, nxt, bound


def ball_for_bound(cert: SMBCertificate, need: Fraction, max_points: int = MAX_BALL_POINTS,
                   min_rho: Fraction | None = None) -> Ball:
    """Smallest ball V with B >= need (and rho >= min_rho)."""
    asc = cert.ascending
    spec = asc[0].spec
    q = spec.q
    norms = [v.log_norm() for v in asc]
    rho = min(norms) - 1
    step = Fraction(1, spec.e)
    while True:
        members, nxt, bound = _ball_data(norms, norms, rho, q)
        if bound >= need and (min_rho is None or rho >= min_rho):
            break
        if q ** (len(members) + 1) > max_points:
            raise ResourceError(f"ball with tail bound {need} needs more than {max_points} points")
        rho = nxt
    basis = [asc[i].shift(-spec.e * j) for (_, i, j) in members]
    return Ball(basis, [w for w, _, _ in members], rho, nxt, bound,
                members[0][0] if members else None, q, [(i, j) for _, i, j in members])


def fixed_ball(cert: SMBCertificate, rho: Fraction) -> Ball:
    asc = cert.ascending
    spec = asc[0].spec
    norms = [v.log_norm() for v in asc]
    members, nxt, bound = _ball_data(norms, norms, rho, spec.q)
    basis = [asc[i].shift(-spec.e * j) for (_, i, j) in members]
    return Ball(basis, [w for w, _, _ in members], rho, nxt, bound,
                members[0][0] if members else None, spec.q, [(i, j) for _, i, j in members])


# ---------------------------------------------------------------------------
# Sample frames
# ---------------------------------------------------------------------------


def builtin_frame(name: str, config: FqConfig, prec: int) -> LatticeFrame:
    """The canonical test lattices: A; (T^(1/2), 1); (T^(2/3), T^(1/3), 1)."""
    if name == "carlitz":
        spec = FieldSpec(config, 1)
        return LatticeFrame((SeriesElem.one(spec, prec),))
    if name == "rank2-sqrt":
        spec = FieldSpec(config, 2)
        return LatticeFrame((SeriesElem.T_power(spec, 1, 2, prec), SeriesElem.one(spec, prec)))
    if name == "rank3-cbrt":
        spec = FieldSpec(config, 3)
        return LatticeFrame((SeriesElem.T_power(spec, 2, 3, prec), SeriesElem.T_power(spec, 1, 3, prec),
                             SeriesElem.one(spec, prec)))
    raise DomainError(f"unknown builtin lattice {name!r}")


BUILTINS = ("carlitz", "rank2-sqrt", "rank3-cbrt")


def random_fd_frame(spec: FieldSpec, r: int, rng: random.Random, prec: int, tail: int = 12,
                    max_shift: int = 1, lead_code: int | None = None) -> LatticeFrame:
    """Seeded point (w_1, ..., w_{r-1}, 1) of the fundamental domain.

    With r <= e the leading exponent of w_i is -(r-i) - e*d_i, d_i non-increasing
    in i, so leading exponents lie in distinct classes mod e and norms are
    non-increasing.  Otherwise a random frame is reduced and renormalised.
    ``lead_code`` fixes the leading coefficient of w_1 (r <= e only).
    """
    e = spec.e
    if r > e * spec.m:
        raise DomainError("rank exceeds [K:K_inf]; no independent frame exists")
    gf = spec.config.ext

    def noisy(lead, code=None):
        terms = {lead: rng.randrange(1, gf.order) if code is None else code}
        for t in range(1, tail):
            terms[lead + t] = rng.randrange(gf.order)
        return SeriesElem.from_terms(spec, terms, prec)

    if r <= e:
        shifts, d = [], 0
        for _ in range(r - 1):
            d += rng.randint(0, max_shift)
            shifts.append(d)
        shifts.reverse()  # d_1 >= d_2 >= ... >= d_{r-1}
        omegas = [noisy(-(r - i) - e * shifts[i - 1], lead_code if i == 1 else None) for i in range(1, r)]
        return LatticeFrame(tuple(omegas) + (SeriesElem.one(spec, prec),))
    for _ in range(100):
        frame = LatticeFrame(tuple(noisy(-rng.randint(0, e * (max_shift + 1))) for _ in range(r)))
        try:
            if not check_independent(frame):
                continue
        except PrecisionError:
            continue
        return smb_reduce(frame).frame.normalized()
    raise ResourceError("could not draw an independent frame")


def sample_frames(spec: FieldSpec, r: int, count: int, seed: int, prec: int) -> list:
    """Seeded fundamental-domain points for rank computations.

    The leading coefficient of w_1 runs through F_{q^m}^* so that the points
    are spread over distinct residue discs as far as the field allows.
    """
    rng = random.Random(seed)
    units = spec.config.ext.order - 1
    return [random_fd_frame(spec, r, rng, prec, lead_code=1 + j % units) for j in range(count)]
