"""Cusp counts, genus, degree and dimension formulas for the modular
varieties of level N, with brute-force cross-checks.  Integers only."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arithmetic import APoly, factor, gcd, monic_polys, polys_below
from .errors import DomainError, ResourceError

MAX_ENUMERATION = 10 ** 7


def _check_level(N: APoly) -> APoly:
    if N.degree() < 1:
        raise DomainError("level must have positive degree")
    if not N.is_monic():
        raise DomainError("level must be monic")
    return N


def _prime_data(N: APoly):
    """[(q_i, s_i)] with q_i = q^deg(P_i) over the factorization N = prod P_i^s_i."""
    q = N.field.order
    return [(q ** P.degree(), s) for P, s in factor(N).factors]


def lambda_of(N: APoly) -> int:
    """prod q_i^(2 s_i - 2) (q_i^2 - 1)."""
    _check_level(N)
    out = 1
    for qi, si in _prime_data(N):
        out *= qi ** (2 * si - 2) * (qi * qi - 1)
    return out


def _cusp_formula(N: APoly, r: int) -> int:
    q = N.field.order
    num = 1
    for qi, si in _prime_data(N):
        num *= (qi ** r - 1) * qi ** ((si - 1) * r)
    if num % (q - 1):
        raise ArithmeticError("cusp count formula is not integral")
    return num // (q - 1)


def _cusp_enumerate(N: APoly, r: int) -> int:
    """#{primitive vectors in (A/N)^r} / #F^*, by gcd reduction over (A/N)^r."""
    q = N.field.order
    d = N.degree()
    if q ** (r * d) > MAX_ENUMERATION:
        raise ResourceError(f"enumeration of (A/N)^{r} exceeds {MAX_ENUMERATION} vectors")
    # label each residue by gcd(a, N); gcd of a vector (with N) is a table fold
    labels, keys, divisors = [], {}, []
    for a in polys_below(N.field, d):
        g = gcd(a, N)
        if g.key() not in keys:
            keys[g.key()] = len(divisors)
            divisors.append(g)
        labels.append(keys[g.key()])
    n = len(divisors)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(divisors):
        for j, b in enumerate(divisors):
            g = gcd(a, b)
            if g.key() not in keys:
                keys[g.key()] = len(divisors)
                divisors.append(g)
            table[i, j] = keys[g.key()]
    if len(divisors) > n:  # gcds of gcds are gcds with N, so this cannot grow
        raise AssertionError("divisor labels not closed under gcd")
    unit = keys[APoly.one(N.field).key()]
    lab = np.asarray(labels, dtype=np.int64)
    acc = lab
    for _ in range(r - 1):
        acc = table[acc[:, None], lab[None, :]].reshape(-1)
    count = int(np.count_nonzero(acc == unit))
    return count // (q - 1)


def cusp_count(N: APoly, r: int, method: str = "formula") -> int:
    """c_r(N), the number of cusps (boundary components) of level N."""
    _check_level(N)
    if r < 2:
        raise DomainError("rank must be at least 2")
    if method == "formula":
        return _cusp_formula(N, r)
    if method == "enumerate":
        return _cusp_enumerate(N, r)
    raise DomainError(f"unknown method {method!r}")


def dim_eis(N: APoly, r: int) -> int:
    return cusp_count(N, r)


@dataclass(frozen=True)
class CurveInvariants:
    N: APoly
    q: int
    lam: int
    genus: int
    cusps: int
    deg_m: int
    dim_mod: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "N": str(self.N),
            "deg": self.N.degree(),
            "q": self.q,
            "lambda": self.lam,
            "genus": self.genus,
            "cusps": self.cusps,
            "deg_M": self.deg_m,
            "dim_mod": {str(k): v for k, v in sorted(self.dim_mod.items())},
        }


def _exact(num: int, den: int, what: str) -> int:
    if num % den:
        raise ArithmeticError(f"{what} is not integral ({num}/{den})")
    return num // den


def dim_mod(N: APoly, k: int) -> int:
    """((k-1) q^d + q + 1) lambda / (q^2 - 1), k >= 1."""
    if k < 1:
        raise DomainError("weight must be positive")
    q, d = N.field.order, N.degree()
    return _exact(((k - 1) * q ** d + q + 1) * lambda_of(N), q * q - 1, "dim Mod_k")


def curve_invariants(N: APoly, k_max: int = 5, r: int = 2) -> CurveInvariants:
    """Genus, cusp number, degree of M and dim Mod_k (k <= k_max) in rank 2."""
    if r != 2:
        raise DomainError("curve invariants are available in rank 2 only")
    _check_level(N)
    q, d = N.field.order, N.degree()
    lam = lambda_of(N)
    genus = 1 + _exact(lam * (q ** d - q - 1), q * q - 1, "genus")
    cusps = _exact(lam, q - 1, "cusp number")
    if cusps != cusp_count(N, 2):
        raise ArithmeticError("cusp number disagrees with the rank-2 cusp count")
    deg_m = _exact(lam * q ** d, q * q - 1, "deg M")
    dims = {k: dim_mod(N, k) for k in range(1, k_max + 1)}
    return CurveInvariants(N, q, lam, genus, cusps, deg_m, dims)


def levels(fld, deg_max: int):
    """All monic N with 1 <= deg N <= deg_max, by degree then coefficients."""
    out = []
    for d in range(1, deg_max + 1):
        out.extend(monic_polys(fld, d))
    return out


def invariants_table(fld, deg_max: int, r: int = 2, k_max: int = 5) -> list:
    """One row per monic level of degree <= deg_max."""
    rows = []
    for N in levels(fld, deg_max):
        row = {"N": str(N), "deg": N.degree(), "r": r, "cusps": cusp_count(N, r)}
        if r == 2:
            inv = curve_invariants(N, k_max)
            row.update({"lambda": inv.lam, "genus": inv.genus, "deg_M": inv.deg_m,
                        "dim_mod": {str(k): v for k, v in inv.dim_mod.items()}})
        rows.append(row)
    return rows
