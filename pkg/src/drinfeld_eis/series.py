"""Truncated Laurent series in u = T^(-1/e) over F_{q^m} with tracked precision.

A ``SeriesElem`` is known modulo O(u^prec).  Coefficients are stored as a
read-only int64 array of shape (prec - lead, nd): row i holds the base-p
digits of the coefficient of u^(lead + i), nd = s*m being the degree of
F_{q^m} over F_p.  Valuations are normalised so that v(T) = -1, hence
v(u) = 1/e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arithmetic import APoly, FqConfig, galois_field
from .errors import DomainError, PrecisionError


# ---------------------------------------------------------------------------
# Digit-level field helpers
# ---------------------------------------------------------------------------


class DigitField:
    """Vectorised F_{p^nd} arithmetic on digit arrays (last axis = digits)."""

    def __init__(self, p: int, nd: int):
        self.p, self.nd = p, nd
        self.gf = gf = galois_field(p, nd)
        self.table = np.array([gf.digits(a) for a in range(gf.order)], dtype=np.int64)
        self.weights = np.array([p ** i for i in range(nd)], dtype=np.int64)
        # x^j mod the field polynomial, j < 2nd - 1
        red = np.zeros((2 * nd - 1, nd), dtype=np.int64)
        for j in range(2 * nd - 1):
            red[j] = gf.digits(gf.pow(p, j)) if nd > 1 else (1,)
        self.reduce_matrix = red
        # digits(x*y) = (x outer y).reshape(nd*nd) @ mul_tensor (mod p)
        self.mul_tensor = np.stack([red[i + j] for i in range(nd) for j in range(nd)])

    def codes(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.weights

    def digits(self, codes) -> np.ndarray:
        return self.table[np.asarray(codes, dtype=np.int64)]

    def reduce(self, raw: np.ndarray) -> np.ndarray:
        """raw[..., 2nd-1] (polynomial in x, unreduced) -> digits mod p."""
        if self.nd == 1:
            return raw % self.p
        return (raw % self.p) @ self.reduce_matrix % self.p

    @lru_cache(maxsize=None)
    def frobenius_matrix(self, power: int) -> np.ndarray:
        """Matrix M with digits(c^power) = digits(c) @ M, power a power of p."""
        if self.nd == 1:
            return np.ones((1, 1), dtype=np.int64)
        gf = self.gf
        rows = [gf.digits(gf.pow(self.p ** j, power)) for j in range(self.nd)]
        return np.array(rows, dtype=np.int64)

    def scalar_matrix(self, c: int) -> np.ndarray:
        """Matrix M with digits(c*x) = digits(x) @ M."""
        gf = self.gf
        if self.nd == 1:
            return np.array([[c % self.p]], dtype=np.int64)
        rows = [gf.digits(gf.mul(c, self.p ** j)) for j in range(self.nd)]
        return np.array(rows, dtype=np.int64)


@lru_cache(maxsize=None)
def digit_field(p: int, nd: int) -> DigitField:
    return DigitField(p, nd)


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def convolve(a: np.ndarray, b: np.ndarray, df: DigitField, length: int | None = None) -> np.ndarray:
    """Product of digit-series a (..., La, nd) and b (..., Lb, nd), first ``length`` terms.

    Broadcasts over leading axes.  Uses exact integer convolution for short
    inputs and a float FFT (exact after rounding for these magnitudes) otherwise.
    """
    la, lb = a.shape[-2], b.shape[-2]
    full = la + lb - 1
    if length is None:
        length = full
    length = min(length, full)
    nd, p = df.nd, df.p
    if la == 0 or lb == 0 or length <= 0:
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (max(length, 0), nd)
        return np.zeros(shape, dtype=np.int64)
    a = a[..., :length, :]
    b = b[..., :length, :]
    la, lb = a.shape[-2], b.shape[-2]
    if min(la, lb) <= 24 or (a.ndim == 2 and b.ndim == 2 and la * lb <= 4096):
        # schoolbook over the shorter operand
        if la < lb:
            a, b, la, lb = b, a, lb, la
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (length, nd)
        raw = np.zeros(shape, dtype=np.int64)
        for j in range(lb):
            span = min(la, length - j)
            if span <= 0:
                break
            bj = b[..., j:j + 1, :]
            if nd == 1:
                raw[..., j:j + span, :] += a[..., :span, :] * bj
            else:
                prod = a[..., :span, :, None] * bj[..., :, None, :]
                raw[..., j:j + span, :] += prod.reshape(prod.shape[:-2] + (nd * nd,)) @ df.mul_tensor
            if j % 64 == 63:
                raw %= p
        return raw % p
    n = _next_pow2(la + lb - 1)
    fa = np.fft.rfft(a.astype(np.float64), n=n, axis=-2)
    fb = np.fft.rfft(b.astype(np.float64), n=n, axis=-2)
    if nd == 1:
        prod = fa * fb
    else:
        shape = np.broadcast_shapes(fa.shape[:-1], fb.shape[:-1]) + (2 * nd - 1,)
        prod = np.zeros(shape, dtype=np.complex128)
        for i in range(nd):
            prod[..., i:i + nd] += fa[..., i:i + 1] * fb
    raw = np.fft.irfft(prod, n=n, axis=-2)[..., :length, :]
    raw = np.rint(raw).astype(np.int64)
    return df.reduce(raw)


# Precision assigned to exact zeros (e.g. 0 * x): far above any working precision.
EXACT_ZERO_PREC = 1 << 40

# ---------------------------------------------------------------------------
# Field spec and series elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{q^m}((u)) with u^e = 1/T."""

    config: FqConfig
    e: int = 1

    def __post_init__(self):
        if self.e < 1:
            raise DomainError("ramification index must be positive")

    @property
    def m(self) -> int:
        return self.config.m

    @property
    def p(self) -> int:
        return self.config.p

    @property
    def q(self) -> int:
        return self.config.q

    @property
    def nd(self) -> int:
        return self.config.s * self.config.m

    @property
    def digits(self) -> DigitField:
        return digit_field(self.config.p, self.nd)

    def to_json(self) -> dict:
        return {"p": self.config.p, "s": self.config.s, "m": self.config.m, "e": self.e}


@dataclass(frozen=True)
class AtLeast:
    """Valuation of a series that is zero to its precision: v >= bound."""

    bound: Fraction

    def __str__(self) -> str:
        return f">={self.bound}"


class SeriesElem:
    __slots__ = ("spec", "lead", "prec", "coeffs")

    def __init__(self, spec: FieldSpec, lead: int, prec: int, coeffs, _normalized: bool = False):
        arr = np.asarray(coeffs, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, spec.nd)
        if not _normalized:
            arr = arr[: max(prec - lead, 0)] % spec.p
            nz = np.flatnonzero(arr.any(axis=1))
            if nz.size == 0:
                lead, arr = prec, arr[:0]
            else:
                lead, arr = lead + int(nz[0]), arr[int(nz[0]):]
            if arr.shape[0] < prec - lead:
                pad = np.zeros((prec - lead - arr.shape[0], spec.nd), dtype=np.int64)
                arr = np.concatenate([arr, pad])
        arr.setflags(write=False)
        self.spec, self.lead, self.prec, self.coeffs = spec, int(lead), int(prec), arr

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, spec: FieldSpec, prec: int) -> "SeriesElem":
        return cls(spec, prec, prec, np.zeros((0, spec.nd), dtype=np.int64), _normalized=True)

    @classmethod
    def monomial(cls, spec: FieldSpec, code: int, exponent: int, prec: int) -> "SeriesElem":
        """code * u^exponent + O(u^prec), code an F_{q^m} element."""
        if prec <= exponent:
            return cls.zero(spec, prec)
        arr = np.zeros((prec - exponent, spec.nd), dtype=np.int64)
        arr[0] = spec.digits.table[code]
        return cls(spec, exponent, prec, arr)

    @classmethod
    def one(cls, spec: FieldSpec, prec: int) -> "SeriesElem":
        return cls.monomial(spec, 1, 0, prec)

    @classmethod
    def from_terms(cls, spec: FieldSpec, terms: dict, prec: int) -> "SeriesElem":
        """Sum of code * u^exp for exp, code in terms (codes in F_{q^m})."""
        live = {k: v for k, v in terms.items() if k < prec and v}
        if not live:
            return cls.zero(spec, prec)
        lead = min(live)
        arr = np.zeros((prec - lead, spec.nd), dtype=np.int64)
        gf = spec.config.ext
        for k, v in live.items():
            arr[k - lead] = spec.digits.table[gf.add(int(spec.digits.codes(arr[k - lead])), v)]
        return cls(spec, lead, prec, arr)

    @classmethod
    def from_apoly(cls, spec: FieldSpec, a: APoly, prec: int) -> "SeriesElem":
        """Image of a in F_q[T] (coefficients embedded into F_{q^m}), T = u^-e."""
        cfg = spec.config
        return cls.from_terms(spec, {-spec.e * i: cfg.embed(c) for i, c in enumerate(a.coeffs)}, prec)

    @classmethod
    def T_power(cls, spec: FieldSpec, num: int, den: int, prec: int) -> "SeriesElem":
        """T^(num/den), requiring den | e * num."""
        if (spec.e * num) % den:
            raise DomainError(f"T^({num}/{den}) is not in the field with e={spec.e}")
        return cls.monomial(spec, 1, -(spec.e * num) // den, prec)

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.lead >= self.prec

    @property
    def rel_prec(self) -> int:
        return self.prec - self.lead

    def valuation(self):
        if self.is_zero():
            return AtLeast(Fraction(self.prec, self.spec.e))
        return Fraction(self.lead, self.spec.e)

    def log_norm(self) -> Fraction:
        """log_q |x| = -v(x); raises PrecisionError if x is zero to precision."""
        if self.is_zero():
            raise PrecisionError("norm of a series that vanishes to its precision")
        return Fraction(-self.lead, self.spec.e)

    def coeff(self, n: int) -> int:
        """Coefficient code of u^n (0 below lead); n must be < prec."""
        if n >= self.prec:
            raise PrecisionError(f"coefficient u^{n} beyond precision {self.prec}")
        if n < self.lead:
            return 0
        return int(self.spec.digits.codes(self.coeffs[n - self.lead]))

    def leading_coeff(self) -> int:
        if self.is_zero():
            raise PrecisionError("leading coefficient of a series zero to precision")
        return int(self.spec.digits.codes(self.coeffs[0]))

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Digit array for exponents lo..hi-1 (zeros below lead); hi <= prec."""
        if hi > self.prec:
            raise PrecisionError(f"window up to u^{hi} beyond precision {self.prec}")
        out = np.zeros((max(hi - lo, 0), self.spec.nd), dtype=np.int64)
        a, b = max(lo, self.lead), hi
        if b > a:
            out[a - lo:b - lo] = self.coeffs[a - self.lead:b - self.lead]
        return out

    def __repr__(self) -> str:
        if self.is_zero():
            return f"O(u^{self.prec})"
        terms = []
        for i in range(min(self.rel_prec, 6)):
            c = int(self.spec.digits.codes(self.coeffs[i]))
            if c:
                terms.append(f"{c}*u^{self.lead + i}")
        return " + ".join(terms) + f" + O(u^{self.prec})"

    def _check(self, other: "SeriesElem"):
        if not isinstance(other, SeriesElem):
            raise TypeError(f"expected SeriesElem, got {type(other).__name__}")
        if other.spec != self.spec:
            raise DomainError("series from different fields")

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "SeriesElem") -> "SeriesElem":
        self._check(other)
        prec = min(self.prec, other.prec)
        lead = min(self.lead, other.lead, prec)
        arr = self.window(lead, prec) + other.window(lead, prec)
        return SeriesElem(self.spec, lead, prec, arr % self.spec.p)

    def __neg__(self) -> "SeriesElem":
        return SeriesElem(self.spec, self.lead, self.prec, (-self.coeffs) % self.spec.p,
                          _normalized=True)

    def __sub__(self, other: "SeriesElem") -> "SeriesElem":
        self._check(other)
        prec = min(self.prec, other.prec)
        lead = min(self.lead, other.lead, prec)
        arr = self.window(lead, prec) - other.window(lead, prec)
        return SeriesElem(self.spec, lead, prec, arr % self.spec.p)

    def __mul__(self, other: "SeriesElem") -> "SeriesElem":
        self._check(other)
        prec = min(self.lead + other.prec, other.lead + self.prec)
        lead = self.lead + other.lead
        if self.is_zero() or other.is_zero() or prec <= lead:
            return SeriesElem.zero(self.spec, prec)
        arr = convolve(self.coeffs, other.coeffs, self.spec.digits, prec - lead)
        return SeriesElem(self.spec, lead, prec, arr)

    def inverse(self) -> "SeriesElem":
        if self.is_zero():
            raise PrecisionError("division by a series that vanishes to its precision")
        n = self.rel_prec
        rows = invert_units(self.coeffs[None], self.spec, n)[0]
        return SeriesElem(self.spec, -self.lead, n - self.lead, rows, _normalized=True)

    def __truediv__(self, other: "SeriesElem") -> "SeriesElem":
        return self * other.inverse()

    def __pow__(self, k: int) -> "SeriesElem":
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return SeriesElem.one(self.spec, self.rel_prec)
        base, result = self, None
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, code: int) -> "SeriesElem":
        """Multiply by an element of F_{q^m} (given by code)."""
        if code == 0:
            return SeriesElem.zero(self.spec, self.prec)
        mat = self.spec.digits.scalar_matrix(code)
        return SeriesElem(self.spec, self.lead, self.prec, self.coeffs @ mat % self.spec.p,
                          _normalized=True)

    def shift(self, n: int) -> "SeriesElem":
        """Multiply by u^n."""
        return SeriesElem(self.spec, self.lead + n, self.prec + n, self.coeffs, _normalized=True)

    def truncate(self, prec: int) -> "SeriesElem":
        if prec >= self.prec:
            return self
        return SeriesElem(self.spec, self.lead, prec, self.coeffs[: max(prec - self.lead, 0)])

    def mul_apoly(self, a: APoly) -> "SeriesElem":
        """Exact product with a in F_q[T]; precision drops by e*deg(a)."""
        spec = self.spec
        if a.is_zero():
            return SeriesElem.zero(spec, EXACT_ZERO_PREC)
        d, e = a.degree(), spec.e
        lead = self.lead - e * d
        prec = self.prec - e * d
        n = prec - lead
        acc = np.zeros((n, spec.nd), dtype=np.int64)
        dfield = spec.digits
        cfg = spec.config
        for i, c in enumerate(a.coeffs):
            if c == 0:
                continue
            off = e * (d - i)
            block = self.coeffs[: max(n - off, 0)]
            if not block.size:
                continue
            mat = dfield.scalar_matrix(cfg.embed(c))
            acc[off:off + block.shape[0]] += block @ mat
        return SeriesElem(spec, lead, prec, acc % spec.p)

    def frobenius_pow(self, i: int, cap: int | None = None) -> "SeriesElem":
        """x^(q^i), optionally truncated to precision ``cap``."""
        if i < 0:
            raise DomainError("Frobenius power must be nonnegative")
        if i == 0:
            return self if cap is None else self.truncate(cap)
        Q = self.spec.q ** i
        prec = Q * self.prec
        if cap is not None:
            prec = min(prec, cap)
        if self.is_zero():
            return SeriesElem.zero(self.spec, prec)
        lead = Q * self.lead
        if prec <= lead:
            return SeriesElem.zero(self.spec, prec)
        mat = self.spec.digits.frobenius_matrix(Q)
        src = self.coeffs[: (prec - lead + Q - 1) // Q]
        arr = np.zeros((prec - lead, self.spec.nd), dtype=np.int64)
        arr[::Q][: src.shape[0]] = src @ mat % self.spec.p
        return SeriesElem(self.spec, lead, prec, arr, _normalized=True)

    def approx_equal(self, other: "SeriesElem", P: int) -> bool:
        """True iff v(x - y) >= P/e; both inputs must be known to u^P."""
        self._check(other)
        if self.prec < P or other.prec < P:
            raise PrecisionError(f"approx_equal at P={P} with precisions {self.prec}, {other.prec}")
        d = self - other
        return d.lead >= P

    def residual_valuation(self, other: "SeriesElem"):
        return (self - other).valuation()

    def __eq__(self, other) -> bool:
        return (isinstance(other, SeriesElem) and self.spec == other.spec and self.lead == other.lead
                and self.prec == other.prec and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.lead, self.prec, self.coeffs.tobytes()))

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        d = self.spec.to_json()
        d.update({"lead": self.lead, "prec": self.prec, "coeffs": self.coeffs.tolist()})
        return d

    @classmethod
    def from_json(cls, data: dict, spec: FieldSpec | None = None) -> "SeriesElem":
        if spec is None:
            spec = FieldSpec(FqConfig(data["p"], data.get("s", 1), data.get("m", 1)), data.get("e", 1))
        elif (data.get("e", spec.e), data.get("m", spec.m)) != (spec.e, spec.m):
            raise DomainError("series JSON does not match the configured field")
        coeffs = np.array(data["coeffs"], dtype=np.int64).reshape(-1, spec.nd)
        if coeffs.shape[0] != data["prec"] - data["lead"]:
            raise DomainError("series JSON has inconsistent coefficient count")
        if ((coeffs < 0) | (coeffs >= spec.p)).any():
            raise DomainError("series JSON digit out of range")
        return cls(spec, data["lead"], data["prec"], coeffs)


# ---------------------------------------------------------------------------
# Batched unit-series operations
# ---------------------------------------------------------------------------


def invert_units(rows: np.ndarray, spec: FieldSpec, n: int) -> np.ndarray:
    """Invert a batch of series with nonzero constant term, to n terms.

    rows has shape (batch, L, nd) with L >= n and rows[:, 0] nonzero.
    """
    dfield = spec.digits
    gf = dfield.gf
    p = spec.p
    rows = rows[:, :n]
    heads = dfield.codes(rows[:, 0])
    if (heads == 0).any():
        raise PrecisionError("unit series with vanishing constant term")
    inv_heads = np.array([gf.inv(int(c)) for c in heads], dtype=np.int64)
    h = dfield.digits(inv_heads)[:, None, :]
    k = 1
    two = np.zeros((1, 1, spec.nd), dtype=np.int64)
    two[0, 0, 0] = 2 % p
    while k < n:
        k = min(2 * k, n)
        xh = convolve(rows[:, :k], h, dfield, k)
        corr = -xh
        corr[:, 0] = (corr[:, 0] + two[0, 0]) % p
        h = convolve(h, corr % p, dfield, k)
    return h


def power_rows(rows: np.ndarray, k: int, spec: FieldSpec, n: int) -> np.ndarray:
    """rows^k truncated to n terms (batch)."""
    dfield = spec.digits
    result = None
    base = rows[:, :n]
    while k:
        if k & 1:
            result = base if result is None else convolve(result, base, dfield, n)
        k >>= 1
        if k:
            base = convolve(base, base, dfield, n)
    return result


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def ceil_frac(x: Fraction) -> int:
    return math.ceil(x)
