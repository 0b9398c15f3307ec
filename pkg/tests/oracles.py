"""Independent reference values, computed without the lattice machinery."""

from drinfeld_eis.arithmetic import APoly
from drinfeld_eis.series import FieldSpec, SeriesElem


def carlitz_period_power(cfg, P):
    """pi~^(q-1) = (-T)^q prod_{i>=1} (1 - T^(1-q^i))^-(q-1), over e = 1."""
    spec = FieldSpec(cfg, 1)
    fld, q = cfg.base, cfg.q
    W = P + 2 * q + 8
    minus_T = APoly.const(fld, fld.neg(1)) * APoly.T(fld)
    x = SeriesElem.from_apoly(spec, minus_T, W) ** q
    i = 1
    while q ** i - 1 < W:
        f = SeriesElem.one(spec, W) - SeriesElem.monomial(spec, 1, q ** i - 1, W)
        x = x * f.inverse() ** (q - 1)
        i += 1
    return x.truncate(P)


def brute_lattice_sum(frame, k, shift, D, P):
    """sum over a in A^r, deg a_i <= D, of (shift + a.omega)^-k, shift may be None."""
    from drinfeld_eis.lattice import enumerate_points
    spec = frame.spec
    total = SeriesElem.zero(spec, P)
    if shift is not None:
        total = total + shift.inverse() ** k
    for _, lam in enumerate_points(frame, D):
        z = lam if shift is None else shift + lam
        total = total + z.inverse() ** k
    return total.truncate(P)
