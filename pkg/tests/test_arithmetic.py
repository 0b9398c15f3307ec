import itertools

import pytest
from hypothesis import given, strategies as st

from drinfeld_eis.arithmetic import (APoly, CongClass, FqConfig, all_classes, factor, galois_field, gcd,
                                     is_irreducible, is_primitive_mod, mobius, monic_divisors, monic_polys,
                                     polys_below, primitive_monic_reps, xgcd)
from drinfeld_eis.errors import DomainError
from drinfeld_eis.modspace import cusp_count, levels

from conftest import poly


def polys(q, max_deg, nonzero=False):
    fld = galois_field(*{2: (2, 1), 3: (3, 1), 4: (2, 2)}[q])
    coeffs = st.lists(st.integers(0, fld.order - 1), min_size=0, max_size=max_deg + 1)
    s = coeffs.map(lambda c: APoly(fld, c))
    return s.filter(lambda a: not a.is_zero()) if nonzero else s


# -- finite fields ---------------------------------------------------------------


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
def test_field_axioms(p, n):
    f = galois_field(p, n)
    els = list(f.elements())
    for a in els:
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
            assert f.pow(a, f.order - 1) == 1
    for a, b, c in itertools.product(els[:5], repeat=3):
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_generator_has_full_order():
    f = galois_field(2, 4)
    g = f.generator()
    assert len({f.pow(g, i) for i in range(f.order - 1)}) == f.order - 1


def test_embedding_is_a_ring_map():
    cfg = FqConfig(2, 1, 4)
    ext, base = cfg.ext, cfg.base
    for a, b in itertools.product(base.elements(), repeat=2):
        assert cfg.embed(base.mul(a, b)) == ext.mul(cfg.embed(a), cfg.embed(b))
        assert cfg.embed(base.add(a, b)) == ext.add(cfg.embed(a), cfg.embed(b))
        assert cfg.restrict(cfg.embed(a)) == a


def test_bad_q_rejected():
    with pytest.raises(DomainError):
        FqConfig.from_q(6)


# -- polynomials -----------------------------------------------------------------


def test_parse_and_print_round_trip(F3):
    a = poly(F3, "2*T^3+T+1")
    assert a.coeffs == (1, 1, 0, 2)
    assert poly(F3, str(a)) == a
    assert poly(F3, "-T") == poly(F3, "2*T")


@given(polys(3, 6), polys(3, 6, nonzero=True))
def test_division_with_remainder(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree() < b.degree()


@given(polys(2, 6, nonzero=True), polys(2, 6, nonzero=True))
def test_xgcd_bezout(a, b):
    g, s, t = xgcd(a, b)
    assert s * a + t * b == g
    assert g == gcd(a, b) and g.is_monic()
    assert (a % g).is_zero() and (b % g).is_zero()


# -- factorization ---------------------------------------------------------------


def test_factor_examples(F2, F3):
    f = factor(poly(F2, "T^2+T"))
    assert f.unit == 1 and f.factors == ((poly(F2, "T"), 1), (poly(F2, "T+1"), 1))
    f = factor(poly(F2, "T^2+T+1"))
    assert f.unit == 1 and f.factors == ((poly(F2, "T^2+T+1"), 1),)
    f = factor(poly(F3, "2*T^2"))
    assert f.unit == 2 and f.factors == ((poly(F3, "T"), 2),)


def test_factor_zero_rejected(F2):
    with pytest.raises(DomainError):
        factor(APoly.zero(F2))


@pytest.mark.parametrize("q", [2, 3])
def test_factor_round_trip_exhaustive(q):
    fld = galois_field(q)
    for d in range(1, 7 if q == 2 else 5):
        for f in monic_polys(fld, d):
            fac = factor(f)
            assert fac.expand(fld) == f
            assert all(is_irreducible(g) and g.is_monic() for g, _ in fac.factors)


@given(polys(3, 6, nonzero=True))
def test_factor_round_trip_random(f):
    assert factor(f).expand(f.field) == f


def test_irreducible_counts_match_gauss(F2, F3):
    # number of monic irreducibles of degree d is (1/d) sum_{e|d} mu(d/e) q^e
    expected = {(2, 1): 2, (2, 2): 1, (2, 3): 2, (2, 4): 3, (3, 1): 3, (3, 2): 3, (3, 3): 8}
    for (q, d), n in expected.items():
        fld = F2 if q == 2 else F3
        assert sum(1 for f in monic_polys(fld, d) if is_irreducible(f)) == n


# -- Moebius and divisors --------------------------------------------------------


def test_mobius_examples(F2, F3):
    assert mobius(poly(F2, "T")) == -1
    assert mobius(poly(F2, "T^2")) == 0
    assert mobius(poly(F3, "2")) == 1
    assert mobius(poly(F2, "T^2+T")) == 1


def test_divisor_examples(F2):
    assert monic_divisors(poly(F2, "T^2")) == [poly(F2, "1"), poly(F2, "T"), poly(F2, "T^2")]
    assert monic_divisors(poly(F2, "T^2+T")) == [poly(F2, x) for x in ("1", "T", "T+1", "T^2+T")]
    assert monic_divisors(poly(F2, "1")) == [poly(F2, "1")]


@pytest.mark.parametrize("q", [2, 3])
def test_mobius_summation(q):
    fld = galois_field(q)
    for d in range(0, 6 if q == 2 else 4):
        for a in polys_below(fld, d + 1):
            if a.is_zero() or a.degree() != d:
                continue
            total = sum(mobius(b) for b in monic_divisors(a))
            assert total == (1 if d == 0 else 0)


# -- residue vectors -------------------------------------------------------------


def test_primitive_reps_examples(F2, F3):
    assert len(primitive_monic_reps(poly(F3, "T"), 2)) == 4
    assert len(primitive_monic_reps(poly(F2, "T"), 3)) == 7
    assert len(primitive_monic_reps(poly(F2, "T^2"), 2)) == 12


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("r", [2, 3])
def test_primitive_reps_count_is_cusp_count(q, r):
    fld = galois_field(q)
    for N in levels(fld, 3 if q == 2 or r == 2 else 2):
        assert len(primitive_monic_reps(N, r)) == cusp_count(N, r)


def test_primitive_vectors_have_one_monic_rep(F3):
    N = poly(F3, "T^2+1")
    reps = {tuple(v.key() for v in n) for n in primitive_monic_reps(N, 2)}
    for u in all_classes(N, 2):
        if not is_primitive_mod(u.numerators, N):
            continue
        orbit = {tuple(v.key() for v in u.scale(APoly.const(F3, c)).numerators) for c in (1, 2)}
        assert len(orbit & reps) == 1


def test_reps_are_sorted_and_monic(F2):
    reps = primitive_monic_reps(poly(F2, "T^2+T"), 2)
    keys = [tuple(v.key() for v in n) for n in reps]
    assert keys == sorted(keys)
    for n in reps:
        assert next(v for v in n if not v.is_zero()).is_monic()


def test_constant_level_rejected(F2):
    with pytest.raises(DomainError):
        primitive_monic_reps(poly(F2, "1"), 2)
    with pytest.raises(DomainError):
        CongClass(poly(F2, "1"), (poly(F2, "1"),))


def test_congruence_class_reduces_numerators(F2):
    u = CongClass(poly(F2, "T"), (poly(F2, "T+1"), poly(F2, "T")))
    assert u.numerators == (poly(F2, "1"), poly(F2, "0"))
