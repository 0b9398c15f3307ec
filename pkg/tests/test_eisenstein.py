from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from drinfeld_eis import eisenstein
from drinfeld_eis.arithmetic import APoly, CongClass, FqConfig, all_classes, primitive_monic_reps
from drinfeld_eis.errors import DomainError, PrecisionError
from drinfeld_eis.lattice import LatticeFrame, builtin_frame, random_gamma, gamma_act, sample_frames
from drinfeld_eis.modspace import cusp_count
from drinfeld_eis.series import FieldSpec, SeriesElem

from oracles import brute_lattice_sum, carlitz_period_power

CFG2, CFG3 = FqConfig.from_q(2), FqConfig.from_q(3)


def T(cfg, k=1):
    return APoly.T(cfg.base, k)


def const(cfg, c):
    return APoly.const(cfg.base, c)


def ray(cfg, c, prec=200):
    spec = FieldSpec(cfg, 2)
    return LatticeFrame((SeriesElem.monomial(spec, 1, -(2 * c + 1), prec), SeriesElem.one(spec, prec)))


def zero_to(x, P):
    return x.is_zero() and x.prec >= P or x.lead >= P


# -- full series -----------------------------------------------------------------


def test_weight_not_divisible_by_q_minus_1_vanishes():
    fr = builtin_frame("carlitz", CFG3, 100)
    v = eisenstein.eisenstein_full(fr, 1, 40)
    assert v.value.is_zero() and v.exact


def test_full_series_stable_across_precision():
    fr = builtin_frame("carlitz", CFG2, 200)
    a = eisenstein.eisenstein_full(fr, 1, 32).value
    b = eisenstein.eisenstein_full(fr, 1, 64).value
    assert not a.is_zero()
    assert zero_to(b.truncate(32) - a, 32)


@pytest.mark.parametrize("cfg", [CFG2, CFG3, FqConfig.from_q(4)])
def test_carlitz_weight_q_minus_1(cfg):
    # (T^q - T) E_{q-1}(A) = pi~^(q-1)
    q = cfg.q
    fr = builtin_frame("carlitz", cfg, 200)
    E = eisenstein.eisenstein_full(fr, q - 1, 40).value
    lhs = E.mul_apoly(T(cfg, q) - T(cfg))
    assert zero_to(lhs - carlitz_period_power(cfg, lhs.prec), lhs.prec)


@pytest.mark.parametrize("cfg", [CFG2, CFG3, FqConfig.from_q(5)])
def test_carlitz_torsion_values(cfg):
    # E_{1,c/T}(A) = pi~ / lambda_c with lambda^(q-1) = -T
    q = cfg.q
    fr = builtin_frame("carlitz", cfg, 200)
    pq = carlitz_period_power(cfg, 40)
    minus_T = const(cfg, cfg.base.neg(1)) * T(cfg)
    for c in range(1, q):
        E = eisenstein.eisenstein_partial(fr, 1, CongClass(T(cfg), (const(cfg, c),)), 40).value
        lhs = (E ** (q - 1)).mul_apoly(minus_T)
        assert zero_to(lhs - pq.truncate(lhs.prec), lhs.prec)


def test_partial_matches_brute_force_sum():
    fr = builtin_frame("rank2-sqrt", CFG2, 120)
    u = CongClass(T(CFG2), (const(CFG2, 1), const(CFG2, 1)))
    shift = fr.combine([const(CFG2, 1), const(CFG2, 1)]) * SeriesElem.from_apoly(fr.spec, T(CFG2), 140).inverse()
    for k in (1, 3):
        P = 12
        val = eisenstein.eisenstein_partial(fr, k, u, P).value
        # a lattice point with a coefficient of degree >= 6 has norm >= q^6,
        # so its term has valuation >= 12 k u-digits
        brute = brute_lattice_sum(fr, k, shift, 5, P)
        assert zero_to(val - brute, P)


def test_tail_bound_is_honest():
    fr = builtin_frame("rank3-cbrt", CFG2, 300)
    u = CongClass(T(CFG2), (const(CFG2, 1), const(CFG2, 0), const(CFG2, 1)))
    lo = eisenstein.eisenstein_partial(fr, 2, u, 24)
    hi = eisenstein.eisenstein_partial(fr, 2, u, 96)
    assert zero_to(hi.value.truncate(24) - lo.value, 24)
    assert lo.tail_bound * fr.spec.e >= 24 - 1


# -- partial and restricted series -------------------------------------------------


@given(st.integers(1, 4))
@settings(max_examples=4)
def test_scaling_relation(k):
    fr = builtin_frame("rank2-sqrt", CFG3, 160)
    fld = CFG3.base
    for u in all_classes(T(CFG3), 2):
        a = eisenstein.eisenstein_partial(fr, k, u, 40).value
        b = eisenstein.eisenstein_partial(fr, k, u.scale(const(CFG3, 2)), 40).value
        factor = fr.spec.config.embed(fld.inv(fld.pow(2, k)))
        assert zero_to(b - a.scale(factor), 40)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_distribution_relation(k):
    fr = builtin_frame("rank2-sqrt", CFG2, 200)
    spec = fr.spec
    N, Np = T(CFG2, 2), T(CFG2)
    P = 40
    for v in all_classes(Np, 2, include_zero=True):
        total = None
        for u in all_classes(N, 2, include_zero=True):
            if all(((a - b) % Np).is_zero() for a, b in zip(u.numerators, v.numerators)):
                x = eisenstein.eisenstein_partial(fr, k, u, P + 8).value
                total = x if total is None else total + x
        lhs = total * SeriesElem.from_apoly(spec, T(CFG2, k), P + 20).inverse()
        rhs = eisenstein.eisenstein_partial(fr, k, v, P).value
        assert zero_to(lhs - rhs, P)


@pytest.mark.parametrize("cfg,k", [(CFG2, 4), (CFG3, 8)])
def test_moebius_matches_direct(cfg, k):
    fr = builtin_frame("rank2-sqrt", cfg, 200)
    N = T(cfg)
    P = 24
    for n in primitive_monic_reps(N, 2):
        u = CongClass(N, n)
        a = eisenstein.eisenstein_restricted(fr, k, u, P, "moebius").value
        b = eisenstein.eisenstein_restricted(fr, k, u, P, "direct").value
        assert zero_to(a - b, P)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=8)
def test_covariance(seed):
    import random
    rng = random.Random(seed)
    fr = builtin_frame("rank2-sqrt", CFG3, 200)
    g = random_gamma(CFG3.base, 2, rng, max_deg=2)
    gw, aut = gamma_act(g, fr)
    P = 40
    extra = -4 * min(0, aut.lead) + 8
    u = all_classes(T(CFG3), 2)[rng.randrange(8)]
    for k in (1, 2):
        lhs = eisenstein.eisenstein_partial(gw, k, u, P).value
        rhs = (aut ** k) * eisenstein.eisenstein_partial(fr, k, u.act(g), P + extra).value
        assert zero_to(lhs - rhs, P)
    lhs = eisenstein.eisenstein_full(gw, 2, P).value
    rhs = (aut ** 2) * eisenstein.eisenstein_full(fr, 2, P + extra).value
    assert zero_to(lhs - rhs, P)


# -- rank, embedding, boundary -----------------------------------------------------


@pytest.mark.parametrize("cfg,m,k,expected", [(CFG2, 4, 1, 3), (CFG3, 2, 2, 4)])
def test_eis_rank_examples(cfg, m, k, expected):
    spec = FieldSpec(FqConfig(cfg.p, cfg.s, m), 2)
    frames = sample_frames(spec, 2, 5, 0, 160)
    N = T(cfg)
    assert expected == cusp_count(N, 2)
    assert eisenstein.eis_rank(N, k, frames, 48) == expected


def test_rank_of_rank_one_matrix():
    spec = FieldSpec(CFG2, 1)
    x = SeriesElem.from_terms(spec, {0: 1, 3: 1}, 40)
    y = SeriesElem.from_terms(spec, {1: 1, 2: 1}, 40)
    assert eisenstein.valuation_rank([[x, y], [x * y, y * y]], 30) == 1
    assert eisenstein.valuation_rank([[x, y], [y, x]], 30) == 2


def test_embedding_separates_and_is_level_invariant():
    import random
    spec = FieldSpec(CFG2, 2)
    frames = sample_frames(spec, 2, 3, 1, 200)
    N = T(CFG2)
    vecs = [eisenstein.embed_jN(f, N, 48) for f in frames]
    assert not eisenstein.projective_equal(vecs[0], vecs[1], 24)
    rng = random.Random(5)
    g = random_gamma(CFG2.base, 2, rng, max_deg=2, level=N)
    moved = eisenstein.embed_jN(gamma_act(g, frames[0])[0], N, 48)
    assert eisenstein.projective_equal(vecs[0], moved, 24)


def test_restricted_degenerates_off_its_component():
    # along w_1 -> infinity only the class n = (0, 1) survives
    N = T(CFG2)
    reps = primitive_monic_reps(N, 2)
    leads = {}
    for c in (3, 5, 7):
        fr = ray(CFG2, c)
        for n in reps:
            v = eisenstein.eisenstein_restricted(fr, 1, CongClass(N, n), 32).value
            leads.setdefault(tuple(str(x) for x in n), []).append(v.prec if v.is_zero() else v.lead)
    survivor = leads.pop(("0", "1"))
    assert len(set(survivor)) == 1
    for seq in leads.values():
        assert seq == sorted(seq) and seq[-1] > seq[0]


def test_boundary_parameter_shrinks_and_is_invariant():
    from drinfeld_eis.lattice import GammaMatrix
    N = T(CFG2)
    ts = [eisenstein.boundary_parameter(ray(CFG2, c), N, 64) for c in (1, 2, 3)]
    leads = [t.lead for t in ts]
    assert leads == sorted(leads) and len(set(leads)) == 3
    fr = ray(CFG2, 2)
    g = GammaMatrix.elementary(CFG2.base, 2, 0, 1, N * (T(CFG2) + const(CFG2, 1)))
    moved, _ = gamma_act(g, fr)
    assert zero_to(eisenstein.boundary_parameter(moved, N, 48) - eisenstein.boundary_parameter(fr, N, 48), 48)


def test_boundary_parameter_domain_error():
    spec = FieldSpec(CFG2, 2)
    one = SeriesElem.one(spec, 80)
    fr = LatticeFrame((SeriesElem.from_apoly(spec, T(CFG2), 80), one))
    with pytest.raises(DomainError):
        eisenstein.boundary_parameter(fr, T(CFG2), 32)


def test_rank_mismatch_rejected():
    fr = builtin_frame("rank2-sqrt", CFG2, 60)
    with pytest.raises(DomainError):
        eisenstein.eisenstein_partial(fr, 1, CongClass(T(CFG2), (const(CFG2, 1),)), 20)
