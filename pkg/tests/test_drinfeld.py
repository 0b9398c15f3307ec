import random

import pytest
from hypothesis import given, settings, strategies as st

from drinfeld_eis import drinfeld, eisenstein
from drinfeld_eis.arithmetic import APoly, CongClass, FqConfig, all_classes
from drinfeld_eis.errors import DomainError
from drinfeld_eis.lattice import builtin_frame, gamma_act_raw, random_gamma, sample_frames
from drinfeld_eis.series import FieldSpec, SeriesElem

from oracles import carlitz_period_power

CFG2, CFG3 = FqConfig.from_q(2), FqConfig.from_q(3)
BUILTINS = ("carlitz", "rank2-sqrt", "rank3-cbrt")


def T(cfg, k=1):
    return APoly.T(cfg.base, k)


def zero_to(x, P):
    return x.lead >= P


def frame(name, cfg=CFG2, prec=400):
    return builtin_frame(name, cfg, prec)


# -- exponential -----------------------------------------------------------------


@pytest.mark.parametrize("name", BUILTINS)
def test_alpha_zero_is_one(name):
    a = drinfeld.exp_coeffs(frame(name), 2, "product", 40).alphas
    assert zero_to(a[0] - SeriesElem.one(a[0].spec, 40), 40)


@pytest.mark.parametrize("cfg", [CFG2, CFG3])
@pytest.mark.parametrize("name", BUILTINS)
def test_product_and_eisenstein_methods_agree(cfg, name):
    fr = frame(name, cfg)
    n = fr.rank + 1 if cfg.q == 2 else fr.rank
    a = drinfeld.exp_coeffs(fr, n, "product", 48).alphas
    b = drinfeld.exp_coeffs(fr, n, "eisenstein", 48).alphas
    for x, y in zip(a, b):
        assert zero_to(x - y, 48)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=6)
def test_methods_agree_on_random_frames(seed):
    rng = random.Random(seed)
    spec = FieldSpec(FqConfig(2, 1, 2), 2)
    fr = sample_frames(spec, 2, 1, seed, 300)[0]
    a = drinfeld.exp_coeffs(fr, 2, "product", 32).alphas
    b = drinfeld.exp_coeffs(fr, 2, "eisenstein", 32).alphas
    assert all(zero_to(x - y, 32) for x, y in zip(a, b))


@pytest.mark.parametrize("shift,code", [(-2, 1), (1, 3), (3, 2)])
def test_alpha_scaling(shift, code):
    cfg = FqConfig(2, 1, 2)
    fr = frame("rank2-sqrt", cfg)
    c = SeriesElem.from_terms(fr.spec, {shift: code, shift + 1: 1}, 400)
    P = 32
    a = drinfeld.exp_coeffs(fr, 2, "product", P + 40).alphas
    b = drinfeld.exp_coeffs(fr.scaled(c), 2, "product", P).alphas
    for i, (x, y) in enumerate(zip(a, b)):
        expected = x * c.inverse() ** (2 ** i - 1)
        assert zero_to(y - expected, P)


# -- Drinfeld module -------------------------------------------------------------


@pytest.mark.parametrize("cfg", [CFG2, CFG3, FqConfig.from_q(4)])
def test_carlitz_coefficient(cfg):
    phi = drinfeld.drinfeld_coeffs(frame("carlitz", cfg), 40)
    assert zero_to(phi.coeffs[0] - SeriesElem.from_apoly(phi.spec, T(cfg), 40), 40)
    assert zero_to(phi.coeffs[1] - carlitz_period_power(cfg, 40), 40)


@pytest.mark.parametrize("name", BUILTINS)
def test_functional_equation_through_q_to_r_plus_1(name):
    fr = frame(name)
    r = fr.rank
    alphas = drinfeld.exp_coeffs(fr, r + 1, "product", drinfeld.alpha_precision_for(48, fr.spec, r + 1)).alphas
    phi = drinfeld.drinfeld_from_alphas(alphas, r)
    res = drinfeld.functional_residuals(phi, alphas)
    assert len(res) == r + 2
    assert all(zero_to(x, 48) for x in res)
    assert not phi.coeffs[-1].is_zero()


def test_corrupted_g1_breaks_functional_equation():
    fr = frame("rank2-sqrt")
    alphas = drinfeld.exp_coeffs(fr, 3, "product", drinfeld.alpha_precision_for(48, fr.spec, 3)).alphas
    phi = drinfeld.drinfeld_from_alphas(alphas, 2)
    g = list(phi.coeffs)
    g[1] = g[1] + SeriesElem.one(fr.spec, g[1].prec)
    bad = drinfeld.AdditivePoly(tuple(g), 2)
    assert not all(zero_to(x, 48) for x in drinfeld.functional_residuals(bad, alphas))


@pytest.mark.parametrize("shift", [-1, 2])
def test_drinfeld_weight_scaling(shift):
    fr = frame("rank2-sqrt")
    c = SeriesElem.monomial(fr.spec, 1, shift, 400)
    g = drinfeld.drinfeld_coeffs(fr, 60).coeffs
    h = drinfeld.drinfeld_coeffs(fr.scaled(c), 40).coeffs
    for i, (x, y) in enumerate(zip(g, h)):
        assert zero_to(y - x * c.inverse() ** (2 ** i - 1), 40)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=6)
def test_drinfeld_coefficients_are_gamma_invariant(seed):
    rng = random.Random(seed)
    fr = frame("rank2-sqrt", CFG3)
    g = random_gamma(CFG3.base, 2, rng, max_deg=2)
    a = drinfeld.drinfeld_coeffs(fr, 40).coeffs
    b = drinfeld.drinfeld_coeffs(gamma_act_raw(g, fr), 40).coeffs
    assert all(zero_to(x - y, 40) for x, y in zip(a, b))


def test_top_coefficient_vanishing_is_reported():
    from drinfeld_eis.errors import PrecisionError
    fr = frame("rank2-sqrt", prec=30)
    with pytest.raises(PrecisionError):
        drinfeld.drinfeld_coeffs(fr, 200)


# -- division polynomials ----------------------------------------------------------


def test_homomorphism():
    fr = frame("rank2-sqrt")
    phi = drinfeld.drinfeld_coeffs(fr, 120)
    sq = drinfeld.division_poly(phi, T(CFG2, 2))
    comp = phi.compose(phi)
    assert all(zero_to(x - y, 40) for x, y in zip(sq.coeffs, comp.coeffs))
    N1, N2 = T(CFG2) + APoly.one(CFG2.base), T(CFG2)
    a = drinfeld.division_poly(phi, N1 * N2)
    b = drinfeld.division_poly(phi, N1).compose(drinfeld.division_poly(phi, N2))
    assert all(zero_to(x - y, 40) for x, y in zip(a.coeffs, b.coeffs))
    assert zero_to(a.coeffs[0] - SeriesElem.from_apoly(fr.spec, N1 * N2, 200), 40)


def test_division_of_zero_rejected():
    phi = drinfeld.drinfeld_coeffs(frame("carlitz"), 20)
    with pytest.raises(DomainError):
        drinfeld.division_poly(phi, APoly.zero(CFG2.base))


def _division_data(fr, N, P):
    r = fr.rank
    alphas = drinfeld.exp_coeffs(fr, r, "product", drinfeld.alpha_precision_for(P, fr.spec, r)
                                 + fr.spec.e * 2 ** (r * N.degree())).alphas
    phi = drinfeld.drinfeld_from_alphas(alphas, r)
    classes = all_classes(N, r)
    E = [eisenstein.eisenstein_partial(fr, 1, u, P + 32).value for u in classes]
    return phi, drinfeld.division_poly(phi, N), classes, E


def test_product_identity():
    fr = frame("rank2-sqrt")
    N = T(CFG2)
    phi, phi_N, _, E = _division_data(fr, N, 48)
    prod = drinfeld.product_poly(N, E, fr.spec)
    assert len(prod) == 2 ** 2 + 1
    targets = {1: 0, 2: 1, 4: 2}
    for j, c in enumerate(prod):
        want = phi_N.coeffs[targets[j]] if j in targets else SeriesElem.zero(fr.spec, 48)
        assert zero_to(c - want, 48)


def test_symmetric_functions_and_discriminant_power():
    fr = frame("rank2-sqrt")
    N = T(CFG2, 2)
    phi, phi_N, _, E = _division_data(fr, N, 48)
    sym = drinfeld.elementary_symmetric(E, 15, fr.spec)
    for i in range(1, 5):
        assert zero_to(phi_N.coeffs[i] - sym[2 ** i - 1].mul_apoly(N), 48)
    assert zero_to(phi_N.coeffs[4] - phi.coeffs[2] ** 5, 48)


@pytest.mark.parametrize("name", BUILTINS)
def test_division_points_are_inverse_eisenstein(name):
    fr = frame(name)
    N = T(CFG2)
    phi = drinfeld.drinfeld_coeffs(fr, 80)
    values = set()
    for u in all_classes(N, fr.rank):
        d = drinfeld.division_point(fr, u, 60)
        E = eisenstein.eisenstein_partial(fr, 1, u, 80).value
        assert zero_to(d * E - SeriesElem.one(fr.spec, 200), 48)
        image = phi(d)
        top = min((c * d.frobenius_pow(i)).lead for i, c in enumerate(phi.coeffs))
        assert image.lead - top >= 40
        values.add(tuple(d.truncate(30).coeffs.ravel()) + (d.lead,))
    assert len(values) == 2 ** fr.rank - 1


def test_division_point_of_zero_class_rejected():
    fr = frame("rank2-sqrt")
    with pytest.raises(DomainError):
        drinfeld.division_point(fr, CongClass(T(CFG2), (APoly.zero(CFG2.base),) * 2), 20)


# -- Goss polynomials ------------------------------------------------------------


@pytest.mark.parametrize("cfg", [CFG2, CFG3])
def test_goss_low_degrees_are_monomials(cfg):
    fr = frame("rank2-sqrt", cfg)
    for k in range(1, cfg.q + 1):
        G = drinfeld.goss_poly(fr, k, 40)
        assert len(G.coeffs) == k + 1
        assert all(c.is_zero() for c in G.coeffs[:k])
        assert zero_to(G.coeffs[k] - SeriesElem.one(fr.spec, 40), 40)


@pytest.mark.parametrize("cfg,name", [(CFG2, "rank2-sqrt"), (CFG2, "rank3-cbrt"), (CFG3, "rank2-sqrt")])
def test_goss_identity(cfg, name):
    fr = frame(name, cfg)
    q = cfg.q
    kmax = q + 2
    alphas = drinfeld.exp_coeffs(fr, 1, "product", 120).alphas
    goss = drinfeld.goss_polys(alphas, kmax)
    for u in all_classes(T(cfg), fr.rank):
        x = eisenstein.eisenstein_partial(fr, 1, u, 120).value
        for k in range(1, kmax + 1):
            want = eisenstein.eisenstein_partial(fr, k, u, 40).value
            assert zero_to(goss[k](x) - want, 40)


def test_goss_needs_enough_alphas():
    fr = frame("carlitz")
    alphas = drinfeld.exp_coeffs(fr, 1, "product", 20).alphas
    with pytest.raises(DomainError):
        drinfeld.goss_polys(alphas, 6)
