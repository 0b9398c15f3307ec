import pytest

from drinfeld_eis import verify
from drinfeld_eis.errors import DomainError
from drinfeld_eis.series import FieldSpec, SeriesElem
from drinfeld_eis.arithmetic import FqConfig


def test_registry_is_fixed_and_unique():
    assert len(verify.CHECK_NAMES) == len(set(verify.CHECK_NAMES)) == 24
    assert verify.CHECK_NAMES[0] == "smb-orthogonality"
    assert verify.CHECK_NAMES[-1] == "level-invariance"


def test_config_validation():
    with pytest.raises(DomainError):
        verify.RunConfig(q=6)
    with pytest.raises(DomainError):
        verify.RunConfig(P=0)
    assert verify.RunConfig().P == 64


def test_tally_semantics():
    spec = FieldSpec(FqConfig.from_q(2), 1)
    t = verify.Tally(10)
    t.residual(SeriesElem.zero(spec, 12))
    assert t.result("x", 10).status == verify.PASS
    t.residual(SeriesElem.zero(spec, 6))
    assert t.result("x", 10).status == verify.INSUFFICIENT
    t.residual(SeriesElem.monomial(spec, 1, 3, 20))
    r = t.result("x", 10)
    assert r.status == verify.FAIL and r.residual == 3


def test_results_follow_registry_order():
    cfg = verify.RunConfig(P=24)
    names = ["cusp-count", "smb-orthogonality", "scaling"]
    out = verify.run_suite(cfg, names)
    assert [r.name for r in out] == ["smb-orthogonality", "scaling", "cusp-count"]


def test_rank_cases_cover_the_required_configurations():
    assert verify.rank_cases(2) == [(2, 1), (2, 2), (3, 1)]
    assert verify.rank_cases(3) == [(2, 1)]
    assert verify.rank_cases(5) == [(2, 1)]


@pytest.mark.parametrize("q", [3, 4])
def test_identity_checks_at_other_q(q):
    cfg = verify.RunConfig(q=q, P=32)
    names = ["exp-recursion", "functional-equation", "division-product", "division-points",
             "scaling", "goss-identity", "full-covariance"]
    for r in verify.run_suite(cfg, names):
        assert r.status == verify.PASS, (r.name, r.details)


@pytest.mark.slow
def test_default_suite_all_pass():
    results = verify.run_suite(verify.RunConfig())
    assert verify.summarize(results)["pass"] == 24, [(r.name, r.status) for r in results if r.status != "pass"]
