import pytest
from hypothesis import HealthCheck, settings

from drinfeld_eis.arithmetic import APoly, FqConfig, galois_field

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def F2():
    return galois_field(2)


@pytest.fixture
def F3():
    return galois_field(3)


@pytest.fixture
def cfg2():
    return FqConfig.from_q(2)


@pytest.fixture
def cfg3():
    return FqConfig.from_q(3)


def poly(fld, text):
    return APoly.parse(fld, text)
