import mpmath as mp
import pytest
from hypothesis import HealthCheck, settings

from rieszbd.mpcore import PrecisionContext
from rieszbd.sieve import cached_mobius

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext()


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(digits=30)


@pytest.fixture(scope="session")
def mobius_1e6():
    return cached_mobius(10**6)


@pytest.fixture(scope="session")
def gamma1():
    return mp.mpf("14.134725141734693790457251983562")
