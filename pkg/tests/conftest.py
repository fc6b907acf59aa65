import pytest
from hypothesis import HealthCheck, settings

from drinfeld.envelope import LieAlgebraSpec

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def borel():
    return LieAlgebraSpec.borel()


@pytest.fixture(scope="session")
def free2():
    return LieAlgebraSpec.free(2, 3)
