import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kolyvagin.instance import InstanceParams, random_instance

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_instance():
    return random_instance(3, InstanceParams(9, (3, 9), 4))
