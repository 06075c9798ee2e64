import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture
def disk():
    from floatillum import Ball
    return Ball.unit(2)


@pytest.fixture
def square():
    from floatillum import cube
    return cube(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
