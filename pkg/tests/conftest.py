import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from caratheodory.curves import PolygonalJordanCurve

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def square():
    return PolygonalJordanCurve([0, 1, 1 + 1j, 1j])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
