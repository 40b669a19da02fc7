import math
import os

import pytest
from hypothesis import HealthCheck, settings

from veechmix.exactnum import RealBasis

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def beta():
    """Basis {1, b1, b2} with b1 = sqrt2, b2 = sqrt3."""
    return RealBasis.of(b1=math.sqrt(2), b2=math.sqrt(3))


@pytest.fixture
def q():
    return RealBasis.rational()
