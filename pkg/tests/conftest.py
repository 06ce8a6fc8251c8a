import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from frobrecip.report import Sampler

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def sampler():
    return Sampler(seed=42, samples=40)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
