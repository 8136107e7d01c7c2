import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from jamlink.channel import ChannelDraw

settings.register_profile(
    "suite", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")


@pytest.fixture
def unit_channel():
    """All gains 1, unit noise, no delay."""
    return ChannelDraw(h1=1.0, h2=1.0, h3=1.0, sigma2_R=1.0, n_tau=0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
