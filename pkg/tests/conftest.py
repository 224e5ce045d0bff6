import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def flip():
    from tgbredon.fixtures import double_flip_groupoid
    return double_flip_groupoid()


@pytest.fixture(scope="session")
def circle(flip):
    from tgbredon.fixtures import flip_circle
    return flip_circle(flip)


@pytest.fixture(scope="session")
def circle_oc(circle):
    from tgbredon.orbitcat import build_orbit_category
    return build_orbit_category(circle.group)
