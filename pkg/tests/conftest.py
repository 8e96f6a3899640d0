import math
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from favard_lab.geometry import Polyline, Segment, SegmentSet

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running statistical or sweep test")
    config.addinivalue_line("markers", "acceptance: acceptance criteria 1-10")


def unit_segment():
    return SegmentSet((Segment((0.0, 0.0), (1.0, 0.0)),))


def plus_sign():
    return SegmentSet((Segment((-0.5, 0.0), (0.5, 0.0)), Segment((0.0, -0.5), (0.0, 0.5))))


def bent_segment(t):
    """Unit-length polyline bent by angle ``t`` at its midpoint."""
    c, s = math.cos(t / 2), math.sin(t / 2)
    return SegmentSet.from_polylines([Polyline(((-0.5 * c, 0.5 * s), (0.0, 0.0), (0.5 * c, 0.5 * s)))])


def random_segment_set(rng, max_segments=50, radius=1.0):
    """Pairwise non-overlapping random segments inside ``B(radius)``."""
    n = int(rng.integers(1, max_segments + 1))
    segs = []
    while len(segs) < n:
        r = radius * np.sqrt(rng.uniform(0, 1, 2))
        a = rng.uniform(0, 2 * math.pi, 2)
        p = (r[0] * math.cos(a[0]), r[0] * math.sin(a[0]))
        q = (r[1] * math.cos(a[1]), r[1] * math.sin(a[1]))
        if math.hypot(q[0] - p[0], q[1] - p[1]) > 1e-3:
            segs.append(Segment(p, q))
    return SegmentSet(tuple(segs), bounding_radius=radius)


@pytest.fixture
def plus():
    return plus_sign()


@pytest.fixture
def unit():
    return unit_segment()


@pytest.fixture(scope="session")
def random_sets():
    rng = np.random.default_rng(20240611)
    return [random_segment_set(rng) for _ in range(200)]
