import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import bent_segment, random_segment_set
from favard_lab.conical import (
    Cone,
    besicovitch_alternative,
    conical_mass,
    cone_directions,
    double_direction_set,
    high_density_points,
    max_conical_density,
    tube_mass,
)
from favard_lab.errors import DegenerateInput, ValidationError
from favard_lab.geometry import PI, Polyline, Segment, SegmentSet
from oracles import mc_direction_fraction, radius_grid_density, sampled_conical_mass

VERT = SegmentSet((Segment((0, -0.5), (0, 0.5)),))
HORIZ = SegmentSet((Segment((-0.5, 0), (0.5, 0)),))


def test_conical_mass_examples():
    assert conical_mass(VERT, (0, 0), 0.5, 0.25) == pytest.approx(0.5)
    assert conical_mass(VERT, (0, 0), 0.5, 10) == pytest.approx(1.0)
    for r in (0.01, 0.3, 5):
        assert conical_mass(HORIZ, (0, 0), 0.3, r) == 0.0
    with pytest.raises(ValidationError):
        conical_mass(VERT, (0, 0), 0.0, 1)


def test_max_density_examples():
    assert max_conical_density(VERT, (0, 0), 0.5) == pytest.approx(2.0, rel=1e-9)
    assert max_conical_density(HORIZ, (0, 0), 0.5) == 0.0
    outside = SegmentSet((Segment((1, 0), (2, 0.1)),))
    assert max_conical_density(outside, (0, 0), 1.0) == 0.0


def test_max_density_against_radius_grid():
    rng = np.random.default_rng(11)
    for _ in range(6):
        E = random_segment_set(rng, 5)
        x = E.segments[0].point_at(E.segments[0].length / 2)
        beta = float(rng.uniform(0.2, 1.0))
        axis = float(rng.uniform(0, PI))
        grid = radius_grid_density(lambda r: conical_mass(E, x, beta, r, axis), 3.0)
        assert max_conical_density(E, x, beta, axis) >= grid * (1 - 1e-9) - 1e-12


def test_conical_mass_against_sampling():
    rng = np.random.default_rng(12)
    for _ in range(5):
        E = random_segment_set(rng, 5)
        x = tuple(rng.uniform(-0.5, 0.5, 2))
        exact = conical_mass(E, x, 0.7, 0.8)
        assert exact == pytest.approx(sampled_conical_mass(E, x, 0.7, 0.8), abs=5e-4)


@given(st.integers(0, 2**31), st.floats(0.05, 1.0), st.floats(0.05, 2.0))
def test_conical_mass_monotone(seed, beta, r):
    rng = np.random.default_rng(seed)
    E = random_segment_set(rng, 8)
    x = tuple(rng.uniform(-1, 1, 2))
    m = conical_mass(E, x, beta, r)
    assert conical_mass(E, x, beta, 1.5 * r) >= m - 1e-15
    assert conical_mass(E, x, 0.5 * beta, r) >= m - 1e-15
    assert max_conical_density(E, x, beta) >= m / r * (1 - 1e-9) - 1e-12


def test_cone_membership():
    C = Cone((0.0, 0.0), 0.5)
    assert C.contains([(0, 1), (1, 0.5), (1, 0.49)]).tolist() == [True, True, False]
    assert cone_directions(1.0).measure == pytest.approx(PI / 2)


def test_double_direction_set_examples():
    G = SegmentSet((Segment((1, -1), (1, 1)),))
    assert double_direction_set((0, 0), G).measure == pytest.approx(PI / 2)
    assert double_direction_set((0, 0), SegmentSet(())).measure == 0.0
    far = Segment((5, 0), (5, 1))
    one = double_direction_set((0, 0), SegmentSet((far,), validate=False))
    two = double_direction_set((0, 0), SegmentSet((far, far), validate=False))
    assert one.intervals == two.intervals


def test_alternative_a1_two_parallel():
    E = SegmentSet((Segment((0, -1), (0, 1)), Segment((0.2, -1), (0.2, 1))))
    out = besicovitch_alternative(E, (0, 0), 0.05, 2.0)
    assert out.tag == "A1"
    assert out.I_x.measure >= 0.5
    J = cone_directions(0.05)
    assert out.I_x.intersect(J).measure == pytest.approx(out.I_x.measure, abs=1e-14)


def test_alternative_i_x_monte_carlo():
    E = SegmentSet((Segment((0, -1), (0, 1)), Segment((0.2, -1), (0.2, 1)), Segment((-0.7, 0.3), (-0.4, 0.9))))
    out = besicovitch_alternative(E, (0, 0), 1.0, 1.0)
    rng = np.random.default_rng(4)
    # restrict to J(beta): projection angles within pi/4 of 0
    n = 200_000
    th = rng.uniform(-PI / 4, PI / 4, n)
    c, s = np.cos(th), np.sin(th)
    hits = np.zeros(n, dtype=int)
    for S in E.segments[1:]:
        pa = S.a[0] * c + S.a[1] * s
        pb = S.b[0] * c + S.b[1] * s
        hits += (pa * pb <= 0).astype(int)
    p = (hits >= 1).mean()
    se = math.sqrt(p * (1 - p) / n)
    assert abs(out.I_x.measure - (PI / 2) * p) <= 3 * (PI / 2) * se
    # the generic oracle agrees too when the segment through x is dropped
    q, qse = mc_direction_fraction((0, 0), E.segments[1:], rng)
    assert q * PI >= out.I_x.measure - 3 * PI * qse


def test_alternative_a2_single_segment():
    out = besicovitch_alternative(VERT, (0, 0), 0.5, 4.0)
    assert out.tag == "A2"
    assert out.I_x.measure == 0.0
    assert len(out.tubes) >= 1
    best = max(out.tubes, key=lambda t: t.tube_mass)
    assert best.tube_mass == pytest.approx(1.0)
    for t in out.tubes:
        w = 2 * t.tube.halfwidth
        assert t.tube_mass >= 0.25 * out.theta_star * 4.0 * w / 2 - 1e-12
        assert tube_mass(VERT, t.tube) == pytest.approx(t.tube_mass)
        assert out.J_x.contains(t.theta)


def test_alternative_degenerate():
    with pytest.raises(DegenerateInput):
        besicovitch_alternative(HORIZ, (0, 0), 0.5, 2.0)
    with pytest.raises(ValidationError):
        besicovitch_alternative(VERT, (0, 0), 0.5, 0.5)


def test_alternative_certificates_random():
    rng = np.random.default_rng(21)
    checked = 0
    for _ in range(15):
        E = random_segment_set(rng, 6)
        x = E.segments[0].point_at(E.segments[0].length / 2)
        try:
            out = besicovitch_alternative(E, x, 0.5, 50.0)
        except DegenerateInput:
            continue
        if out.tag == "A1":
            assert out.I_x.measure >= 1 / 50.0
            continue
        for t in out.tubes:
            assert tube_mass(E, t.tube) >= t.cone_mass - 1e-12
            assert t.cone_mass >= t.threshold - 1e-12
            checked += 1
    assert checked > 0


def test_high_density_examples():
    zig = SegmentSet.from_polylines([Polyline(((0, 0), (0.25, 0.01), (0.5, 0), (0.75, 0.01), (1, 0)))])
    assert len(high_density_points(zig, 20.0, 0.5, 0.01)) == 0
    cross = SegmentSet((Segment((-0.5, -0.5), (0.5, 0.5)), Segment((-0.5, 0.5), (0.5, -0.5))))
    R = high_density_points(cross, 0.2, 0.05, 0.01)
    assert len(R) > 0 and np.min(np.hypot(R.points[:, 0], R.points[:, 1])) < 0.05
    assert len(high_density_points(cross, 0.2, 2 * len(cross) + 0.1, 0.01)) == 0


def test_high_density_mass_shrinks_with_defect():
    masses = []
    for t in (0.4, 0.2, 0.1, 0.05):
        masses.append(high_density_points(bent_segment(t), 20.0, 0.05, 0.002).total_mass)
    assert all(a >= b - 1e-12 for a, b in zip(masses, masses[1:]))
