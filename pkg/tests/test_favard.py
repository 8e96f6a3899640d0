import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_segment_set
from favard_lab.favard import (
    crofton_integral,
    crofton_quadrature,
    eta_measure_hitting,
    favard_defect,
    favard_length,
    favard_report,
    projection_measure,
    profile_rows,
)
from favard_lab.geometry import PI, Segment, SegmentSet
from favard_lab.quadrature import QuadratureConfig
from oracles import dense_defect, dense_favard, shadow, union_length

Q = QuadratureConfig()
EMPTY = SegmentSet(())


def test_projection_measure_examples(unit, plus):
    assert projection_measure(unit, 0.0) == 1.0
    assert projection_measure(EMPTY, 0.3) == 0.0
    for th in np.linspace(0, PI, 37):
        assert projection_measure(plus, th) == pytest.approx(max(abs(math.cos(th)), abs(math.sin(th))), abs=1e-15)


def test_projection_measure_matches_sweep(random_sets):
    for E in random_sets[:40]:
        for th in (0.1, 1.0, 2.5):
            assert projection_measure(E, th) == pytest.approx(union_length(shadow(E, th)), abs=1e-12)


def test_favard_examples(unit, plus):
    assert favard_length(unit)[0] == pytest.approx(2.0, abs=1e-8)
    assert favard_length(plus)[0] == pytest.approx(2 * math.sqrt(2), abs=1e-6)
    far = SegmentSet((Segment((0, 0), (1, 0)), Segment((0, 100), (1, 100))))
    # projections only overlap near theta = 0 when the copies are stacked vertically
    assert favard_length(far)[0] == pytest.approx(dense_favard(far, 200000), abs=1e-4)
    assert favard_length(EMPTY) == (0.0, 0.0)


def test_far_apart_copies_additive():
    E = SegmentSet((Segment((0, 0), (1, 0)), Segment((1e3, 1e3), (1e3 + 1, 1e3))))
    fav = favard_length(E)[0]
    assert fav == pytest.approx(dense_favard(E, 200000), abs=1e-4)
    assert 4 - 0.01 < fav <= 4


def test_crofton_examples(unit, plus):
    assert crofton_integral(unit) == 1.0
    assert crofton_integral(plus) == 2.0
    assert crofton_integral(EMPTY) == 0.0
    assert crofton_quadrature(plus)[0] == pytest.approx(2.0, abs=1e-10)


def test_defect_examples(unit, plus):
    assert favard_defect(unit) == pytest.approx(0.0, abs=1e-14)
    assert favard_defect(plus) == pytest.approx(4 - 2 * math.sqrt(2), abs=1e-6)
    collinear = SegmentSet((Segment((0, 0), (1, 0)), Segment((2, 0), (3, 0))))
    assert favard_defect(collinear) == pytest.approx(0.0, abs=1e-12)


def test_eta_measure(unit, plus):
    assert eta_measure_hitting(unit) == pytest.approx(2.0, abs=1e-8)
    assert eta_measure_hitting(plus) == pytest.approx(2 * math.sqrt(2), abs=1e-6)
    assert eta_measure_hitting(EMPTY) == 0.0


def test_against_dense_oracle():
    rng = np.random.default_rng(3)
    for _ in range(4):
        E = random_segment_set(rng, 6)
        assert favard_length(E)[0] == pytest.approx(dense_favard(E), abs=2e-4)
        assert favard_defect(E) == pytest.approx(dense_defect(E), abs=2e-4)


@given(st.integers(0, 2**31), st.floats(0, 2 * math.pi), st.floats(-3, 3), st.floats(-3, 3))
def test_rigid_motion_invariance(seed, rot, sx, sy):
    E = random_segment_set(np.random.default_rng(seed), 6)
    F = E.transformed(rotation=rot, shift=(sx, sy))
    assert favard_length(F)[0] == pytest.approx(favard_length(E)[0], abs=1e-6)


@given(st.integers(0, 2**31), st.floats(0.1, 10))
def test_scaling(seed, lam):
    E = random_segment_set(np.random.default_rng(seed), 5)
    F = SegmentSet(tuple(Segment((lam * s.a[0], lam * s.a[1]), (lam * s.b[0], lam * s.b[1])) for s in E.segments))
    assert favard_length(F)[0] == pytest.approx(lam * favard_length(E)[0], rel=1e-6, abs=1e-6)


@given(st.integers(0, 2**31))
def test_bounds_and_monotone(seed):
    rng = np.random.default_rng(seed)
    E = random_segment_set(rng, 10)
    fav = favard_length(E)[0]
    assert fav <= 2 * E.h1 + 1e-6
    assert fav >= max(2 * s.length for s in E.segments) - 1e-6
    sub = E.subset(list(range(max(1, len(E) // 2))))
    assert favard_length(sub)[0] <= fav + 1e-6


def test_report_and_rows(plus):
    rep = favard_report(plus)
    assert rep.defect == pytest.approx(4 - 2 * math.sqrt(2), abs=1e-6)
    assert rep.crofton == rep.h1_length == 2.0
    rows = profile_rows(plus, QuadratureConfig(initial_panels=8))
    assert all(0 <= th <= PI for th, _, _ in rows)
    for th, u, ex in rows:
        assert u == pytest.approx(max(abs(math.cos(th)), abs(math.sin(th))))
        assert ex == pytest.approx(min(abs(math.cos(th)), abs(math.sin(th))))
