"""Acceptance criteria 1-10; each test prints one PASS/FAIL line."""

import json
import math
import os
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from conftest import bent_segment, plus_sign
from favard_lab.cli import main
from favard_lab.config import AnalysisConfig
from favard_lab.errors import EmptyResult
from favard_lab.favard import crofton_integral, crofton_quadrature, favard_defect, favard_length
from favard_lab.geometry import PI, Polyline, SegmentSet
from favard_lab.graphs import base_frame, cone_condition_check, cover_by_single_graph, minimal_graph_constant, two_cones_extract
from favard_lab.grid import GRID_QUAD, check_separation, energy_I1, generate_grid_set, lipschitz_intersection_mass
from favard_lab.line_pairs import (
    jacobian_closed_form,
    jacobian_fd,
    monte_carlo_pair_measure,
    pair_line_measure_formula,
    pair_line_measure_oracle,
)
from favard_lab.quadrature import QuadratureConfig
from favard_lab.sampling import WeightedCloud, sample_segment_set
from favard_lab.structure import Case1, Case2, analyze, case1_cover_is_graph
from test_line_pairs import curve, random_pair

pytestmark = pytest.mark.acceptance

Q = QuadratureConfig()
DESK = AnalysisConfig.desk()
BASELINES = json.loads((Path(__file__).parent / "baselines.json").read_text())
UNIT_SCENE = {"schema_version": "1", "segments": [[[0, 0], [1, 0]]]}
PLUS_SCENE = {"schema_version": "1", "segments": [[[-0.5, 0], [0.5, 0]], [[0, -0.5], [0, 0.5]]]}


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def favard_table(random_sets):
    """(H1, Fav, defect) of the 200 random sets, computed once."""
    rows = []
    t0 = time.perf_counter()
    for E in random_sets:
        fav, _ = favard_length(E, Q)
        rows.append((E.h1, fav, favard_defect(E, Q)))
    return rows, time.perf_counter() - t0


def test_criterion_01_unit_segment_favard(tmp_path, capsys, report):
    scene = tmp_path / "unit.json"
    scene.write_text(json.dumps(UNIT_SCENE))
    t0 = time.perf_counter()
    code = main(["favard", "--scene", str(scene)])
    dt = time.perf_counter() - t0
    out = capsys.readouterr().out
    fav = json.loads(out)["result"]["favard"]
    ok = code == 0 and abs(fav - 2.0) <= 1e-8 and dt < 1.0
    report(1, ok, f"favard={fav!r}, |err|={abs(fav - 2):.2e}, {dt:.3f}s")


def test_criterion_02_crofton(random_sets, report):
    t0 = time.perf_counter()
    exact = all(crofton_integral(E) == E.h1 for E in random_sets)
    worst = max(abs(crofton_quadrature(E, Q)[0] - E.h1) for E in random_sets)
    dt = time.perf_counter() - t0
    ok = exact and worst <= 1e-6 and dt < 30 and len(random_sets) == 200
    report(2, ok, f"closed form exact on all 200: {exact}, worst quadrature gap {worst:.2e}, {dt:.2f}s")


def test_criterion_03_defect_equality(favard_table, report):
    rows, _ = favard_table
    worst = max(abs(d - (2 * h - f)) for h, f, d in rows)
    plus = favard_defect(plus_sign(), Q)
    target = 4 - 2 * math.sqrt(2)
    ok = worst <= 2 * Q.tol and abs(plus - target) <= 1e-6
    report(3, ok, f"worst |defect - (2H1 - Fav)| = {worst:.2e}, plus sign {plus:.9f} vs {target:.9f}")


def test_criterion_04_maximality(favard_table, report):
    rows, dt = favard_table
    extra = [plus_sign(), bent_segment(0.3), SegmentSet.from_polylines([Polyline(((0, 0), (1, 0), (1, 1)))])]
    rows = rows + [(E.h1, favard_length(E, Q)[0], None) for E in extra]
    violations = sum(f > 2 * h + 1e-6 for h, f, _ in rows)
    margin = max(f - 2 * h for h, f, _ in rows)
    report(4, violations == 0, f"{violations} violations over {len(rows)} sets, max Fav - 2H1 = {margin:.2e}, table {dt:.1f}s")


def test_criterion_05_three_way_agreement(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    pairs = [random_pair(rng) for _ in range(100)]
    worst_rel, worst_z = 0.0, 0.0
    for i, (A, B) in enumerate(pairs):
        f = pair_line_measure_formula(curve(A), curve(B))
        o = pair_line_measure_oracle(A, B, Q)
        worst_rel = max(worst_rel, abs(f - o) / abs(o))
        est, se = monte_carlo_pair_measure(curve(A), curve(B), 1_000_000, seed=i)
        worst_z = max(worst_z, abs(est - f) / se)
    worst_jac = 0.0
    for j in range(1000):
        A, B = pairs[j % 100]
        s1 = rng.uniform(0.05, 0.95) * A.length
        s2 = rng.uniform(0.05, 0.95) * B.length
        cf = jacobian_closed_form(A, B, s1, s2)
        fd = jacobian_fd(A, B, s1, s2)
        worst_jac = max(worst_jac, abs(fd - cf) / cf)
    dt = time.perf_counter() - t0
    ok = worst_rel <= 1e-4 and worst_z <= 3 and worst_jac <= 1e-5 and dt < 300
    report(5, ok, f"formula/oracle rel {worst_rel:.1e}, max |z| {worst_z:.2f}, Jacobian rel {worst_jac:.1e}, {dt:.1f}s")


def _extension_lipschitz_ok(cover):
    t, f = cover.extension_t, cover.extension_f
    L = cover.lipschitz_constant
    for i0 in range(0, len(t), 512):
        dt = np.abs(t[i0 : i0 + 512, None] - t[None, :])
        df = np.abs(f[i0 : i0 + 512, None] - f[None, :])
        if np.any(df > L * dt * (1 + 1e-12) + 1e-15):
            return False
    gt, gf = base_frame(cover.graph_points.points, cover.base_line_angle)
    return np.allclose(cover.extension(gt), gf, rtol=0, atol=1e-12)


def test_criterion_06_two_cones_soundness(report):
    rng = np.random.default_rng(6)
    covers = []
    for _ in range(20):
        m = int(rng.integers(20, 300))
        x = rng.uniform(-1, 1, m)
        y = 0.3 * np.sin(3 * x) + rng.normal(0, 0.05, m)
        cloud = WeightedCloud.from_points(np.column_stack([x, y]))
        try:
            covers.append(two_cones_extract(cloud, None, float(rng.uniform(0.5, 10.0)), 0.1, axis=float(rng.uniform(0, PI))))
        except EmptyResult:
            continue
    par = SegmentSet.from_polylines([Polyline(((0, 0), (1, 0))), Polyline(((0.5, 0.02), (1.5, 0.02)))])
    covers.append(two_cones_extract(sample_segment_set(par, 0.002), par, 0.25, 0.1))
    for t in (0.005, 0.01, 0.02):
        E = bent_segment(t)
        L, base = minimal_graph_constant(E)
        covers.append(cover_by_single_graph(E, max(L * 1.000001, 1e-3), 0.1, base, DESK))
    covers.append(analyze(bent_segment(0.01), 0.1, DESK).cover.cover)
    cone_bad = sum(not cone_condition_check(c.graph_points, c.lipschitz_constant, c.base_line_angle + PI / 2)[0] for c in covers)
    slope_factor = all(math.isclose(c.lipschitz_constant, 2 * c.beta) for c in covers)
    ext_bad = sum(not _extension_lipschitz_ok(c) for c in covers)
    ok = cone_bad == 0 and ext_bad == 0 and slope_factor
    report(6, ok, f"{len(covers)} covers: {cone_bad} cone violations, {ext_bad} non-(2 beta)-Lipschitz extensions")


def test_criterion_07_pipeline_dichotomy(report):
    plus = analyze(plus_sign(), 0.1, DESK)
    d = favard_defect(plus_sign(), DESK.quad)
    ok_plus = isinstance(plus.case, Case2) and 0 < plus.certificate <= d + 2 * DESK.quad.tol
    bent = analyze(bent_segment(0.01), 0.1, DESK)
    ok_bent = isinstance(bent.case, Case1) and bent.cover.uncovered_mass <= 0.1 + bent.cover.slack and case1_cover_is_graph(bent.cover)
    report(
        7,
        ok_plus and ok_bent,
        f"plus: {type(plus.case).__name__}, certificate {plus.certificate:.3e} <= defect {d:.6f}; "
        f"bent: {type(bent.case).__name__}, uncovered {bent.cover.uncovered_mass:.2e} (slack {bent.cover.slack:.1e})",
    )


def test_criterion_08_bent_family_trend(report):
    ts = (0.4, 0.2, 0.1, 0.05, 0.025)
    defects, consts, full = [], [], []
    for t in ts:
        E = bent_segment(t)
        defects.append(favard_defect(E, Q))
        L, base = minimal_graph_constant(E)
        consts.append(L)
        cover = cover_by_single_graph(E, L * 1.000001, 0.1, base, DESK)
        full.append(cover.removed_mass == 0.0)
    dec = all(a > b for a, b in zip(defects, defects[1:])) and all(a > b for a, b in zip(consts, consts[1:]))
    report(8, dec and all(full), "defects " + ", ".join(f"{v:.3e}" for v in defects) + "; graph constants " + ", ".join(f"{v:.4f}" for v in consts))


@pytest.mark.slow
def test_criterion_09_grid(report):
    t0 = time.perf_counter()
    ns = (2, 4, 8, 16)
    lengths_ok, sep_ok = True, True
    favs, I1s, lips = {}, {}, {}
    for n in ns:
        sc = generate_grid_set(n)
        lengths_ok &= abs(sc.E.h1 - 1.0) <= 1e-12
        sep_ok &= check_separation(n, sc.radius) and Fraction(1, n + 1) - 2 * Fraction(sc.radius) >= Fraction(1, 2 * n)
        favs[n] = favard_length(sc.E, GRID_QUAD)[0]
        I1s[n] = energy_I1(sc, 400_000, seed=0)[0]
        lips[n] = lipschitz_intersection_mass(sc, 1.0, 1000, seed=0)["max_random"]
    ratio = max(I1s.values()) / min(I1s.values())
    fav_ok = all(favs[n] >= BASELINES["fav_ratio_floor"] * favs[2] for n in ns[1:])
    C = BASELINES["C_test"]
    lip_ok = all(lips[n] <= C / n for n in ns)
    dt = time.perf_counter() - t0
    ok = lengths_ok and sep_ok and ratio <= BASELINES["I1_ratio_bound"] and fav_ok and lip_ok and dt < 600
    report(
        9,
        ok,
        f"H1=1: {lengths_ok}, separation: {sep_ok}, I1 ratio {ratio:.3f}, fav "
        + ", ".join(f"{favs[n]:.4f}" for n in ns)
        + f", n*max lip mass {max(n * lips[n] for n in ns):.3f} <= C_test {C:.3f}, {dt:.0f}s",
    )


def test_criterion_10_determinism(tmp_path, report):
    scene = tmp_path / "plus.json"
    scene.write_text(json.dumps(PLUS_SCENE))
    outs = []
    for threads in (1, 2, 4, 1):
        cmd = [sys.executable, "-m", "favard_lab", "analyze", "--scene", str(scene), "--eps", "0.1", "--seed", "11", "--threads", str(threads)]
        outs.append(subprocess.run(cmd, capture_output=True, check=True, env=dict(os.environ)).stdout)
    report(10, len(set(outs)) == 1, f"{len(outs)} runs at threads 1,2,4,1 produced {len(set(outs))} distinct report(s)")
