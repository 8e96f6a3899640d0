"""Lipschitz-graph extraction from weighted clouds.

All cone tests run in the frame of the base line: ``t`` is the coordinate
along the base, ``f`` the height above it, and a point ``y`` lies in the
cone of ``x`` iff ``|f(y) - f(x)| >= beta |t(y) - t(x)|``.  Because the same
rotated coordinates feed both the cone test and the McShane extension, a
cloud that passes the test is reproduced exactly by its extension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import AnalysisConfig
from .errors import AssumptionViolated, EmptyResult, ValidationError
from .geometry import GEOM_EPS, PI, IntervalUnion, Segment, SegmentSet, normalize_angle, segments_intersect
from .sampling import WeightedCloud, sample_segment_set

VERTICAL_FRAME = PI / 2


def base_frame(points, base: float) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates ``(t, f)`` along and across the base line of angle ``base``."""
    ux, uy, nx, ny = kernels.axis_frame(base + PI / 2)
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    # n = u rotated by +pi/2 points opposite to the base direction
    t = -(P[:, 0] * nx + P[:, 1] * ny)
    f = P[:, 0] * ux + P[:, 1] * uy
    return t, f


def _frame_points(points, axis: float) -> np.ndarray:
    t, f = base_frame(points, axis - PI / 2)
    return np.column_stack([t, f])


@dataclass(frozen=True, eq=False)
class GraphCover:
    graph_points: WeightedCloud
    removed: WeightedCloud
    lipschitz_constant: float
    base_line_angle: float
    beta: float
    extension_t: np.ndarray
    extension_f: np.ndarray
    high_density_mass: float = 0.0
    removal_bound: float = math.inf

    @property
    def total_mass(self) -> float:
        return self.graph_points.total_mass + self.removed.total_mass

    @property
    def removed_mass(self) -> float:
        return self.removed.total_mass

    @property
    def covered_mass(self) -> float:
        return self.graph_points.total_mass

    def extension(self, t) -> np.ndarray:
        gt, gf = base_frame(self.graph_points.points, self.base_line_angle)
        return mcshane(gt, gf, self.lipschitz_constant, t)

    def summary(self, eps: float) -> dict:
        return {
            "beta": self.beta,
            "eps": eps,
            "total_mass": self.total_mass,
            "removed_mass": self.removed_mass,
            "lipschitz_constant": self.lipschitz_constant,
        }


def mcshane(t_i, f_i, L: float, t) -> np.ndarray:
    """``min_i f_i + L |t - t_i|``, chunked over the evaluation points."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(len(t))
    step = max(1, 4_000_000 // max(1, len(t_i)))
    for j in range(0, len(t), step):
        out[j : j + step] = (f_i[None, :] + L * np.abs(t[j : j + step, None] - t_i[None, :])).min(axis=1)
    return out


def cone_condition_check(cloud: WeightedCloud, beta: float, axis: float = VERTICAL_FRAME, chunk: int = 1024):
    """All pairs ``i < j`` with ``y_j`` in the closed cone of ``y_i`` (symmetric relation)."""
    if not beta > 0:
        raise ValidationError("beta must be positive")
    Q = _frame_points(cloud.points, axis)
    n = len(Q)
    pairs = []
    for i0 in range(0, n, chunk):
        dt = Q[None, :, 0] - Q[i0 : i0 + chunk, None, 0]
        df = Q[None, :, 1] - Q[i0 : i0 + chunk, None, 1]
        hit = (np.abs(df) >= beta * np.abs(dt)) & ((dt != 0.0) | (df != 0.0))
        ii, jj = np.nonzero(hit)
        ii = ii + i0
        keep = jj > ii
        pairs.extend(zip(ii[keep].tolist(), jj[keep].tolist()))
    return (not pairs), pairs


def cone_bad_mask(cloud: WeightedCloud, beta: float, axis: float = VERTICAL_FRAME, backend=None) -> np.ndarray:
    Q = _frame_points(cloud.points, axis)
    return kernels.cone_partners(Q, beta, VERTICAL_FRAME, backend=backend)


def two_cones_extract(
    cloud: WeightedCloud,
    E: SegmentSet | None,
    beta: float,
    eps: float,
    axis: float = VERTICAL_FRAME,
    grid: int = 513,
) -> GraphCover:
    """Drop every point with a partner in its ``2 beta`` cone; the rest is a ``2 beta``-graph."""
    if len(cloud) == 0:
        raise EmptyResult("empty cloud")
    bad = cone_bad_mask(cloud, 2.0 * beta, axis)
    if bad.all():
        raise EmptyResult(f"all {len(cloud)} points have a partner in their {2 * beta:g}-cone")
    good = cloud.subset(~bad)
    base = normalize_angle(axis - PI / 2)
    L = 2.0 * beta
    gt, gf = base_frame(good.points, base)
    tt = np.linspace(gt.min(), gt.max(), grid) if len(gt) > 1 else gt.copy()
    tt = np.unique(np.concatenate([tt, gt]))
    return GraphCover(
        graph_points=good,
        removed=cloud.subset(bad),
        lipschitz_constant=L,
        base_line_angle=base,
        beta=beta,
        extension_t=tt,
        extension_f=mcshane(gt, gf, L, tt),
        removal_bound=30.0 * eps / beta,
    )


def max_edge_deviation(E: SegmentSet, base: float) -> float:
    """Largest angle between an edge of ``E`` and the base direction (lines, mod pi)."""
    dev = 0.0
    for S in E.segments:
        d = abs(normalize_angle(S.direction_angle - base))
        dev = max(dev, min(d, PI - d))
    return dev


def cover_by_single_graph(
    E: SegmentSet,
    alpha: float,
    eps: float,
    base: float,
    cfg: AnalysisConfig,
    step: float | None = None,
) -> GraphCover:
    """Remove high-density samples, then extract one ``C_lip alpha``-Lipschitz graph over ``base``."""
    limit = math.atan(alpha) + cfg.geom_eps
    dev = max_edge_deviation(E, base)
    if dev > limit:
        raise AssumptionViolated(f"an edge makes angle {dev:.6g} with the base line, above atan(alpha)={math.atan(alpha):.6g}")
    beta = cfg.C_lip * alpha / 2.0
    eps1 = alpha * eps / cfg.C_pipeline
    step = cfg.step_for(E.h1) if step is None else step
    axis = base + PI / 2
    cloud = sample_segment_set(E, step)
    A, B = E.endpoint_arrays()
    dens, _ = kernels.max_conical_density_batch(cloud.points, A, B, beta, axis, cfg.tol_density)
    high = dens >= eps1
    high_cloud = cloud.subset(high)
    rest = cloud.subset(~high)
    if len(rest) == 0:
        raise EmptyResult("every sample has high conical density")
    cover = two_cones_extract(rest, E, beta, eps1, axis)
    return GraphCover(
        graph_points=cover.graph_points,
        removed=cover.removed.concat(high_cloud),
        lipschitz_constant=cfg.C_lip * alpha,
        base_line_angle=cover.base_line_angle,
        beta=beta,
        extension_t=cover.extension_t,
        extension_f=cover.extension_f,
        high_density_mass=high_cloud.total_mass,
        removal_bound=cover.removal_bound,
    )


def coarea_check(cover: GraphCover, E: SegmentSet | None, alpha: float) -> tuple[float, float]:
    """Length of the covered part against ``sqrt(1 + alpha^2)`` times its shadow with multiplicity."""
    g = cover.graph_points
    lhs = g.total_mass
    proj = np.abs(np.cos(g.tangent - cover.base_line_angle))
    rhs = math.sqrt(1.0 + alpha * alpha) * math.fsum((g.weights * proj).tolist())
    return lhs, rhs


# --------------------------------------------------------------------------
# Smallest Lipschitz constant of a single graph containing E
# --------------------------------------------------------------------------


def _difference_directions(S: Segment, T: Segment) -> IntervalUnion:
    """Line directions of ``y - x`` for ``x`` in ``S``, ``y`` in ``T``, ``x != y``.

    The difference set is a parallelogram.  If it holds the origin in its
    interior or on an edge every direction occurs; if the origin is a corner
    (the segments share only an endpoint) the directions form that corner's sector.
    """
    corners = [
        (T.a[0] - S.a[0], T.a[1] - S.a[1]),
        (T.a[0] - S.b[0], T.a[1] - S.b[1]),
        (T.b[0] - S.a[0], T.b[1] - S.a[1]),
        (T.b[0] - S.b[0], T.b[1] - S.b[1]),
    ]
    if segments_intersect(S, T):
        zero = [c for c in corners if math.hypot(*c) <= GEOM_EPS]
        if len(zero) != 1:
            return IntervalUnion(((0.0, PI),), "angle")
        if abs(_cross(S, T)) <= GEOM_EPS:
            # collinear and touching end to end: every chord runs along the common line
            return IntervalUnion.from_intervals([(S.direction_angle, S.direction_angle)], "angle")
        corners = [c for c in corners if math.hypot(*c) > GEOM_EPS]
    ref = math.atan2(corners[0][1], corners[0][0])
    rel = []
    for cx, cy in corners:
        a = math.atan2(cy, cx) - ref
        a = (a + PI) % (2 * PI) - PI
        rel.append(a)
    lo, hi = min(rel), max(rel)
    return IntervalUnion.from_intervals([(ref + lo, ref + hi)], "angle")


def _cross(S: Segment, T: Segment) -> float:
    u, v = S.unit_tangent, T.unit_tangent
    return u[0] * v[1] - u[1] * v[0]


def direction_hull(E: SegmentSet) -> IntervalUnion:
    """All line directions of chords of ``E`` (as direction angles mod pi)."""
    segs = E.segments
    out = IntervalUnion.from_intervals([(s.direction_angle, s.direction_angle) for s in segs], "angle")
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            out = out.union(_difference_directions(segs[i], segs[j]))
    return out


def minimal_covering_arc(U: IntervalUnion) -> tuple[float, float]:
    """Shortest arc of the direction circle containing ``U``: ``(length, midpoint)``."""
    if not U.intervals:
        return 0.0, 0.0
    ivs = list(U.intervals)
    if len(ivs) >= 2 and ivs[0][0] <= 0.0 and ivs[-1][1] >= PI:
        ivs = [(ivs[-1][0] - PI, ivs[0][1])] + ivs[1:-1]
    if len(ivs) == 1 and ivs[0][1] - ivs[0][0] >= PI:
        return PI, 0.0
    best_gap, best_k = -1.0, 0
    for k in range(len(ivs)):
        end = ivs[k][1]
        nxt = ivs[(k + 1) % len(ivs)][0] + (PI if k + 1 == len(ivs) else 0.0)
        gap = nxt - end
        if gap > best_gap:
            best_gap, best_k = gap, k
    start = ivs[(best_k + 1) % len(ivs)][0]
    length = PI - best_gap
    return length, normalize_angle(start + 0.5 * length)


def minimal_graph_constant(E: SegmentSet) -> tuple[float, float]:
    """Least ``L`` such that ``E`` lies in one ``L``-Lipschitz graph, and the best base angle."""
    arc, mid = minimal_covering_arc(direction_hull(E))
    if arc >= PI - GEOM_EPS:
        return math.inf, mid
    return math.tan(0.5 * arc), mid
