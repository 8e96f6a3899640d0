"""Cones, conical mass and density, direction sets and the Besicovitch alternative.

A cone ``C_beta(x)`` with axis angle ``axis`` is the closed set of points ``y``
with ``|(y - x) . u| >= beta |(y - x) . n|``, ``u`` the unit axis and ``n`` its
normal.  The default axis is vertical.  Directions are reported as
projection angles: the line through ``x`` with direction angle ``psi`` is
``l_{x, theta}`` with ``theta = psi + pi/2 (mod pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DegenerateInput, ValidationError
from .geometry import (
    GEOM_EPS,
    PI,
    AffineLine,
    IntervalUnion,
    Segment,
    SegmentSet,
    Tube,
    normalize_angle,
    point_segment_distance,
    subtended_directions,
)
from .sampling import WeightedCloud, sample_segment_set

VERTICAL = PI / 2


@dataclass(frozen=True)
class Cone:
    apex: tuple[float, float]
    beta: float
    axis: float = VERTICAL

    def __post_init__(self):
        if not self.beta > 0:
            raise ValidationError("cone aperture beta must be positive")

    def contains(self, pts) -> np.ndarray:
        P = np.asarray(pts, dtype=float).reshape(-1, 2) - np.asarray(self.apex)
        ux, uy, nx, ny = kernels.axis_frame(self.axis)
        return np.abs(P[:, 0] * ux + P[:, 1] * uy) >= self.beta * np.abs(P[:, 0] * nx + P[:, 1] * ny)

    def direction_set(self) -> IntervalUnion:
        """``J(beta)``: projection angles whose line through the apex lies in the cone."""
        return cone_directions(self.beta, self.axis)


def cone_directions(beta: float, axis: float = VERTICAL) -> IntervalUnion:
    c = axis - PI / 2
    h = math.atan(1.0 / beta)
    return IntervalUnion.from_intervals([(c - h, c + h)], "angle")


def _clip_halfplanes(p, q, planes):
    """Parameter range of ``p + t (q - p)`` in the intersection of ``g . (y) >= 0``."""
    t0, t1 = 0.0, 1.0
    for gx, gy in planes:
        g0 = gx * p[0] + gy * p[1]
        g1 = gx * q[0] + gy * q[1]
        if g0 < 0 and g1 < 0:
            return None
        if g0 < 0:
            t0 = max(t0, g0 / (g0 - g1))
        elif g1 < 0:
            t1 = min(t1, g0 / (g0 - g1))
    return (t0, t1) if t1 > t0 else None


def _clip_disk(p, q, r):
    """Parameter range of ``p + t (q - p)`` (apex at the origin) inside ``|y| <= r``."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    a = dx * dx + dy * dy
    b = p[0] * dx + p[1] * dy
    c = p[0] * p[0] + p[1] * p[1] - r * r
    disc = b * b - a * c
    if disc < 0:
        return None
    sq = math.sqrt(disc)
    lo, hi = max(0.0, (-b - sq) / a), min(1.0, (-b + sq) / a)
    return (lo, hi) if hi > lo else None


def cone_pieces(E: SegmentSet, x, beta: float, r: float | None, axis: float = VERTICAL) -> list[tuple[int, Segment]]:
    """Sub-segments of ``E`` inside the closed cone (and ball of radius ``r`` if given)."""
    ux, uy, nx, ny = kernels.axis_frame(axis)
    wedges = [
        [(ux - beta * nx, uy - beta * ny), (ux + beta * nx, uy + beta * ny)],
        [(-ux - beta * nx, -uy - beta * ny), (-ux + beta * nx, -uy + beta * ny)],
    ]
    out = []
    for i, S in enumerate(E.segments):
        p = (S.a[0] - x[0], S.a[1] - x[1])
        q = (S.b[0] - x[0], S.b[1] - x[1])
        if point_segment_distance(x, S) <= GEOM_EPS:
            tx, ty = S.unit_tangent
            if abs(tx * ux + ty * uy) < beta * abs(tx * nx + ty * ny):
                continue
            if r is None:
                out.append((i, S))
                continue
            d = _clip_disk(p, q, r)
            if d is not None and (d[1] - d[0]) * S.length > GEOM_EPS:
                a = (S.a[0] + d[0] * (S.b[0] - S.a[0]), S.a[1] + d[0] * (S.b[1] - S.a[1]))
                b = (S.a[0] + d[1] * (S.b[0] - S.a[0]), S.a[1] + d[1] * (S.b[1] - S.a[1]))
                out.append((i, Segment(a, b)))
            continue
        for planes in wedges:
            rng = _clip_halfplanes(p, q, planes)
            if rng is None:
                continue
            t0, t1 = rng
            if r is not None:
                pp = (p[0] + t0 * (q[0] - p[0]), p[1] + t0 * (q[1] - p[1]))
                qq = (p[0] + t1 * (q[0] - p[0]), p[1] + t1 * (q[1] - p[1]))
                d = _clip_disk(pp, qq, r)
                if d is None:
                    continue
                t0, t1 = t0 + d[0] * (t1 - t0), t0 + d[1] * (t1 - t0)
            if (t1 - t0) * S.length <= GEOM_EPS:
                continue
            a = (S.a[0] + t0 * (S.b[0] - S.a[0]), S.a[1] + t0 * (S.b[1] - S.a[1]))
            b = (S.a[0] + t1 * (S.b[0] - S.a[0]), S.a[1] + t1 * (S.b[1] - S.a[1]))
            out.append((i, Segment(a, b)))
    return out


def conical_mass(E: SegmentSet, x, beta: float, r: float, axis: float = VERTICAL) -> float:
    if not beta > 0 or not r > 0:
        raise ValidationError("conical_mass needs beta > 0 and r > 0")
    return math.fsum(s.length for _, s in cone_pieces(E, x, beta, r, axis))


def max_conical_density(E: SegmentSet, x, beta: float, axis: float = VERTICAL, tol: float = 1e-9) -> float:
    return float(max_conical_density_with_radius(E, x, beta, axis, tol)[0])


def max_conical_density_with_radius(E: SegmentSet, x, beta: float, axis: float = VERTICAL, tol: float = 1e-9):
    if not beta > 0:
        raise ValidationError("beta must be positive")
    A, B = E.endpoint_arrays()
    d, r = kernels.max_conical_density_batch(np.asarray(x, dtype=float).reshape(1, 2), A, B, beta, axis, tol)
    return float(d[0]), float(r[0])


def double_direction_set(x, G: SegmentSet) -> IntervalUnion:
    out = IntervalUnion((), "angle")
    for S in G.segments:
        out = out.union(subtended_directions(x, S))
    return out


# --------------------------------------------------------------------------
# Besicovitch alternative
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TubeCertificate:
    theta: float
    interval: tuple[float, float]
    tube: Tube
    cone_mass: float
    threshold: float
    tube_mass: float


@dataclass(frozen=True)
class AlternativeOutcome:
    tag: str
    theta_star: float
    r_star: float
    I_x: IntervalUnion
    J_x: IntervalUnion = IntervalUnion((), "angle")
    tubes: tuple[TubeCertificate, ...] = field(default_factory=tuple)


def tube_mass(E: SegmentSet, T: Tube) -> float:
    pieces = (T.clip_segment(S) for S in E.segments)
    return math.fsum(p.length for p in pieces if p is not None)


def _local(theta: float, shift: float) -> float:
    return normalize_angle(theta - shift)


def _direction_mass(pieces, x, lo: float, hi: float, shift: float) -> float:
    """Mass of the cone pieces whose direction from ``x`` lies in ``[lo, hi]`` (local frame)."""
    width = hi - lo
    mid = 0.5 * (lo + hi) + shift
    # the bowtie of directions is a cone with axis along the middle line
    axis = mid + PI / 2
    beta = 1.0 / math.tan(0.5 * width)
    tot = []
    for _, S in pieces:
        if point_segment_distance(x, S) <= GEOM_EPS:
            th = _local(S.direction_angle + PI / 2, shift)
            if lo - 1e-12 <= th <= hi + 1e-12:
                tot.append(S.length)
            continue
        sub = cone_pieces(SegmentSet((S,), validate=False), x, beta, None, axis)
        tot.extend(s.length for _, s in sub)
    return math.fsum(tot)


def _dyadic_cover(lo: float, hi: float, root: tuple[float, float], max_depth: int = 40):
    """Dyadic sub-intervals of ``root`` covering ``[lo, hi]``, at most twice its length."""
    a, b = root
    width = hi - lo
    depth = max_depth
    if width > 0:
        depth = max(1, min(max_depth, int(math.ceil(math.log2(2.0 * (b - a) / width)))))
    n = 2**depth
    h = (b - a) / n
    k0 = int(math.floor((lo - a) / h))
    k1 = int(math.ceil((hi - a) / h)) - 1 if width > 0 else k0
    k0 = min(max(k0, 0), n - 1)
    k1 = min(max(k1, k0), n - 1)
    return [(depth, k) for k in range(k0, k1 + 1)]


def besicovitch_alternative(
    E: SegmentSet,
    x,
    beta: float,
    H: float,
    axis: float = VERTICAL,
    tol_density: float = 1e-9,
) -> AlternativeOutcome:
    if H < 1:
        raise ValidationError("H must be >= 1")
    x = (float(x[0]), float(x[1]))
    theta_star, r_star = max_conical_density_with_radius(E, x, beta, axis, tol_density)
    if theta_star <= 0.0:
        raise DegenerateInput(f"maximal conical density vanishes at {x}")
    J = cone_directions(beta, axis)
    far = SegmentSet(tuple(S for S in E.segments if point_segment_distance(x, S) > GEOM_EPS), validate=False)
    I_x = double_direction_set(x, far).intersect(J)
    if I_x.measure >= 1.0 / H:
        return AlternativeOutcome("A1", theta_star, r_star, I_x)

    shift = (axis - PI / 2) - PI / 2
    h = math.atan(1.0 / beta)
    root = (PI / 2 - h, PI / 2 + h)
    pieces = cone_pieces(E, x, beta, r_star, axis)

    local = []
    for _, S in pieces:
        if point_segment_distance(x, S) <= GEOM_EPS:
            th = _local(S.direction_angle + PI / 2, shift)
            local.append((th, th))
        else:
            for lo, hi in subtended_directions(x, S).intervals:
                local.extend(
                    IntervalUnion.from_intervals([(_local(lo, shift), _local(lo, shift) + (hi - lo))], "angle").intervals
                )
    D = IntervalUnion.from_intervals(local, "line").intersect(IntervalUnion((root,), "line"))

    def interval(depth, k):
        w = (root[1] - root[0]) / 2**depth
        return (root[0] + k * w, root[0] + (k + 1) * w)

    mass_cache: dict = {}

    def mass(depth, k):
        key = (depth, k)
        if key not in mass_cache:
            lo, hi = interval(depth, k)
            mass_cache[key] = _direction_mass(pieces, x, lo, hi, shift)
        return mass_cache[key]

    cover = sorted({c for lo, hi in D.intervals for c in _dyadic_cover(lo, hi, root)})
    stopped = set()
    for depth, k in cover:
        lo, hi = interval(depth, k)
        if mass(depth, k) < 0.25 * theta_star * H * (hi - lo) * r_star:
            continue
        while depth > 1:
            plo, phi = interval(depth - 1, k // 2)
            if mass(depth - 1, k // 2) > theta_star * H * (phi - plo) * r_star:
                depth, k = depth - 1, k // 2
            else:
                break
        stopped.add((depth, k))
    maximal = [
        (d, k) for d, k in stopped
        if not any(d2 < d and (k >> (d - d2)) == k2 for d2, k2 in stopped)
    ]
    tubes = []
    for depth, k in sorted(maximal):
        lo, hi = interval(depth, k)
        theta = normalize_angle(0.5 * (lo + hi) + shift)
        T = Tube(AffineLine.through(x, theta), 2.0 * (hi - lo) * r_star)
        tubes.append(
            TubeCertificate(
                theta=theta,
                interval=(normalize_angle(lo + shift), normalize_angle(lo + shift) + (hi - lo)),
                tube=T,
                cone_mass=mass(depth, k),
                threshold=0.25 * theta_star * H * (hi - lo) * r_star,
                tube_mass=tube_mass(E, T),
            )
        )
    J_x = IntervalUnion.from_intervals([t.interval for t in tubes], "angle")
    return AlternativeOutcome("A2", theta_star, r_star, I_x, J_x, tuple(tubes))


# --------------------------------------------------------------------------
# High conical density points
# --------------------------------------------------------------------------


def density_profile(E: SegmentSet, beta: float, step: float, axis: float = VERTICAL, tol: float = 1e-9):
    cloud = sample_segment_set(E, step)
    A, B = E.endpoint_arrays()
    dens, _ = kernels.max_conical_density_batch(cloud.points, A, B, beta, axis, tol)
    return cloud, dens


def high_density_points(
    E: SegmentSet,
    beta: float,
    eps: float,
    step: float,
    axis: float = VERTICAL,
    tol: float = 1e-9,
) -> WeightedCloud:
    """Samples (ordered by arclength) whose maximal conical density is at least ``eps``."""
    if not eps > 0 or not step > 0:
        raise ValidationError("eps and step must be positive")
    cloud, dens = density_profile(E, beta, step, axis, tol)
    return cloud.subset(dens >= eps)


def density_rows(E: SegmentSet, beta: float, step: float, axis: float = VERTICAL, tol: float = 1e-9):
    cloud, dens = density_profile(E, beta, step, axis, tol)
    return [(float(s), float(p[0]), float(p[1]), float(d)) for s, p, d in zip(cloud.s, cloud.points, dens)]
