"""Planar primitives: angles, segments, polylines, lines, tubes and interval unions.

Angles are plain floats normalised to ``[0, pi)``.  A direction angle of a
segment is the angle of ``b - a`` modulo pi; a projection angle ``theta``
parametrises ``pi_theta(x) = x . (cos theta, sin theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CollinearOverlap, ValidationError

GEOM_EPS = 1e-12
DEDUP_TOL = 1e-9
PI = math.pi

Angle = float


def normalize_angle(theta: float) -> float:
    r = math.fmod(float(theta), PI)
    if r < 0.0:
        r += PI
    if r >= PI:
        r = 0.0
    return r


def project_point(x, theta: float) -> float:
    return float(x[0]) * math.cos(theta) + float(x[1]) * math.sin(theta)


def _as_point(p) -> tuple[float, float]:
    if len(p) != 2:
        raise ValidationError(f"point must have 2 coordinates, got {p!r}")
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValidationError(f"non-finite coordinate in {p!r}")
    return (x, y)


@dataclass(frozen=True)
class Segment:
    a: tuple[float, float]
    b: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "a", _as_point(self.a))
        object.__setattr__(self, "b", _as_point(self.b))
        if self.length <= GEOM_EPS:
            raise ValidationError(f"degenerate segment {self.a}-{self.b}")

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    @property
    def direction_angle(self) -> float:
        return normalize_angle(math.atan2(self.b[1] - self.a[1], self.b[0] - self.a[0]))

    @property
    def unit_tangent(self) -> tuple[float, float]:
        L = self.length
        return ((self.b[0] - self.a[0]) / L, (self.b[1] - self.a[1]) / L)

    def point_at(self, s: float) -> tuple[float, float]:
        """Point at arclength ``s`` from ``a``."""
        u = self.unit_tangent
        return (self.a[0] + s * u[0], self.a[1] + s * u[1])

    def contains(self, p, tol: float = DEDUP_TOL) -> bool:
        return point_segment_distance(p, self) <= tol

    def translated(self, d) -> "Segment":
        return Segment((self.a[0] + d[0], self.a[1] + d[1]), (self.b[0] + d[0], self.b[1] + d[1]))


def point_segment_distance(p, S: Segment) -> float:
    ax, ay = S.a
    dx, dy = S.b[0] - ax, S.b[1] - ay
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / (dx * dx + dy * dy)
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - ax - t * dx, p[1] - ay - t * dy)


def segment_distance(S: Segment, T: Segment) -> float:
    if segments_intersect(S, T):
        return 0.0
    return min(
        point_segment_distance(S.a, T),
        point_segment_distance(S.b, T),
        point_segment_distance(T.a, S),
        point_segment_distance(T.b, S),
    )


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def segments_intersect(S: Segment, T: Segment) -> bool:
    d1 = _orient(T.a, T.b, S.a)
    d2 = _orient(T.a, T.b, S.b)
    d3 = _orient(S.a, S.b, T.a)
    d4 = _orient(S.a, S.b, T.b)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return any(
        point_segment_distance(p, seg) <= GEOM_EPS
        for p, seg in ((S.a, T), (S.b, T), (T.a, S), (T.b, S))
    )


def project_segment(S: Segment, theta: float) -> tuple[float, float]:
    pa = project_point(S.a, theta)
    pb = project_point(S.b, theta)
    return (min(pa, pb), max(pa, pb))


@dataclass(frozen=True)
class Polyline:
    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        verts = tuple(_as_point(v) for v in self.vertices)
        if len(verts) < 2:
            raise ValidationError("a polyline needs at least 2 vertices")
        for p, q in zip(verts, verts[1:]):
            if math.hypot(q[0] - p[0], q[1] - p[1]) <= GEOM_EPS:
                raise ValidationError(f"repeated consecutive vertex {p}")
        object.__setattr__(self, "vertices", verts)

    @property
    def edges(self) -> list[Segment]:
        return [Segment(p, q) for p, q in zip(self.vertices, self.vertices[1:])]

    @property
    def length(self) -> float:
        return math.fsum(e.length for e in self.edges)


@dataclass(frozen=True)
class AffineLine:
    """The line ``{p : pi_theta(p) = t}``."""

    theta: float
    t: float

    def __post_init__(self):
        th = float(self.theta)
        t = float(self.t)
        r = normalize_angle(th)
        # theta and theta + pi describe the same line with offset negated
        k = round((th - r) / PI)
        if k % 2:
            t = -t
        object.__setattr__(self, "theta", r)
        object.__setattr__(self, "t", t)

    @classmethod
    def through(cls, x, theta: float) -> "AffineLine":
        return cls(theta, project_point(x, theta))

    @property
    def normal(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))

    @property
    def direction(self) -> tuple[float, float]:
        return (-math.sin(self.theta), math.cos(self.theta))

    def signed_distance(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return pts[:, 0] * math.cos(self.theta) + pts[:, 1] * math.sin(self.theta) - self.t


@dataclass(frozen=True)
class Tube:
    center: AffineLine
    halfwidth: float

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise ValidationError("tube halfwidth must be positive")

    def contains(self, pts) -> np.ndarray:
        return np.abs(self.center.signed_distance(pts)) <= self.halfwidth

    def clip_segment(self, S: Segment) -> Segment | None:
        """Part of ``S`` inside the closed tube, or None."""
        da, db = self.center.signed_distance([S.a, S.b])
        w = self.halfwidth
        if abs(db - da) <= GEOM_EPS:
            return S if abs(da) <= w else None
        t0 = (-w - da) / (db - da)
        t1 = (w - da) / (db - da)
        lo, hi = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
        if hi - lo <= 0.0 or (hi - lo) * S.length <= GEOM_EPS:
            return None
        ax, ay = S.a
        dx, dy = S.b[0] - ax, S.b[1] - ay
        return Segment((ax + lo * dx, ay + lo * dy), (ax + hi * dx, ay + hi * dy))


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted disjoint closed intervals on the line or on the circle ``[0, pi)``."""

    intervals: tuple[tuple[float, float], ...] = ()
    domain: str = "line"

    @classmethod
    def from_intervals(cls, intervals: Iterable[Sequence[float]], domain: str = "line") -> "IntervalUnion":
        if domain not in ("line", "angle"):
            raise ValidationError(f"unknown interval domain {domain!r}")
        raw = []
        for lo, hi in intervals:
            lo, hi = float(lo), float(hi)
            if hi < lo:
                raise ValidationError(f"interval with hi < lo: [{lo}, {hi}]")
            if domain == "angle":
                raw.extend(_wrap_angle_interval(lo, hi))
            else:
                raw.append((lo, hi))
        return cls(tuple(_merge(raw)), domain)

    @property
    def measure(self) -> float:
        return math.fsum(hi - lo for lo, hi in self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        self._check(other)
        return IntervalUnion(tuple(_merge(list(self.intervals) + list(other.intervals))), self.domain)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        self._check(other)
        out = []
        i = j = 0
        A, B = self.intervals, other.intervals
        while i < len(A) and j < len(B):
            lo = max(A[i][0], B[j][0])
            hi = min(A[i][1], B[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if A[i][1] < B[j][1]:
                i += 1
            else:
                j += 1
        return IntervalUnion(tuple(_merge(out)), self.domain)

    def complement(self, within: tuple[float, float] | None = None) -> "IntervalUnion":
        if within is None:
            if self.domain != "angle":
                raise ValidationError("line-domain complement needs a bounding interval")
            within = (0.0, PI)
        lo0, hi0 = within
        out = []
        cur = lo0
        for lo, hi in self.intervals:
            if hi < lo0 or lo > hi0:
                continue
            if lo > cur:
                out.append((cur, min(lo, hi0)))
            cur = max(cur, hi)
        if cur < hi0:
            out.append((cur, hi0))
        return IntervalUnion(tuple(_merge(out)), self.domain)

    def contains(self, v: float) -> bool:
        if self.domain == "angle":
            v = normalize_angle(v)
        return any(lo <= v <= hi for lo, hi in self.intervals)

    def _check(self, other):
        if other.domain != self.domain:
            raise ValidationError("interval unions live on different domains")


def _wrap_angle_interval(lo: float, hi: float) -> list[tuple[float, float]]:
    if hi - lo >= PI:
        return [(0.0, PI)]
    a = normalize_angle(lo)
    b = a + (hi - lo)
    if b <= PI:
        return [(a, b)]
    return [(a, PI), (0.0, b - PI)]


def _merge(raw: list[tuple[float, float]]) -> list[tuple[float, float]]:
    raw = sorted(raw)
    out: list[tuple[float, float]] = []
    for lo, hi in raw:
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def interval_union(intervals: Iterable[Sequence[float]], domain: str = "line") -> IntervalUnion:
    return IntervalUnion.from_intervals(intervals, domain)


def subtended_directions(x, S: Segment) -> IntervalUnion:
    """Projection angles ``theta`` whose line through ``x`` meets ``S``."""
    ux, uy = S.a[0] - x[0], S.a[1] - x[1]
    vx, vy = S.b[0] - x[0], S.b[1] - x[1]
    if point_segment_distance(x, S) <= GEOM_EPS:
        return IntervalUnion(((0.0, PI),), "angle")
    psi = math.atan2(uy, ux)
    sweep = math.atan2(ux * vy - uy * vx, ux * vx + uy * vy)
    lo, hi = (psi, psi + sweep) if sweep >= 0 else (psi + sweep, psi)
    return IntervalUnion.from_intervals([(lo + PI / 2, hi + PI / 2)], "angle")


@dataclass(frozen=True)
class SegmentSet:
    """A finite union of closed segments grouped into connected components.

    ``components`` lists, per component, the indices of its segments; vertices
    of a component are used by the projection kernels, whose per-angle union
    of component shadows equals the union of segment shadows.
    """

    segments: tuple[Segment, ...] = ()
    components: tuple[tuple[int, ...], ...] | None = None
    bounding_radius: float | None = None
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        comps = self.components
        if comps is None:
            comps = tuple((i,) for i in range(len(segs)))
        comps = tuple(tuple(int(i) for i in c) for c in comps)
        seen = sorted(i for c in comps for i in c)
        if seen != list(range(len(segs))):
            raise ValidationError("components must partition the segment indices")
        object.__setattr__(self, "components", comps)
        rmax = 0.0
        for s in segs:
            rmax = max(rmax, math.hypot(*s.a), math.hypot(*s.b))
        if self.bounding_radius is None:
            object.__setattr__(self, "bounding_radius", rmax)
        elif rmax > self.bounding_radius + GEOM_EPS:
            raise ValidationError(f"geometry reaches radius {rmax:.6g} beyond bounding_radius {self.bounding_radius}")
        if self.validate:
            _check_no_overlap(segs)

    @classmethod
    def from_polylines(cls, polylines: Sequence[Polyline], segments: Sequence[Segment] = (), bounding_radius=None, validate=True):
        segs: list[Segment] = []
        comps: list[tuple[int, ...]] = []
        for pl in polylines:
            edges = pl.edges
            comps.append(tuple(range(len(segs), len(segs) + len(edges))))
            segs.extend(edges)
        for s in segments:
            comps.append((len(segs),))
            segs.append(s)
        return cls(tuple(segs), tuple(comps), bounding_radius, validate)

    def __len__(self):
        return len(self.segments)

    @property
    def h1(self) -> float:
        return math.fsum(s.length for s in self.segments)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([s.length for s in self.segments], dtype=float)

    def endpoint_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        A = np.array([s.a for s in self.segments], dtype=float).reshape(-1, 2)
        B = np.array([s.b for s in self.segments], dtype=float).reshape(-1, 2)
        return A, B

    def component_vertices(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat vertex array and CSR offsets, one block per component."""
        blocks = []
        ptr = [0]
        for comp in self.components:
            pts = []
            for i in comp:
                pts.append(self.segments[i].a)
                pts.append(self.segments[i].b)
            blocks.extend(pts)
            ptr.append(len(blocks))
        V = np.array(blocks, dtype=float).reshape(-1, 2)
        return V, np.array(ptr, dtype=np.int64)

    def transformed(self, rotation: float = 0.0, shift=(0.0, 0.0), scale: float = 1.0) -> "SegmentSet":
        c, s = math.cos(rotation), math.sin(rotation)

        def f(p):
            return (scale * (c * p[0] - s * p[1]) + shift[0], scale * (s * p[0] + c * p[1]) + shift[1])

        segs = tuple(Segment(f(t.a), f(t.b)) for t in self.segments)
        return SegmentSet(segs, self.components, None, validate=False)

    def subset(self, indices: Sequence[int]) -> "SegmentSet":
        return SegmentSet(tuple(self.segments[i] for i in indices), None, None, validate=False)


def _check_no_overlap(segs: Sequence[Segment], chunk: int = 512) -> None:
    """Reject pairs of segments sharing a piece of positive length."""
    n = len(segs)
    if n < 2:
        return
    A = np.array([s.a for s in segs])
    B = np.array([s.b for s in segs])
    D = B - A
    L = np.hypot(D[:, 0], D[:, 1])
    U = D / L[:, None]
    for i0 in range(0, n, chunk):
        i1 = min(n, i0 + chunk)
        Ui = U[i0:i1, None, :]
        par = np.abs(Ui[..., 0] * U[None, :, 1] - Ui[..., 1] * U[None, :, 0]) <= 1e-10
        off = A[None, :, :] - A[i0:i1, None, :]
        colin = par & (np.abs(Ui[..., 0] * off[..., 1] - Ui[..., 1] * off[..., 0]) <= 1e-10)
        ii, jj = np.nonzero(colin)
        for a, j in zip(ii + i0, jj):
            if j <= a:
                continue
            u = U[a]
            p0 = float(np.dot(A[j] - A[a], u))
            p1 = float(np.dot(B[j] - A[a], u))
            lo, hi = max(0.0, min(p0, p1)), min(L[a], max(p0, p1))
            if hi - lo > GEOM_EPS:
                raise ValidationError(f"segments {a} and {j} overlap along a piece of length {hi - lo:.3g}")


def line_set_intersection(E: SegmentSet, line: AffineLine) -> tuple[int, np.ndarray]:
    """Distinct points of ``E`` on ``line``; raises if the line contains a segment."""
    if len(E) == 0:
        return 0, np.empty((0, 2))
    A, B = E.endpoint_arrays()
    da = line.signed_distance(A)
    db = line.signed_distance(B)
    on_line = (np.abs(da) <= GEOM_EPS) & (np.abs(db) <= GEOM_EPS)
    if on_line.any():
        raise CollinearOverlap(f"line (theta={line.theta:.6g}, t={line.t:.6g}) contains segment {int(np.argmax(on_line))}")
    hit = (da * db) <= 0.0
    if not hit.any():
        return 0, np.empty((0, 2))
    da, db, A, B = da[hit], db[hit], A[hit], B[hit]
    w = da / (da - db)
    P = A + w[:, None] * (B - A)
    d = line.direction
    P = P[np.argsort(P[:, 0] * d[0] + P[:, 1] * d[1], kind="stable")]
    keep = [P[0]]
    for p in P[1:]:
        if math.hypot(p[0] - keep[-1][0], p[1] - keep[-1][1]) > DEDUP_TOL:
            keep.append(p)
    pts = np.array(keep)
    return len(pts), pts
