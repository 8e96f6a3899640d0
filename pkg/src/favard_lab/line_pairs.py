"""Measure of the lines spanned by two polygonal curves.

Three independent routes to the same number:

* the change-of-variables formula, a double integral over arclength pairs
  of ``|tau1 x d| |tau2 x d| / |d|^3`` with ``d = x2 - x1``;
* the per-angle overlap of the two shadows, integrated over theta
  (exact per angle for single segments);
* Monte Carlo sampling of lines in a window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CurvesTooClose, DegeneratePair, ValidationError
from .geometry import GEOM_EPS, PI, Polyline, Segment, normalize_angle, segment_distance
from .quadrature import QuadratureConfig, gauss_legendre, halve, integrate

DEFAULT_SHARDS = 16


@dataclass(frozen=True)
class CurveWithTangents:
    segments: tuple[Segment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValidationError("a curve needs at least one segment")

    @classmethod
    def from_segments(cls, segments) -> "CurveWithTangents":
        return cls(tuple(segments))

    @classmethod
    def from_polyline(cls, pl: Polyline) -> "CurveWithTangents":
        return cls(tuple(pl.edges))

    @property
    def length(self) -> float:
        return math.fsum(s.length for s in self.segments)

    def samples(self, per_segment: int = 16):
        """Arclength ``s``, points and unit tangents at cell midpoints."""
        s_all, p_all, t_all = [], [], []
        offset = 0.0
        for S in self.segments:
            u = (np.arange(per_segment) + 0.5) * S.length / per_segment
            tx, ty = S.unit_tangent
            s_all.append(offset + u)
            p_all.append(np.column_stack([S.a[0] + u * tx, S.a[1] + u * ty]))
            t_all.append(np.tile([tx, ty], (per_segment, 1)))
            offset += S.length
        return np.concatenate(s_all), np.concatenate(p_all), np.concatenate(t_all)

    def as_array(self) -> np.ndarray:
        return np.array([[s.a[0], s.a[1], s.b[0], s.b[1]] for s in self.segments])


def _as_curve(G) -> CurveWithTangents:
    if isinstance(G, CurveWithTangents):
        return G
    if isinstance(G, Segment):
        return CurveWithTangents((G,))
    if isinstance(G, Polyline):
        return CurveWithTangents.from_polyline(G)
    return CurveWithTangents(tuple(G))


def connecting_angle(x1, x2, geom_eps: float = GEOM_EPS) -> float:
    dx, dy = x2[0] - x1[0], x2[1] - x1[1]
    if math.hypot(dx, dy) < geom_eps:
        raise DegeneratePair(f"points {tuple(x1)} and {tuple(x2)} coincide")
    return normalize_angle(math.atan2(dy, dx) + PI / 2)


def pair_integrand(x1, tau1, x2, tau2) -> np.ndarray:
    d = np.asarray(x2, dtype=float) - np.asarray(x1, dtype=float)
    c1 = tau1[..., 0] * d[..., 1] - tau1[..., 1] * d[..., 0]
    c2 = tau2[..., 0] * d[..., 1] - tau2[..., 1] * d[..., 0]
    r = np.hypot(d[..., 0], d[..., 1])
    return np.abs(c1) * np.abs(c2) / r**3


def _project_param(p, S: Segment) -> float:
    tx, ty = S.unit_tangent
    return min(S.length, max(0.0, (p[0] - S.a[0]) * tx + (p[1] - S.a[1]) * ty))


def _closest_params(S: Segment, T: Segment) -> tuple[float, float, float]:
    """Arclength parameters of a closest pair on disjoint ``S`` and ``T``, and their distance."""
    cands = []
    for s in (0.0, S.length):
        p = S.point_at(s)
        u = _project_param(p, T)
        q = T.point_at(u)
        cands.append((math.hypot(p[0] - q[0], p[1] - q[1]), s, u))
    for u in (0.0, T.length):
        q = T.point_at(u)
        s = _project_param(q, S)
        p = S.point_at(s)
        cands.append((math.hypot(p[0] - q[0], p[1] - q[1]), s, u))
    dist, s, u = min(cands)
    return s, u, dist


def _line_crossing(S: Segment, T: Segment) -> float | None:
    """Arclength on ``T`` where the line through ``S`` crosses it."""
    tx, ty = S.unit_tangent
    ca = tx * (T.a[1] - S.a[1]) - ty * (T.a[0] - S.a[0])
    cb = tx * (T.b[1] - S.a[1]) - ty * (T.b[0] - S.a[0])
    if ca * cb < 0:
        return T.length * ca / (ca - cb)
    return None


def _graded_edges(L: float, kinks, focus: float, delta: float, base_panels: int = 4) -> np.ndarray:
    pts = list(np.linspace(0.0, L, base_panels + 1))
    pts.extend(k for k in kinks if k is not None)
    h = max(delta, 1e-12 * L)
    while h < L:
        pts.extend((focus - h, focus + h))
        h *= 2.0
    e = np.unique(np.clip(np.asarray(pts, dtype=float), 0.0, L))
    keep = np.concatenate([[True], np.diff(e) > 1e-14 * L])
    e = e[keep]
    e[-1] = L
    return e


def _tensor_gl(S: Segment, T: Segment, e1: np.ndarray, e2: np.ndarray, order: int) -> float:
    x, w = gauss_legendre(order)
    h1 = 0.5 * np.diff(e1)
    h2 = 0.5 * np.diff(e2)
    s = ((0.5 * (e1[1:] + e1[:-1]))[:, None] + h1[:, None] * x[None, :]).ravel()
    u = ((0.5 * (e2[1:] + e2[:-1]))[:, None] + h2[:, None] * x[None, :]).ravel()
    ws = (h1[:, None] * w[None, :]).ravel()
    wu = (h2[:, None] * w[None, :]).ravel()
    t1 = np.array(S.unit_tangent)
    t2 = np.array(T.unit_tangent)
    X1 = np.array(S.a)[None, :] + s[:, None] * t1[None, :]
    X2 = np.array(T.a)[None, :] + u[:, None] * t2[None, :]
    d = X2[None, :, :] - X1[:, None, :]
    c1 = t1[0] * d[..., 1] - t1[1] * d[..., 0]
    c2 = t2[0] * d[..., 1] - t2[1] * d[..., 0]
    r = np.hypot(d[..., 0], d[..., 1])
    F = np.abs(c1) * np.abs(c2) / r**3
    rows = (F * wu[None, :]).sum(axis=1) * ws
    return math.fsum(rows.tolist())


def segment_pair_formula(S: Segment, T: Segment, tol: float = 1e-6, order: int = 8, max_refine: int = 8) -> float:
    s_c, u_c, dist = _closest_params(S, T)
    e1 = _graded_edges(S.length, [_line_crossing(T, S)], s_c, dist)
    e2 = _graded_edges(T.length, [_line_crossing(S, T)], u_c, dist)
    prev = _tensor_gl(S, T, e1, e2, order)
    for _ in range(max_refine):
        e1, e2 = halve(e1), halve(e2)
        cur = _tensor_gl(S, T, e1, e2, order)
        if abs(cur - prev) <= tol * abs(cur) + 1e-15:
            return cur
        prev = cur
    return prev


def curve_distance(G1: CurveWithTangents, G2: CurveWithTangents) -> float:
    return min(segment_distance(S, T) for S in G1.segments for T in G2.segments)


def pair_line_measure_formula(G1, G2, tol: float = 1e-6, geom_eps: float = GEOM_EPS) -> float:
    """Integral of ``#{pairs on l}`` over lines, by the arclength change of variables."""
    G1, G2 = _as_curve(G1), _as_curve(G2)
    sep = curve_distance(G1, G2)
    if sep < 10.0 * geom_eps:
        raise CurvesTooClose(f"curves are {sep:.3g} apart; the integrand blows up")
    return math.fsum(segment_pair_formula(S, T, tol) for S in G1.segments for T in G2.segments)


def _overlap(S1: Segment, S2: Segment):
    A = np.array([S1.a, S1.b, S2.a, S2.b], dtype=float)

    def f(th):
        c, s = np.cos(th), np.sin(th)
        p = A[:, 0][None, :] * c[:, None] + A[:, 1][None, :] * s[:, None]
        lo = np.maximum(np.minimum(p[:, 0], p[:, 1]), np.minimum(p[:, 2], p[:, 3]))
        hi = np.minimum(np.maximum(p[:, 0], p[:, 1]), np.maximum(p[:, 2], p[:, 3]))
        return np.maximum(0.0, hi - lo)

    i, j = np.triu_indices(4, 1)
    d = A[j] - A[i]
    ok = np.hypot(d[:, 0], d[:, 1]) > 0
    bp = np.mod(np.arctan2(d[ok, 1], d[ok, 0]) + PI / 2, PI)
    return f, bp


def pair_line_measure_oracle(S1: Segment, S2: Segment, q: QuadratureConfig = QuadratureConfig()) -> float:
    f, bp = _overlap(S1, S2)
    return float(integrate(f, 0.0, PI, q, breakpoints=bp).value)


def overlap_rows(S1: Segment, S2: Segment, samples: int = 512):
    f, _ = _overlap(S1, S2)
    th = (np.arange(samples) + 0.5) * PI / samples
    return [(float(t), float(v)) for t, v in zip(th, f(th))]


def sample_window(G1: CurveWithTangents, G2: CurveWithTangents, pad: float = 0.01) -> float:
    """Half-width ``R`` of an offset window ``[-R, R]`` containing every shadow."""
    pts = np.concatenate([G1.as_array().reshape(-1, 2), G2.as_array().reshape(-1, 2)])
    return float(np.hypot(pts[:, 0], pts[:, 1]).max()) + pad


def monte_carlo_pair_measure(G1, G2, n: int, seed: int, shards: int = DEFAULT_SHARDS) -> tuple[float, float]:
    """Uniform lines in ``[0, pi) x [-R, R]``; returns (estimate, binomial stderr)."""
    if n < 10_000:
        raise ValidationError("Monte Carlo needs n >= 10^4")
    G1, G2 = _as_curve(G1), _as_curve(G2)
    R = sample_window(G1, G2)
    S1, S2 = G1.as_array(), G2.as_array()
    children = np.random.SeedSequence(seed).spawn(shards)
    sizes = [n // shards + (1 if i < n % shards else 0) for i in range(shards)]
    hits = 0
    for ss, m in zip(children, sizes):
        rng = np.random.Generator(np.random.Philox(ss))
        th = rng.uniform(0.0, PI, m)
        t = rng.uniform(-R, R, m)
        hits += int(kernels.pair_hits(th, t, S1, S2).sum())
    area = PI * 2.0 * R
    p = hits / n
    return area * p, area * math.sqrt(p * (1.0 - p) / n)


def psi_map(S1: Segment, S2: Segment, s1: float, s2: float, theta_ref: float | None = None):
    """``(theta, t)`` of the line through ``x1(s1)`` and ``x2(s2)``; theta unwrapped near ``theta_ref``."""
    x1 = S1.point_at(s1)
    x2 = S2.point_at(s2)
    dx, dy = x2[0] - x1[0], x2[1] - x1[1]
    th = math.atan2(dy, dx) + PI / 2
    if theta_ref is not None:
        th = theta_ref + (th - theta_ref + PI) % (2 * PI) - PI
    return th, x1[0] * math.cos(th) + x1[1] * math.sin(th)


def jacobian_fd(S1: Segment, S2: Segment, s1: float, s2: float, h: float = 1e-6) -> float:
    th0, _ = psi_map(S1, S2, s1, s2)
    a = psi_map(S1, S2, s1 + h, s2, th0)
    b = psi_map(S1, S2, s1 - h, s2, th0)
    c = psi_map(S1, S2, s1, s2 + h, th0)
    d = psi_map(S1, S2, s1, s2 - h, th0)
    J11 = (a[0] - b[0]) / (2 * h)
    J21 = (a[1] - b[1]) / (2 * h)
    J12 = (c[0] - d[0]) / (2 * h)
    J22 = (c[1] - d[1]) / (2 * h)
    return abs(J11 * J22 - J12 * J21)


def jacobian_closed_form(S1: Segment, S2: Segment, s1: float, s2: float) -> float:
    x1 = np.array(S1.point_at(s1))
    x2 = np.array(S2.point_at(s2))
    return float(pair_integrand(x1, np.array(S1.unit_tangent), x2, np.array(S2.unit_tangent)))
