"""Favard length, Crofton integral, line measure of hitting lines and the Favard defect.

Per angle everything is exact: the shadow of a set is a union of intervals
whose length comes from a sort-and-sweep.  The only discretisation is the
quadrature over theta, whose panels are split at every angle where two
vertices project to the same point (the only places the integrand kinks),
as long as the vertex count keeps that list manageable.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .geometry import PI, SegmentSet, interval_union, project_segment
from .quadrature import QuadratureConfig, base_edges, integrate, panel_nodes


@dataclass(frozen=True)
class FavardReport:
    favard: float
    crofton: float
    h1_length: float
    defect: float
    quadrature_error_estimate: float

    def to_dict(self):
        return asdict(self)


def projection_measure(E: SegmentSet, theta: float) -> float:
    return interval_union([project_segment(s, theta) for s in E.segments]).measure


class _Profile:
    """Vectorised ``theta -> (union length, sum of segment widths)``."""

    def __init__(self, E: SegmentSet):
        V, ptr = E.component_vertices()
        A, B = E.endpoint_arrays()
        D = B - A
        self.args = (V[:, 0].copy(), V[:, 1].copy(), ptr, D[:, 0].copy(), D[:, 1].copy())

    def __call__(self, thetas):
        u, w = kernels.projection_profile(thetas, *self.args)
        return np.stack([u, w], axis=1)


def kink_angles(E: SegmentSet, limit: int) -> np.ndarray | None:
    """Angles where two vertices of ``E`` share a projection, or None if too many."""
    A, B = E.endpoint_arrays()
    V = np.unique(np.concatenate([A, B]), axis=0)
    n = len(V)
    if n * (n - 1) // 2 > limit:
        return None
    i, j = np.triu_indices(n, 1)
    d = V[j] - V[i]
    ang = np.mod(np.arctan2(d[:, 1], d[:, 0]) + PI / 2, PI)
    return np.unique(ang)


def _integrate_profile(E: SegmentSet, q: QuadratureConfig):
    return integrate(_Profile(E), 0.0, PI, q, breakpoints=kink_angles(E, q.breakpoint_limit))


def favard_length(E: SegmentSet, q: QuadratureConfig = QuadratureConfig()) -> tuple[float, float]:
    if len(E) == 0:
        return 0.0, 0.0
    res = _integrate_profile(E, q)
    return float(res.value[0]), res.error_estimate


def eta_measure_hitting(E: SegmentSet, q: QuadratureConfig = QuadratureConfig()) -> float:
    """Line measure of the lines meeting ``E``; for each theta the hitting offsets are the shadow."""
    return favard_length(E, q)[0]


def favard_defect(E: SegmentSet, q: QuadratureConfig = QuadratureConfig()) -> float:
    """Integral over theta of (sum of segment shadows - shadow of the union)."""
    if len(E) == 0:
        return 0.0
    prof = _Profile(E)
    res = integrate(
        lambda th: (lambda v: v[:, 1] - v[:, 0])(prof(th)),
        0.0,
        PI,
        q,
        breakpoints=kink_angles(E, q.breakpoint_limit),
    )
    return float(res.value)


def crofton_integral(E: SegmentSet) -> float:
    """Half the integral of the segment widths, in closed form: the total length."""
    return math.fsum(s.length for s in E.segments)


def crofton_quadrature(E: SegmentSet, q: QuadratureConfig = QuadratureConfig()) -> tuple[float, float]:
    if len(E) == 0:
        return 0.0, 0.0
    A, B = E.endpoint_arrays()
    D = B - A
    bp = np.mod(np.arctan2(D[:, 1], D[:, 0]) + PI / 2, PI)

    def half_width(th):
        return 0.5 * np.abs(np.outer(np.cos(th), D[:, 0]) + np.outer(np.sin(th), D[:, 1])).sum(axis=1)

    res = integrate(half_width, 0.0, PI, q, breakpoints=bp)
    return float(res.value), res.error_estimate


def favard_report(E: SegmentSet, q: QuadratureConfig = QuadratureConfig()) -> FavardReport:
    h1 = E.h1
    if len(E) == 0:
        return FavardReport(0.0, 0.0, 0.0, 0.0, 0.0)
    res = _integrate_profile(E, q)
    fav = float(res.value[0])
    return FavardReport(
        favard=fav,
        crofton=crofton_integral(E),
        h1_length=h1,
        defect=2.0 * h1 - fav,
        quadrature_error_estimate=res.error_estimate,
    )


def profile_rows(E: SegmentSet, q: QuadratureConfig = QuadratureConfig()):
    """(theta, projection_measure, multiplicity_excess) at the base quadrature nodes."""
    edges = base_edges(0.0, PI, q.initial_panels, kink_angles(E, q.breakpoint_limit))
    nodes, _ = panel_nodes(edges, q.order)
    if len(E) == 0:
        return [(float(t), 0.0, 0.0) for t in nodes]
    v = _Profile(E)(nodes)
    return [(float(t), float(u), float(w - u)) for t, u, w in zip(nodes, v[:, 0], v[:, 1])]
