"""Composite Gauss-Legendre quadrature with uniform halving refinement.

The base partition is a uniform grid optionally merged with caller-supplied
breakpoints (angles where the integrand has a kink).  Every refinement step
halves every panel; the error estimate is the change between the last two
estimates.  Per-panel contributions are reduced with ``math.fsum`` in panel
order, so the result depends only on the node values.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import QuadratureNotConverged, ValidationError


@dataclass(frozen=True)
class QuadratureConfig:
    order: int = 8
    initial_panels: int = 64
    tol: float = 1e-8
    max_panels: int = 2**16
    breakpoint_limit: int = 20000

    def __post_init__(self):
        if self.order < 1 or self.initial_panels < 1:
            raise ValidationError("quadrature order and panel count must be positive")
        if not self.tol > 0:
            raise ValidationError("tol_quad must be positive")
        if self.max_panels < self.initial_panels:
            raise ValidationError("max_panels below initial_panels")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class QuadratureResult:
    value: np.ndarray | float
    error_estimate: float
    panels: int


@lru_cache(maxsize=16)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def base_edges(a: float, b: float, panels: int, breakpoints=None) -> np.ndarray:
    edges = np.linspace(a, b, panels + 1)
    if breakpoints is None or len(breakpoints) == 0:
        return edges
    bp = np.asarray(breakpoints, dtype=float)
    bp = bp[(bp > a) & (bp < b)]
    e = np.unique(np.concatenate([edges, bp]))
    # drop slivers so no panel is narrower than ~1e-13 of the range
    keep = np.concatenate([[True], np.diff(e) > 1e-13 * (b - a)])
    e = e[keep]
    e[-1] = b
    return e


def panel_nodes(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights, grouped panel by panel."""
    x, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def _reduce(vals: np.ndarray, weights: np.ndarray, order: int):
    prod = vals * weights.reshape((-1,) + (1,) * (vals.ndim - 1))
    per_panel = prod.reshape((-1, order) + vals.shape[1:]).sum(axis=1)
    if per_panel.ndim == 1:
        return math.fsum(per_panel.tolist())
    return np.array([math.fsum(col) for col in per_panel.T.tolist()])


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    breakpoints=None,
    tol: float | None = None,
) -> QuadratureResult:
    """Integrate ``f`` (vectorised over nodes, scalar- or vector-valued) on ``[a, b]``."""
    tol = cfg.tol if tol is None else tol
    bp = breakpoints
    if bp is not None and len(bp) > cfg.breakpoint_limit:
        bp = None
    edges = base_edges(a, b, cfg.initial_panels, bp)
    if len(edges) - 1 > cfg.max_panels // 2:
        edges = base_edges(a, b, cfg.initial_panels)
    nodes, weights = panel_nodes(edges, cfg.order)
    prev = _reduce(np.asarray(f(nodes), dtype=float), weights, cfg.order)
    err = math.inf
    while 2 * (len(edges) - 1) <= cfg.max_panels:
        edges = halve(edges)
        nodes, weights = panel_nodes(edges, cfg.order)
        cur = _reduce(np.asarray(f(nodes), dtype=float), weights, cfg.order)
        err = float(np.max(np.abs(np.asarray(cur) - np.asarray(prev))))
        prev = cur
        if err < tol:
            return QuadratureResult(cur, err, len(edges) - 1)
    raise QuadratureNotConverged(
        f"no convergence to {tol:g} within {cfg.max_panels} panels (last change {err:.3g})",
        value=prev,
        error_estimate=err,
        panels=len(edges) - 1,
    )


def halve(edges: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = 0.5 * (edges[1:] + edges[:-1])
    return out
