"""Weighted point clouds sampled along segment sets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import SegmentSet


@dataclass(frozen=True, eq=False)
class WeightedCloud:
    points: np.ndarray
    weights: np.ndarray
    tangent: np.ndarray
    segment: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        n = len(self.weights)
        for name in ("points", "tangent", "segment", "s"):
            if len(getattr(self, name)) != n:
                raise ValidationError(f"cloud field {name} has the wrong length")
        if n and not np.all(self.weights > 0):
            raise ValidationError("cloud weights must be positive")

    @classmethod
    def from_points(cls, points, weights=None) -> "WeightedCloud":
        P = np.asarray(points, dtype=float).reshape(-1, 2)
        w = np.ones(len(P)) if weights is None else np.asarray(weights, dtype=float)
        return cls(P, w, np.zeros(len(P)), np.full(len(P), -1), np.arange(len(P), dtype=float))

    @classmethod
    def empty(cls) -> "WeightedCloud":
        return cls.from_points(np.empty((0, 2)))

    def __len__(self):
        return len(self.weights)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.weights.tolist())

    def subset(self, mask) -> "WeightedCloud":
        m = np.asarray(mask)
        return WeightedCloud(self.points[m], self.weights[m], self.tangent[m], self.segment[m], self.s[m])

    def concat(self, other: "WeightedCloud") -> "WeightedCloud":
        return WeightedCloud(
            np.concatenate([self.points, other.points]),
            np.concatenate([self.weights, other.weights]),
            np.concatenate([self.tangent, other.tangent]),
            np.concatenate([self.segment, other.segment]),
            np.concatenate([self.s, other.s]),
        )


def sample_segment_set(E: SegmentSet, step: float) -> WeightedCloud:
    """Cell-midpoint samples; segment ``i`` gets ``ceil(L_i / step)`` cells of equal weight.

    Weights sum to the exact length of every segment, so cloud masses never
    drift from the true lengths by more than one cell per segment boundary.
    """
    if not step > 0:
        raise ValidationError("sampling step must be positive")
    pts, wts, tan, seg, arc = [], [], [], [], []
    offset = 0.0
    for i, S in enumerate(E.segments):
        L = S.length
        k = max(1, int(math.ceil(L / step - 1e-9)))
        h = L / k
        u = (np.arange(k) + 0.5) * h
        tx, ty = S.unit_tangent
        pts.append(np.column_stack([S.a[0] + u * tx, S.a[1] + u * ty]))
        wts.append(np.full(k, h))
        tan.append(np.full(k, S.direction_angle))
        seg.append(np.full(k, i))
        arc.append(offset + u)
        offset += L
    if not pts:
        return WeightedCloud.empty()
    return WeightedCloud(
        np.concatenate(pts),
        np.concatenate(wts),
        np.concatenate(tan),
        np.concatenate(seg).astype(np.int64),
        np.concatenate(arc),
    )
