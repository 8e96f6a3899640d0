"""Grid of small circles: unit total length, bounded 1-energy, tiny graph intersections."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate as sp_integrate

from .config import AnalysisConfig
from .errors import ValidationError
from .favard import favard_length
from .geometry import PI, Polyline, SegmentSet
from .quadrature import QuadratureConfig
from .sampling import sample_segment_set

DEFAULT_SHARDS = 16
GRID_QUAD = QuadratureConfig(order=8, initial_panels=256, tol=1e-6, breakpoint_limit=0)


@dataclass(frozen=True, eq=False)
class GridScene:
    n: int
    poly_sides: int
    centers: np.ndarray
    nominal_radius: float
    radius: float
    E: SegmentSet

    @property
    def rescale(self) -> float:
        return self.radius / self.nominal_radius

    @property
    def circle_length(self) -> float:
        return 2.0 * self.poly_sides * self.radius * math.sin(PI / self.poly_sides)


def grid_centers(n: int) -> np.ndarray:
    k = np.arange(1, n + 1) / (n + 1)
    X, Y = np.meshgrid(k, k, indexing="ij")
    return np.column_stack([X.ravel(), Y.ravel()])


def check_separation(n: int, radius: float) -> bool:
    """Gap between neighbouring disks is at least ``1/(2n)``, in exact arithmetic.

    Neighbouring centers are ``1/(n+1)`` apart; the radius is rounded up by a
    relative ``1e-12`` to absorb rounding in the vertex coordinates.
    """
    r = Fraction(radius) * Fraction(1_000_000_000_001, 1_000_000_000_000)
    gap = Fraction(1, n + 1) - 2 * r
    inside = Fraction(1, n + 1) - r >= 0
    return gap >= Fraction(1, 2 * n) and inside


def generate_grid_set(n: int, poly_sides: int = 32) -> GridScene:
    if n < 1:
        raise ValidationError("n must be positive")
    if poly_sides < 16:
        raise ValidationError("poly_sides must be at least 16")
    R0 = 1.0 / (2.0 * PI * n * n)
    # inscribed polygon perimeter 2 m R sin(pi/m), rescaled to n^-2
    R = 1.0 / (n * n * 2.0 * poly_sides * math.sin(PI / poly_sides))
    if n >= 2 and not check_separation(n, R):
        raise ValidationError(f"grid n={n} violates the disk separation bound")
    C = grid_centers(n)
    ang = 2.0 * PI * np.arange(poly_sides + 1) / poly_sides
    ring = np.column_stack([np.cos(ang), np.sin(ang)])
    ring[-1] = ring[0]
    polys = [Polyline(tuple(map(tuple, c + R * ring))) for c in C]
    E = SegmentSet.from_polylines(polys, validate=False)
    return GridScene(n, poly_sides, C, R0, R, E)


# --------------------------------------------------------------------------
# 1-energy of the normalised area measure on the disk union
# --------------------------------------------------------------------------


def disk_self_energy(R: float) -> float:
    """``E |x - y|^-1`` for independent uniform points in a disk of radius ``R``."""
    return 16.0 / (3.0 * PI * R)


def disk_self_energy_quad(R: float) -> float:
    """Radial oracle: integrate the chord length ``rho(r, phi)`` from each point to the circle."""

    def rho(phi, r):
        c = r * math.cos(phi)
        return -c + math.sqrt(c * c - r * r + R * R)

    val, _ = sp_integrate.dblquad(lambda phi, r: 2.0 * PI * r * rho(phi, r), 0.0, R, 0.0, 2.0 * PI, epsabs=1e-12, epsrel=1e-10)
    return val / (PI * R * R) ** 2


def _uniform_disk(rng, m: int, R: float) -> np.ndarray:
    r = R * np.sqrt(rng.uniform(0.0, 1.0, m))
    a = rng.uniform(0.0, 2.0 * PI, m)
    return np.column_stack([r * np.cos(a), r * np.sin(a)])


def _energy_shard(rng, centers: np.ndarray, R: float, m: int) -> tuple[float, float]:
    """Sum and sum of squares of an unbiased per-sample estimator of the energy.

    A pair of disks is drawn uniformly.  Distinct disks contribute
    ``1/|x - y|``.  Equal disks contribute ``2 pi rho / (pi R^2)`` where
    ``rho`` is the distance from a uniform point to the circle along a uniform
    direction: polar coordinates around ``x`` absorb the singularity, which
    keeps the variance finite.
    """
    N = len(centers)
    i = rng.integers(0, N, m)
    j = rng.integers(0, N, m)
    x = _uniform_disk(rng, m, R)
    y = _uniform_disk(rng, m, R)
    phi = rng.uniform(0.0, 2.0 * PI, m)
    same = i == j
    d = centers[j] + y - centers[i] - x
    dist = np.hypot(d[:, 0], d[:, 1])
    c = x[:, 0] * np.cos(phi) + x[:, 1] * np.sin(phi)
    rho = -c + np.sqrt(np.maximum(c * c - (x * x).sum(axis=1) + R * R, 0.0))
    with np.errstate(divide="ignore"):
        v = np.where(same, 2.0 * rho / (R * R), 1.0 / np.where(same, 1.0, dist))
    return math.fsum(v.tolist()), math.fsum((v * v).tolist())


def energy_of_disks(centers, R: float, mc_samples: int, seed: int, shards: int = DEFAULT_SHARDS) -> tuple[float, float]:
    if mc_samples < 100_000:
        raise ValidationError("energy estimate needs at least 10^5 samples")
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    children = np.random.SeedSequence(seed).spawn(shards)
    sizes = [mc_samples // shards + (1 if s < mc_samples % shards else 0) for s in range(shards)]
    sums, sqs = [], []
    for ss, m in zip(children, sizes):
        a, b = _energy_shard(np.random.Generator(np.random.Philox(ss)), centers, R, m)
        sums.append(a)
        sqs.append(b)
    n = mc_samples
    mean = math.fsum(sums) / n
    var = max(math.fsum(sqs) / n - mean * mean, 0.0)
    return mean, math.sqrt(var / (n - 1))


def energy_I1(scene: GridScene, mc_samples: int = 400_000, seed: int = 0, shards: int = DEFAULT_SHARDS) -> tuple[float, float]:
    """Monte Carlo 1-energy of the normalised area measure on the nominal disks."""
    return energy_of_disks(scene.centers, scene.nominal_radius, mc_samples, seed, shards)


def favard_proxy(scene: GridScene, cfg: AnalysisConfig | None = None, mc_samples: int = 400_000) -> tuple[float, float]:
    q = GRID_QUAD if cfg is None else cfg.quad
    fav, _ = favard_length(scene.E, q)
    seed = 0 if cfg is None else cfg.seed
    I1, _ = energy_I1(scene, mc_samples, seed)
    return fav, 1.0 / I1


# --------------------------------------------------------------------------
# Lipschitz graphs against the grid
# --------------------------------------------------------------------------


def _frame(P: np.ndarray, base: float, origin=(0.5, 0.5)) -> tuple[np.ndarray, np.ndarray]:
    c, s = math.cos(base), math.sin(base)
    X = P[:, 0] - origin[0]
    Y = P[:, 1] - origin[1]
    return X * c + Y * s, -X * s + Y * c


def graph_mass(scene: GridScene, base: float, tt: np.ndarray, ff: np.ndarray, delta: float, cloud=None) -> float:
    """Length of ``E_n`` within vertical distance ``delta`` of the graph ``(tt, ff)`` over ``base``."""
    cloud = sample_segment_set(scene.E, delta) if cloud is None else cloud
    t, f = _frame(cloud.points, base)
    g = np.interp(t, tt, ff)
    hit = np.abs(f - g) <= delta
    return math.fsum(cloud.weights[hit].tolist())


def random_lipschitz_graph(rng, M: float, breakpoints: int = 50, half_span: float = 0.75):
    """Piecewise-linear graph with slopes uniform in ``[-M, M]`` through a uniform point of the square."""
    base = rng.uniform(0.0, PI)
    tt = np.linspace(-half_span, half_span, breakpoints + 1)
    slopes = rng.uniform(-M, M, breakpoints)
    ff = np.concatenate([[0.0], np.cumsum(slopes * np.diff(tt))])
    p = rng.uniform(0.0, 1.0, 2)
    t0, f0 = _frame(p[None, :], base)
    ff = ff - np.interp(t0[0], tt, ff) + f0[0]
    return base, tt, ff


def row_hugging_graph(scene: GridScene, M: float, row: int = 0, samples: int = 20001):
    """Horizontal graph riding over the top arcs of one row of circles, as far as slope ``M`` allows."""
    R = scene.radius
    ys = np.unique(scene.centers[:, 1])
    y = ys[row]
    cx = scene.centers[np.isclose(scene.centers[:, 1], y), 0]
    tt = np.linspace(-0.75, 0.75, samples)
    u_star = R * M / math.sqrt(1.0 + M * M)
    h_star = math.sqrt(R * R - u_star * u_star)
    u = np.abs((tt + 0.5)[:, None] - cx[None, :])
    arc = np.sqrt(np.maximum(R * R - np.minimum(u, u_star) ** 2, 0.0))
    g = np.where(u <= u_star, arc, h_star - M * (u - u_star))
    ff = (y - 0.5) + g.max(axis=1)
    return 0.0, tt, ff


def lipschitz_intersection_mass(scene: GridScene, M: float, trials: int, seed: int, breakpoints: int = 50, delta: float | None = None) -> dict:
    """Largest thickened intersection of ``E_n`` with random ``M``-Lipschitz graphs."""
    if M < 1:
        raise ValidationError("M must be at least 1")
    delta = 1.0 / (32.0 * scene.n**2) if delta is None else delta
    cloud = sample_segment_set(scene.E, delta)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    best = 0.0
    for _ in range(trials):
        base, tt, ff = random_lipschitz_graph(rng, M, breakpoints)
        best = max(best, graph_mass(scene, base, tt, ff, delta, cloud))
    row = graph_mass(scene, *row_hugging_graph(scene, M), delta, cloud)
    line_tt = np.array([-0.75, 0.75])
    line_y = scene.centers[0, 1] - 0.5
    line = graph_mass(scene, 0.0, line_tt, np.array([line_y, line_y]), delta, cloud)
    return {"max_random": best, "row_hugging": row, "row_line": line, "delta": delta, "trials": trials}


def sweep_rows(ns, poly_sides: int = 32, mc_samples: int = 400_000, trials: int = 1000, seed: int = 0, M: float = 1.0):
    """Rows ``(n, fav, I1, inv_energy, max_lip_mass)``."""
    rows = []
    for n in ns:
        sc = generate_grid_set(n, poly_sides)
        fav, _ = favard_length(sc.E, GRID_QUAD)
        I1, _ = energy_I1(sc, mc_samples, seed)
        lip = lipschitz_intersection_mass(sc, M, trials, seed)
        rows.append((n, fav, I1, 1.0 / I1, lip["max_random"]))
    return rows
