"""Minigraph decomposition, direction buckets and the cover-or-witness dichotomy.

The pipeline chops every polygonal component into minigraphs (runs of edges
that all lie within ``atan(alpha)`` of one direction ``v_k = k pi / M2``),
groups them into ``M3`` coarse buckets around ``w_j = j pi / M3`` and then
either covers a window of consecutive buckets by one Lipschitz graph or
builds a pair of transversal, mutually tube-avoiding pieces whose spanned
lines certify a Favard defect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .config import AnalysisConfig
from .errors import AssumptionViolated, EmptyResult, InsufficientBuckets, WitnessFailed
from .favard import FavardReport, favard_defect, favard_report
from .geometry import PI, AffineLine, IntervalUnion, Polyline, Segment, SegmentSet, Tube, point_segment_distance
from .graphs import GraphCover, cone_condition_check, cover_by_single_graph, max_edge_deviation, minimal_covering_arc
from .line_pairs import pair_line_measure_formula

ANGLE_SLACK = 1e-12


def _line_dist(a: float, b: float) -> float:
    """Distance between two line directions, in ``[0, pi/2]``."""
    d = abs(a - b) % PI
    return min(d, PI - d)


@dataclass(frozen=True)
class Minigraph:
    segment_indices: tuple[int, ...]
    segments: tuple[Segment, ...]
    k: int
    direction: float
    coarse: int
    component: int

    @property
    def length(self) -> float:
        return math.fsum(s.length for s in self.segments)


@dataclass(frozen=True, eq=False)
class MinigraphFamily:
    E: SegmentSet
    alpha: float
    minigraphs: tuple[Minigraph, ...]
    M2: int
    M3: int

    def bucket(self, k: int) -> list[int]:
        return [i for i, g in enumerate(self.minigraphs) if g.k == k]

    def coarse_bucket(self, j: int) -> list[int]:
        return [i for i, g in enumerate(self.minigraphs) if g.coarse == j]

    def coarse_axis(self, j: int) -> float:
        return j * PI / self.M3

    @property
    def masses(self) -> np.ndarray:
        """Length of each coarse bucket ``F_j``."""
        parts = [[] for _ in range(self.M3)]
        for g in self.minigraphs:
            parts[g.coarse].extend(s.length for s in g.segments)
        return np.array([math.fsum(p) for p in parts])

    @property
    def fine_masses(self) -> np.ndarray:
        parts = [[] for _ in range(self.M2)]
        for g in self.minigraphs:
            parts[g.k].extend(s.length for s in g.segments)
        return np.array([math.fsum(p) for p in parts])

    def segment_indices(self, coarse_buckets) -> list[int]:
        want = set(int(j) % self.M3 for j in coarse_buckets)
        return sorted(i for g in self.minigraphs if g.coarse in want for i in g.segment_indices)


def _admissible_k(lo: float, hi: float, band: float, M2: int) -> list[int]:
    """Indices ``k`` with ``k pi / M2`` within ``band`` of every angle in ``[lo, hi]``."""
    step = PI / M2
    first = math.ceil((hi - band - ANGLE_SLACK) / step)
    last = math.floor((lo + band + ANGLE_SLACK) / step)
    return list(range(first, last + 1))


def _unwrap_near(phi: float, ref: float) -> float:
    return ref + ((phi - ref + PI / 2) % PI) - PI / 2


def _chop_component(segs, idx, alpha: float, M2: int):
    """Greedy chopping of a chain of edges; yields ``(edge positions, k)``."""
    band = math.atan(alpha)
    start = 0
    lo = hi = segs[0].direction_angle
    ks = _admissible_k(lo, hi, band, M2)
    pieces = []
    for pos in range(1, len(segs)):
        phi = _unwrap_near(segs[pos].direction_angle, 0.5 * (lo + hi))
        nlo, nhi = min(lo, phi), max(hi, phi)
        nks = _admissible_k(nlo, nhi, band, M2)
        if nks:
            lo, hi, ks = nlo, nhi, nks
            continue
        pieces.append((start, pos, lo, hi, ks))
        start = pos
        lo = hi = segs[pos].direction_angle
        ks = _admissible_k(lo, hi, band, M2)
    pieces.append((start, len(segs), lo, hi, ks))
    out = []
    for a, b, lo, hi, ks in pieces:
        mid = 0.5 * (lo + hi)
        k = min(ks, key=lambda j: (abs(j * PI / M2 - mid), j))
        out.append((list(range(a, b)), k % M2))
    return out


def minigraph_decompose(curves, alpha: float, kappa: float = 0.1, M3: int | None = None) -> MinigraphFamily:
    """Chop each component into minigraphs and assign fine and coarse buckets.

    ``curves`` is a SegmentSet (components are chains of edges in order) or a
    list of Polylines.
    """
    if isinstance(curves, SegmentSet):
        E = curves
    else:
        E = SegmentSet.from_polylines([c if isinstance(c, Polyline) else Polyline(tuple(c)) for c in curves])
    if not alpha > 0:
        raise AssumptionViolated("alpha must be positive")
    M2 = int(math.ceil(PI / (2.0 * math.atan(alpha))))
    M3 = int(math.ceil(PI / alpha**kappa)) if M3 is None else int(M3)
    graphs = []
    for c, comp in enumerate(E.components):
        segs = [E.segments[i] for i in comp]
        for positions, k in _chop_component(segs, comp, alpha, M2):
            j = int(round(k * M3 / M2)) % M3
            graphs.append(
                Minigraph(
                    segment_indices=tuple(comp[p] for p in positions),
                    segments=tuple(segs[p] for p in positions),
                    k=k,
                    direction=k * PI / M2,
                    coarse=j,
                    component=c,
                )
            )
    return MinigraphFamily(E, alpha, tuple(graphs), M2, M3)


# --------------------------------------------------------------------------
# Case split
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Case1:
    window_start: int
    buckets: tuple[int, ...]
    complement_mass: float

    tag = "case1"


@dataclass(frozen=True)
class Case2:
    k: int
    l: int
    mass_k: float
    mass_l: float
    heavy_pair: bool

    tag = "case2"


def circular_distance(k: int, l: int, M: int) -> int:
    d = abs(k - l) % M
    return min(d, M - d)


def case_split(fam: MinigraphFamily, eps: float, cfg: AnalysisConfig) -> Case1 | Case2:
    M3, C = fam.M3, int(cfg.C_sep)
    if M3 < 2 * C:
        raise InsufficientBuckets(f"M3={M3} coarse buckets cannot hold two buckets {C} apart (need M3 >= {2 * C})")
    m = fam.masses
    total = math.fsum(m.tolist())
    for k in range(M3):
        window = tuple((k + i) % M3 for i in range(C + 1))
        comp = total - math.fsum(m[list(window)].tolist())
        if comp <= eps:
            return Case1(k, window, max(comp, 0.0))
    best = None
    for k in range(M3):
        for l in range(k + 1, M3):
            if circular_distance(k, l, M3) < C:
                continue
            score = min(m[k], m[l])
            if best is None or score > best[0]:
                best = (score, k, l)
    _, k, l = best
    floor = fam.alpha ** (2 * cfg.kappa)
    return Case2(k, l, float(m[k]), float(m[l]), bool(min(m[k], m[l]) >= floor))


# --------------------------------------------------------------------------
# Case 1: one graph over the window
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Case1Cover:
    cover: GraphCover
    base_angle: float
    alpha_window: float
    covered_mass: float
    uncovered_mass: float
    slack: float
    pieces: int


def cover_window(fam: MinigraphFamily, case: Case1, eps: float, cfg: AnalysisConfig) -> Case1Cover | None:
    idx = fam.segment_indices(case.buckets)
    if not idx:
        return None
    F = fam.E.subset(idx)
    dirs = IntervalUnion.from_intervals([(s.direction_angle, s.direction_angle) for s in F.segments], "angle")
    arc, base = minimal_covering_arc(dirs)
    alpha_w = max(math.tan(0.5 * arc) * (1 + 1e-12), fam.alpha)
    step = cfg.step_for(F.h1)
    cover = cover_by_single_graph(F, alpha_w, eps, base, cfg, step)
    covered = cover.covered_mass
    pieces = sum(1 for g in fam.minigraphs if g.coarse in set(case.buckets))
    return Case1Cover(
        cover=cover,
        base_angle=base,
        alpha_window=alpha_w,
        covered_mass=covered,
        uncovered_mass=max(fam.E.h1 - covered, 0.0),
        slack=2.0 * step * pieces,
        pieces=pieces,
    )


# --------------------------------------------------------------------------
# Case 2: the witness
# --------------------------------------------------------------------------


def disk_lengths(C: np.ndarray, A: np.ndarray, B: np.ndarray, r: float, chunk: int = 4096) -> np.ndarray:
    """``L[i, s]`` = length of segment ``s`` inside the closed disk ``B(C_i, r)``."""
    C = np.asarray(C, dtype=float).reshape(-1, 2)
    D = B - A
    a = (D * D).sum(axis=1)
    L = np.sqrt(a)
    out = np.empty((len(C), len(A)))
    for i0 in range(0, len(C), chunk):
        P = A[None, :, :] - C[i0 : i0 + chunk, None, :]
        b = (P * D[None, :, :]).sum(axis=2)
        c = (P * P).sum(axis=2) - r * r
        disc = b * b - a[None, :] * c
        sq = np.sqrt(np.maximum(disc, 0.0))
        lo = np.maximum(0.0, (-b - sq) / a[None, :])
        hi = np.minimum(1.0, (-b + sq) / a[None, :])
        out[i0 : i0 + chunk] = np.where(disc > 0, np.maximum(hi - lo, 0.0), 0.0) * L[None, :]
    return out


def clip_to_disk(S: Segment, center, r: float) -> Segment | None:
    ax, ay = S.a[0] - center[0], S.a[1] - center[1]
    dx, dy = S.b[0] - S.a[0], S.b[1] - S.a[1]
    a = dx * dx + dy * dy
    b = ax * dx + ay * dy
    c = ax * ax + ay * ay - r * r
    disc = b * b - a * c
    if disc <= 0:
        return None
    sq = math.sqrt(disc)
    lo, hi = max(0.0, (-b - sq) / a), min(1.0, (-b + sq) / a)
    if (hi - lo) * S.length <= 1e-15:
        return None
    return Segment((S.a[0] + lo * dx, S.a[1] + lo * dy), (S.a[0] + hi * dx, S.a[1] + hi * dy))


def greedy_heavy_centers(points: np.ndarray, masses: np.ndarray, count: int, sep: float, threshold: float) -> list[int]:
    """Heaviest admissible centers, pairwise at distance ``>= sep``.

    Masses are compared after rounding to 12 decimals so that equal-mass
    balls (the interior of a straight piece) fall back to arclength order
    instead of summation noise.
    """
    key = np.round(masses, 12)
    order = sorted(np.nonzero(masses >= threshold)[0].tolist(), key=lambda i: (-key[i], i))
    chosen: list[int] = []
    for i in order:
        if all(math.hypot(*(points[i] - points[j])) >= sep for j in chosen):
            chosen.append(i)
            if len(chosen) == count:
                break
    return chosen


@dataclass(frozen=True, eq=False)
class WitnessSide:
    """Balls, dominant minigraphs, lines and tubes on one of the two buckets."""

    bucket: int
    cover: GraphCover
    centers: np.ndarray
    ball_masses: np.ndarray
    graphs: tuple[int, ...]
    graph_segments: tuple[tuple[int, ...], ...]
    graph_masses: np.ndarray
    pieces: tuple[tuple[Segment, ...], ...]
    lines: tuple[AffineLine, ...]
    inner: tuple[Tube, ...]
    outer: tuple[Tube, ...]


@dataclass(frozen=True, eq=False)
class Witness:
    k: int
    l: int
    i0: int
    j0: int
    side_k: WitnessSide
    side_l: WitnessSide
    incidence_kl: np.ndarray
    incidence_lk: np.ndarray
    separation_checked: bool
    alpha: float
    eta_lower: float | None = None

    @property
    def G_k(self) -> tuple[Segment, ...]:
        return self.side_k.pieces[self.i0]

    @property
    def G_l(self) -> tuple[Segment, ...]:
        return self.side_l.pieces[self.j0]

    @property
    def line_k(self) -> AffineLine:
        return self.side_k.lines[self.i0]

    @property
    def line_l(self) -> AffineLine:
        return self.side_l.lines[self.j0]

    @property
    def T_k(self) -> Tube:
        return self.side_k.outer[self.i0]

    @property
    def T_l(self) -> Tube:
        return self.side_l.outer[self.j0]

    @property
    def mass_k(self) -> float:
        return math.fsum(s.length for s in self.G_k)

    @property
    def mass_l(self) -> float:
        return math.fsum(s.length for s in self.G_l)

    def summary(self) -> dict:
        def line(L):
            return {"theta": L.theta, "t": L.t}

        return {
            "k": self.k,
            "l": self.l,
            "i0": self.i0,
            "j0": self.j0,
            "x_centers": self.side_k.centers.tolist(),
            "y_centers": self.side_l.centers.tolist(),
            "mass_G_k": self.mass_k,
            "mass_G_l": self.mass_l,
            "line_k": line(self.line_k),
            "line_l": line(self.line_l),
            "inner_halfwidth": self.side_k.inner[self.i0].halfwidth,
            "outer_halfwidth": self.T_k.halfwidth,
            "incidence_kl": self.incidence_kl.astype(int).tolist(),
            "incidence_lk": self.incidence_lk.astype(int).tolist(),
            "separation_checked": self.separation_checked,
            "eta_lower": self.eta_lower,
        }


def _bucket_cover(fam: MinigraphFamily, j: int, cfg: AnalysisConfig):
    idx = fam.segment_indices([j])
    F = fam.E.subset(idx)
    axis = fam.coarse_axis(j)
    a_k = fam.alpha ** cfg.kappa
    a_eff = max(a_k, math.tan(max_edge_deviation(F, axis)) * (1 + 1e-12))
    eps_b = 0.5 * fam.alpha ** (2 * cfg.kappa)
    try:
        cover = cover_by_single_graph(F, a_eff, eps_b, axis, cfg, cfg.step_for(F.h1))
    except EmptyResult as exc:
        raise WitnessFailed("cover", f"bucket {j}: {exc}") from exc
    return F, idx, cover


def _build_side(fam: MinigraphFamily, j: int, count: int, cfg: AnalysisConfig, tag: str) -> WitnessSide:
    alpha = fam.alpha
    F, idx, cover = _bucket_cover(fam, j, cfg)
    A, B = F.endpoint_arrays()
    pts = cover.graph_points.points
    L = disk_lengths(pts, A, B, alpha)
    ball = np.array([math.fsum(row) for row in L.tolist()])
    sep = alpha ** (2 * cfg.kappa) / cfg.witness_C
    chosen = greedy_heavy_centers(pts, ball, count, sep, cfg.mass_multiplier * alpha**2)
    if len(chosen) < count:
        raise WitnessFailed(tag, f"bucket {j}: found {len(chosen)} of {count} heavy separated balls")
    pos = {s: p for p, s in enumerate(idx)}
    members = [g for g, mg in enumerate(fam.minigraphs) if mg.coarse == j]
    graphs, gmass, pieces, lines, inner, outer = [], [], [], [], [], []
    for c in chosen:
        per = [math.fsum(L[c, pos[s]] for s in fam.minigraphs[g].segment_indices) for g in members]
        best = max(range(len(members)), key=lambda q: (per[q], -q))
        g = members[best]
        if per[best] < cfg.mass_multiplier * alpha**3:
            raise WitnessFailed("dominant_graph", f"bucket {j}: dominant minigraph carries {per[best]:.3g} < {cfg.mass_multiplier * alpha**3:.3g}")
        mg = fam.minigraphs[g]
        segs = tuple(p for p in (clip_to_disk(S, pts[c], alpha) for S in mg.segments) if p is not None)
        w = np.array([s.length for s in segs])
        mids = np.array([[(s.a[0] + s.b[0]) / 2, (s.a[1] + s.b[1]) / 2] for s in segs])
        centroid = (w[:, None] * mids).sum(axis=0) / w.sum()
        line = AffineLine.through(centroid, mg.direction + PI / 2)
        if _line_dist(mg.direction, fam.coarse_axis(j)) > alpha**cfg.kappa + ANGLE_SLACK:
            raise WitnessFailed("angle", f"line direction {mg.direction:.6g} leaves the bucket axis by more than alpha^kappa")
        graphs.append(g)
        gmass.append(per[best])
        pieces.append(segs)
        lines.append(line)
        inner.append(Tube(line, cfg.witness_C * alpha))
        outer.append(Tube(line, math.sqrt(alpha)))
    return WitnessSide(
        bucket=j,
        cover=cover,
        centers=pts[chosen].copy(),
        ball_masses=ball[chosen].copy(),
        graphs=tuple(graphs),
        graph_segments=tuple(fam.minigraphs[g].segment_indices for g in graphs),
        graph_masses=np.array(gmass),
        pieces=tuple(pieces),
        lines=tuple(lines),
        inner=tuple(inner),
        outer=tuple(outer),
    )


def _crossing_diameter(line: AffineLine, other: WitnessSide, halfwidth: float) -> float:
    """Diameter bound for the part of the other side's graph inside a strip around ``line``."""
    direction = line.theta - PI / 2
    lip = other.cover.lipschitz_constant
    ang = _line_dist(direction, other.cover.base_line_angle) - math.atan(lip)
    if ang <= 0:
        return math.inf
    return 2.0 * halfwidth / math.sin(ang)


def _min_pairwise(P: np.ndarray) -> float:
    d = [math.hypot(*(P[i] - P[j])) for i in range(len(P)) for j in range(i + 1, len(P))]
    return min(d) if d else math.inf


def verify_membership(w: Witness, E: SegmentSet, samples: int = 33, tol: float = 1e-9) -> None:
    """Point-by-point membership of ``G_k`` in ``(E cap gamma_k) minus T_l`` and symmetrically."""
    checks = (
        ("k", w.G_k, w.side_k, w.i0, w.T_l),
        ("l", w.G_l, w.side_l, w.j0, w.T_k),
    )
    for name, G, side, i, T in checks:
        gamma = [E.segments[s] for s in side.graph_segments[i]]
        for S in G:
            for u in np.linspace(0.0, S.length, samples):
                p = S.point_at(float(u))
                if min(point_segment_distance(p, Q) for Q in gamma) > tol:
                    raise WitnessFailed("membership", f"G_{name} point {p} is off its minigraph")
                if T.contains([p])[0]:
                    raise WitnessFailed("membership", f"G_{name} point {p} lies in the opposite tube")
                if not side.inner[i].contains([p])[0]:
                    raise WitnessFailed("inner_tube", f"G_{name} point {p} leaves its inner tube")


def build_witness(fam: MinigraphFamily, E: SegmentSet, k: int, l: int, cfg: AnalysisConfig) -> Witness:
    alpha = fam.alpha
    floor = alpha ** (2 * cfg.kappa)
    m = fam.masses
    if circular_distance(k, l, fam.M3) < cfg.C_sep:
        raise WitnessFailed("bucket_mass", f"buckets {k} and {l} are closer than C_sep={cfg.C_sep}")
    if min(m[k], m[l]) < floor:
        raise WitnessFailed("bucket_mass", f"bucket masses {m[k]:.6g}, {m[l]:.6g} below alpha^(2 kappa)={floor:.6g}")
    side_k = _build_side(fam, k, 2, cfg, "heavy_balls_k")
    side_l = _build_side(fam, l, 3, cfg, "heavy_balls_l")
    h = math.sqrt(alpha) + alpha
    inc_kl = np.array([[abs(side_k.lines[i].signed_distance(side_l.centers[j])[0]) <= h for j in range(3)] for i in range(2)])
    inc_lk = np.array([[abs(side_l.lines[j].signed_distance(side_k.centers[i])[0]) <= h for i in range(2)] for j in range(3)])
    checked = False
    D_kl = max(_crossing_diameter(L, side_l, h) for L in side_k.lines)
    D_lk = max(_crossing_diameter(L, side_k, h) for L in side_l.lines)
    if D_kl < _min_pairwise(side_l.centers) and D_lk < _min_pairwise(side_k.centers):
        checked = True
        if (inc_kl.sum(axis=1) > 1).any():
            raise WitnessFailed("row_unique", f"a tube around a line of bucket {k} meets two balls of bucket {l}")
        if (inc_lk.sum(axis=1) > 1).any():
            raise WitnessFailed("col_unique", f"a tube around a line of bucket {l} meets two balls of bucket {k}")
    pair = next(((i, j) for i in range(2) for j in range(3) if not inc_kl[i, j] and not inc_lk[j, i]), None)
    if pair is None:
        raise WitnessFailed("zero_pair", "every ball pair is incident to the other side's tube")
    i0, j0 = pair
    w = Witness(k, l, i0, j0, side_k, side_l, inc_kl, inc_lk, checked, alpha)
    floor_g = alpha**3 / cfg.witness_C
    if w.mass_k < floor_g or w.mass_l < floor_g:
        raise WitnessFailed("dominant_graph", f"witness masses {w.mass_k:.3g}, {w.mass_l:.3g} below alpha^3/C={floor_g:.3g}")
    verify_membership(w, E)
    return w


def defect_certificate(w: Witness, cfg: AnalysisConfig) -> float:
    """Line measure spanned by ``G_k`` and ``G_l``; bounded above by the defect of ``E``."""
    return pair_line_measure_formula(list(w.G_k), list(w.G_l), cfg.tol_pair, cfg.geom_eps)


# --------------------------------------------------------------------------
# Orchestration
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    eps: float
    alpha: float
    M2: int
    M3: int
    bucket_masses: np.ndarray
    case: Case1 | Case2
    favard: FavardReport
    defect_measured: float
    cover: Case1Cover | None = None
    witness: Witness | None = None
    certificate: float | None = None
    cfg: AnalysisConfig = field(default_factory=AnalysisConfig)

    @property
    def outcome(self) -> str:
        return "cover" if isinstance(self.case, Case1) else "witness"

    def to_dict(self) -> dict:
        d = {
            "schema_version": "1",
            "outcome": self.outcome,
            "eps": self.eps,
            "alpha": self.alpha,
            "implied_eps": self.cfg.implied_eps(self.alpha),
            "M2": self.M2,
            "M3": self.M3,
            "bucket_masses": self.bucket_masses.tolist(),
            "favard": self.favard.to_dict(),
            "defect_measured": self.defect_measured,
            "config": self.cfg.to_dict(),
        }
        if isinstance(self.case, Case1):
            d["case"] = {
                "tag": "case1",
                "window_start": self.case.window_start,
                "buckets": list(self.case.buckets),
                "complement_mass": self.case.complement_mass,
            }
            if self.cover is not None:
                c = self.cover
                d["cover"] = {
                    "base_angle": c.base_angle,
                    "alpha_window": c.alpha_window,
                    "lipschitz_constant": c.cover.lipschitz_constant,
                    "covered_mass": c.covered_mass,
                    "uncovered_mass": c.uncovered_mass,
                    "removed_mass": c.cover.removed_mass,
                    "high_density_mass": c.cover.high_density_mass,
                    "slack": c.slack,
                    "pieces": c.pieces,
                }
            else:
                d["cover"] = {"covered_mass": 0.0, "uncovered_mass": 0.0}
        else:
            d["case"] = {
                "tag": "case2",
                "k": self.case.k,
                "l": self.case.l,
                "mass_k": self.case.mass_k,
                "mass_l": self.case.mass_l,
                "heavy_pair": self.case.heavy_pair,
            }
            d["witness"] = self.witness.summary()
            d["certificate"] = self.certificate
        return d


def analyze(E: SegmentSet, eps: float, cfg: AnalysisConfig) -> AnalysisReport:
    alpha = cfg.effective_alpha(eps)
    fam = minigraph_decompose(E, alpha, cfg.kappa, cfg.M3)
    case = case_split(fam, eps, cfg)
    fav = favard_report(E, cfg.quad)
    defect = favard_defect(E, cfg.quad)
    common = dict(
        eps=eps,
        alpha=alpha,
        M2=fam.M2,
        M3=fam.M3,
        bucket_masses=fam.masses,
        case=case,
        favard=fav,
        defect_measured=defect,
        cfg=cfg,
    )
    if isinstance(case, Case1):
        return AnalysisReport(cover=cover_window(fam, case, eps, cfg), **common)
    w = build_witness(fam, E, case.k, case.l, cfg)
    cert = defect_certificate(w, cfg)
    return AnalysisReport(witness=replace(w, eta_lower=cert), certificate=cert, **common)


def case1_cover_is_graph(c: Case1Cover) -> bool:
    ok, _ = cone_condition_check(c.cover.graph_points, c.cover.lipschitz_constant, c.cover.base_line_angle + PI / 2)
    return ok
