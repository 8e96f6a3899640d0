"""Independent, deliberately naive reference computations used by the tests."""

import math

import numpy as np


def union_length(intervals):
    """Length of a union of intervals by plain sort and sweep."""
    total = 0.0
    cur_lo = cur_hi = None
    for lo, hi in sorted(intervals):
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


def shadow(E, theta):
    c, s = math.cos(theta), math.sin(theta)
    out = []
    for S in E.segments:
        pa = S.a[0] * c + S.a[1] * s
        pb = S.b[0] * c + S.b[1] * s
        out.append((min(pa, pb), max(pa, pb)))
    return out


def dense_favard(E, m=20000):
    """Midpoint rule over theta with exact per-angle unions."""
    th = (np.arange(m) + 0.5) * math.pi / m
    return math.fsum(union_length(shadow(E, t)) for t in th) * math.pi / m


def dense_defect(E, m=20000):
    th = (np.arange(m) + 0.5) * math.pi / m
    vals = []
    for t in th:
        iv = shadow(E, t)
        vals.append(sum(hi - lo for lo, hi in iv) - union_length(iv))
    return math.fsum(vals) * math.pi / m


def sample_points(E, per_unit=4000):
    pts, wts = [], []
    for S in E.segments:
        k = max(1, int(math.ceil(S.length * per_unit)))
        u = (np.arange(k) + 0.5) / k
        pts.append(np.column_stack([S.a[0] + u * (S.b[0] - S.a[0]), S.a[1] + u * (S.b[1] - S.a[1])]))
        wts.append(np.full(k, S.length / k))
    return np.concatenate(pts), np.concatenate(wts)


def cone_mask(P, x, beta, axis):
    ux, uy = math.cos(axis), math.sin(axis)
    nx, ny = -uy, ux
    d = P - np.asarray(x)
    return np.abs(d[:, 0] * ux + d[:, 1] * uy) >= beta * np.abs(d[:, 0] * nx + d[:, 1] * ny) - 1e-15


def sampled_conical_mass(E, x, beta, r, axis=math.pi / 2, per_unit=20000):
    P, w = sample_points(E, per_unit)
    inside = cone_mask(P, x, beta, axis) & (np.hypot(P[:, 0] - x[0], P[:, 1] - x[1]) <= r)
    return float(w[inside].sum())


def radius_grid_density(mass_fn, rmax, m=400):
    """Max of mass(r)/r over a geometric r-grid."""
    rs = np.geomspace(rmax * 1e-4, rmax, m)
    return max(mass_fn(r) / r for r in rs)


def brute_cone_pairs(P, beta, axis):
    ux, uy = math.cos(axis), math.sin(axis)
    nx, ny = -uy, ux
    pairs = []
    for i in range(len(P)):
        for j in range(i + 1, len(P)):
            dx, dy = P[j, 0] - P[i, 0], P[j, 1] - P[i, 1]
            if (dx or dy) and abs(dx * ux + dy * uy) >= beta * abs(dx * nx + dy * ny):
                pairs.append((i, j))
    return pairs


def line_hits_segment(x, theta, S):
    """Does the line through ``x`` with projection angle ``theta`` meet ``S``."""
    c, s = math.cos(theta), math.sin(theta)
    t = x[0] * c + x[1] * s
    pa = S.a[0] * c + S.a[1] * s - t
    pb = S.b[0] * c + S.b[1] * s - t
    return pa * pb <= 0


def mc_direction_fraction(x, segments, rng, n=100_000, need=1):
    """Fraction of uniform theta whose line through x meets at least ``need`` of the segments."""
    th = rng.uniform(0, math.pi, n)
    c, s = np.cos(th), np.sin(th)
    t = x[0] * c + x[1] * s
    count = np.zeros(n, dtype=int)
    for S in segments:
        pa = S.a[0] * c + S.a[1] * s - t
        pb = S.b[0] * c + S.b[1] * s - t
        count += (pa * pb <= 0).astype(int)
    hit = count >= need
    p = hit.mean()
    return p, math.sqrt(p * (1 - p) / n)


def chop_by_enumeration(angles, alpha, M2):
    """Minigraph count by testing every direction index explicitly."""
    band = math.atan(alpha)
    v = np.arange(M2) * math.pi / M2

    def dist(a, b):
        d = np.abs(a - b) % math.pi
        return np.minimum(d, math.pi - d)

    pieces = 0
    ok = None
    for phi in angles:
        fits = dist(v, phi) <= band + 1e-12
        if ok is None:
            ok = fits
            pieces = 1
            continue
        nxt = ok & fits
        if nxt.any():
            ok = nxt
        else:
            pieces += 1
            ok = fits
    return pieces
