"""Hot loops, each in a numba and a numpy flavour.

The public names (``projection_profile``, ``max_conical_density_batch``,
``cone_partners``, ``pair_hits``) dispatch to the numba versions when the
backend allows it.  Both flavours compute every output element
independently, so results do not depend on the thread count.
"""

from __future__ import annotations

import math

import numpy as np

from ._backend import HAS_NUMBA, njit, prange

GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)
ON_SEGMENT_TOL = 1e-12


# --------------------------------------------------------------------------
# Projection profile: union length of projected components and width sum
# --------------------------------------------------------------------------


@njit(parallel=True, cache=True)
def _projection_profile_nb(thetas, vx, vy, ptr, sdx, sdy):
    m = thetas.shape[0]
    nc = ptr.shape[0] - 1
    ns = sdx.shape[0]
    union = np.zeros(m)
    widths = np.zeros(m)
    for q in prange(m):
        c = math.cos(thetas[q])
        s = math.sin(thetas[q])
        if nc > 0:
            lo = np.empty(nc)
            hi = np.empty(nc)
            for k in range(nc):
                mn = np.inf
                mx = -np.inf
                for v in range(ptr[k], ptr[k + 1]):
                    p = vx[v] * c + vy[v] * s
                    if p < mn:
                        mn = p
                    if p > mx:
                        mx = p
                lo[k] = mn
                hi[k] = mx
            order = np.argsort(lo, kind="mergesort")
            run = -np.inf
            tot = 0.0
            for j in range(nc):
                a = lo[order[j]]
                b = hi[order[j]]
                start = a if a > run else run
                if b > start:
                    tot += b - start
                if b > run:
                    run = b
            union[q] = tot
        w = 0.0
        for j in range(ns):
            w += abs(sdx[j] * c + sdy[j] * s)
        widths[q] = w
    return union, widths


def _projection_profile_np(thetas, vx, vy, ptr, sdx, sdy, chunk_elems=2_000_000):
    m = thetas.shape[0]
    nc = ptr.shape[0] - 1
    union = np.zeros(m)
    widths = np.zeros(m)
    if m == 0:
        return union, widths
    step = max(1, chunk_elems // max(1, vx.shape[0] + sdx.shape[0]))
    starts = ptr[:-1]
    for q0 in range(0, m, step):
        th = thetas[q0 : q0 + step]
        c = np.cos(th)[:, None]
        s = np.sin(th)[:, None]
        if nc > 0:
            P = vx[None, :] * c + vy[None, :] * s
            lo = np.minimum.reduceat(P, starts, axis=1)
            hi = np.maximum.reduceat(P, starts, axis=1)
            order = np.argsort(lo, axis=1, kind="stable")
            lo = np.take_along_axis(lo, order, axis=1)
            hi = np.take_along_axis(hi, order, axis=1)
            run = np.maximum.accumulate(hi, axis=1)
            prev = np.concatenate([np.full((len(th), 1), -np.inf), run[:, :-1]], axis=1)
            contrib = np.maximum(0.0, hi - np.maximum(lo, prev))
            union[q0 : q0 + step] = contrib.sum(axis=1)
        if sdx.shape[0]:
            widths[q0 : q0 + step] = np.abs(sdx[None, :] * c + sdy[None, :] * s).sum(axis=1)
    return union, widths


# --------------------------------------------------------------------------
# Maximal conical density
# --------------------------------------------------------------------------
# A cone-clipped piece of a segment is stored as (d, lo, hi): the distance d
# from the apex to the segment's line and the piece's extent along the line,
# measured from the foot of the perpendicular.  Its length inside B(x, r) is
# max(0, min(hi, s) - max(lo, -s)) with s = sqrt(r^2 - d^2).


@njit(cache=True)
def _clip_pieces_nb(x0, x1, A, B, beta, ux, uy, nx, ny, out):
    m = 0
    for i in range(A.shape[0]):
        ax = A[i, 0] - x0
        ay = A[i, 1] - x1
        bx = B[i, 0] - x0
        by = B[i, 1] - x1
        dx = bx - ax
        dy = by - ay
        L = math.sqrt(dx * dx + dy * dy)
        tx = dx / L
        ty = dy / L
        sa = ax * tx + ay * ty
        d = abs(tx * ay - ty * ax)
        if d <= ON_SEGMENT_TOL and sa <= ON_SEGMENT_TOL and sa + L >= -ON_SEGMENT_TOL:
            # apex on the segment: all of it or nothing lies in the cone
            if abs(tx * ux + ty * uy) >= beta * abs(tx * nx + ty * ny):
                out[m, 0] = 0.0
                out[m, 1] = sa
                out[m, 2] = sa + L
                m += 1
            continue
        pau = ax * ux + ay * uy
        pan = ax * nx + ay * ny
        pbu = bx * ux + by * uy
        pbn = bx * nx + by * ny
        for half in range(2):
            sg = 1.0 - 2.0 * half
            t0 = 0.0
            t1 = 1.0
            empty = False
            for side in range(2):
                k = 1.0 - 2.0 * side
                g0 = sg * pau + k * beta * pan
                g1 = sg * pbu + k * beta * pbn
                if g0 < 0.0 and g1 < 0.0:
                    empty = True
                elif g0 < 0.0:
                    tc = g0 / (g0 - g1)
                    if tc > t0:
                        t0 = tc
                elif g1 < 0.0:
                    tc = g0 / (g0 - g1)
                    if tc < t1:
                        t1 = tc
            if not empty and t1 > t0:
                out[m, 0] = d
                out[m, 1] = sa + t0 * L
                out[m, 2] = sa + t1 * L
                m += 1
    return m


@njit(cache=True)
def _mass_nb(P, m, r):
    tot = 0.0
    for k in range(m):
        d = P[k, 0]
        if r < d:
            continue
        s = math.sqrt(max(r * r - d * d, 0.0))
        hi = P[k, 2] if P[k, 2] < s else s
        lo = P[k, 1] if P[k, 1] > -s else -s
        if hi > lo:
            tot += hi - lo
    return tot


@njit(cache=True)
def _theta_star_nb(P, m, tol):
    crit = np.empty(3 * m)
    nk = 0
    for k in range(m):
        d = P[k, 0]
        for e in (P[k, 1], P[k, 2]):
            r = math.sqrt(d * d + e * e)
            if r > 0.0:
                crit[nk] = r
                nk += 1
        if P[k, 1] < 0.0 < P[k, 2] and d > 0.0:
            crit[nk] = d
            nk += 1
    if nk == 0:
        return 0.0, 0.0
    crit = np.sort(crit[:nk])
    best = 0.0
    rbest = 0.0
    for i in range(nk):
        f = _mass_nb(P, m, crit[i]) / crit[i]
        if f > best:
            best = f
            rbest = crit[i]
    for i in range(nk):
        b = crit[i]
        a = crit[i - 1] if i > 0 else crit[0] * 1e-6
        if b - a <= tol * b:
            continue
        if _mass_nb(P, m, b) / a <= best:
            continue
        c = b - GOLDEN * (b - a)
        e = a + GOLDEN * (b - a)
        fc = _mass_nb(P, m, c) / c
        fe = _mass_nb(P, m, e) / e
        while b - a > tol * b:
            if fc >= fe:
                b = e
                e = c
                fe = fc
                c = b - GOLDEN * (b - a)
                fc = _mass_nb(P, m, c) / c
            else:
                a = c
                c = e
                fc = fe
                e = a + GOLDEN * (b - a)
                fe = _mass_nb(P, m, e) / e
        if fc > best:
            best = fc
            rbest = c
        if fe > best:
            best = fe
            rbest = e
    return best, rbest


@njit(parallel=True, cache=True)
def _max_conical_density_batch_nb(X, A, B, beta, ux, uy, nx, ny, tol):
    n = X.shape[0]
    dens = np.zeros(n)
    rad = np.zeros(n)
    for i in prange(n):
        P = np.empty((2 * A.shape[0], 3))
        m = _clip_pieces_nb(X[i, 0], X[i, 1], A, B, beta, ux, uy, nx, ny, P)
        d, r = _theta_star_nb(P, m, tol)
        dens[i] = d
        rad[i] = r
    return dens, rad


def _clip_pieces_np(X, A, B, beta, ux, uy, nx, ny):
    """Pieces for every (point, segment, half-cone); invalid pieces get d = inf."""
    a = A[None, :, :] - X[:, None, :]
    b = B[None, :, :] - X[:, None, :]
    D = B - A
    L = np.hypot(D[:, 0], D[:, 1])
    T = D / L[:, None]
    sa = a[..., 0] * T[None, :, 0] + a[..., 1] * T[None, :, 1]
    d = np.abs(T[None, :, 0] * a[..., 1] - T[None, :, 1] * a[..., 0])
    pau = a[..., 0] * ux + a[..., 1] * uy
    pan = a[..., 0] * nx + a[..., 1] * ny
    pbu = b[..., 0] * ux + b[..., 1] * uy
    pbn = b[..., 0] * nx + b[..., 1] * ny
    on_seg = (d <= ON_SEGMENT_TOL) & (sa <= ON_SEGMENT_TOL) & (sa + L[None, :] >= -ON_SEGMENT_TOL)
    pieces = []
    for sg in (1.0, -1.0):
        t0 = np.zeros_like(sa)
        t1 = np.ones_like(sa)
        empty = np.zeros(sa.shape, dtype=bool)
        for k in (1.0, -1.0):
            g0 = sg * pau + k * beta * pan
            g1 = sg * pbu + k * beta * pbn
            empty |= (g0 < 0.0) & (g1 < 0.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                tc = g0 / (g0 - g1)
            t0 = np.where((g0 < 0.0) & (g1 >= 0.0), np.maximum(t0, tc), t0)
            t1 = np.where((g0 >= 0.0) & (g1 < 0.0), np.minimum(t1, tc), t1)
        ok = ~empty & (t1 > t0) & ~on_seg
        lo = np.where(ok, sa + t0 * L[None, :], 0.0)
        hi = np.where(ok, sa + t1 * L[None, :], 0.0)
        pieces.append(np.stack([np.where(ok, d, np.inf), lo, hi], axis=-1))
    radial = on_seg & (np.abs(T[:, 0] * ux + T[:, 1] * uy) >= beta * np.abs(T[:, 0] * nx + T[:, 1] * ny))[None, :]
    pieces.append(
        np.stack(
            [np.where(radial, 0.0, np.inf), np.where(radial, sa, 0.0), np.where(radial, sa + L[None, :], 0.0)],
            axis=-1,
        )
    )
    return np.concatenate(pieces, axis=1)


def _mass_np(P, r, budget=1 << 22):
    """P: (n, m, 3) pieces; r: (n, k) radii -> (n, k) masses, in blocks of radii."""
    n, m = P.shape[0], P.shape[1]
    step = max(1, budget // max(1, n * m))
    out = np.empty(r.shape)
    d = P[:, None, :, 0]
    for j in range(0, r.shape[1], step):
        rr = r[:, j : j + step, None]
        s = np.sqrt(np.maximum(rr * rr - d * d, 0.0))
        hi = np.minimum(P[:, None, :, 2], s)
        lo = np.maximum(P[:, None, :, 1], -s)
        inside = (rr >= d) & (hi > lo)
        out[:, j : j + step] = np.where(inside, hi - lo, 0.0).sum(axis=-1)
    return out


def _max_conical_density_batch_np(X, A, B, beta, ux, uy, nx, ny, tol, chunk=32):
    n = X.shape[0]
    dens = np.zeros(n)
    rad = np.zeros(n)
    if n == 0 or A.shape[0] == 0:
        return dens, rad
    iters = int(math.ceil(math.log(tol) / math.log(GOLDEN))) + 1
    for i0 in range(0, n, chunk):
        P = _clip_pieces_np(X[i0 : i0 + chunk], A, B, beta, ux, uy, nx, ny)
        P = P[:, np.isfinite(P[..., 0]).any(axis=0)]
        if P.shape[1] == 0:
            continue
        d, lo, hi = P[..., 0], P[..., 1], P[..., 2]
        valid = np.isfinite(d)
        c1 = np.where(valid, np.sqrt(np.where(valid, d, 0) ** 2 + lo**2), np.nan)
        c2 = np.where(valid, np.sqrt(np.where(valid, d, 0) ** 2 + hi**2), np.nan)
        c3 = np.where(valid & (lo < 0) & (hi > 0) & (d > 0), d, np.nan)
        crit = np.concatenate([c1, c2, c3], axis=1)
        crit = np.where(crit > 0, crit, np.nan)
        crit = np.sort(crit, axis=1)
        crit = crit[:, : max(1, int(np.isfinite(crit).sum(axis=1).max()))]
        has = np.isfinite(crit)
        cr = np.where(has, crit, 1.0)
        f_crit = np.where(has, _mass_np(P, cr) / cr, -np.inf)
        # brackets [crit[i-1], crit[i]] with a tiny left end for the first
        a = np.concatenate([cr[:, :1] * 1e-6, cr[:, :-1]], axis=1)
        b = cr.copy()
        c = b - GOLDEN * (b - a)
        e = a + GOLDEN * (b - a)
        fc = _mass_np(P, c) / c
        fe = _mass_np(P, e) / e
        for _ in range(iters):
            left = fc >= fe
            b2 = np.where(left, e, b)
            a2 = np.where(left, a, c)
            new = np.where(left, b2 - GOLDEN * (b2 - a2), a2 + GOLDEN * (b2 - a2))
            fnew = _mass_np(P, new) / new
            c, e, fc, fe = (
                np.where(left, new, e),
                np.where(left, c, new),
                np.where(left, fnew, fe),
                np.where(left, fc, fnew),
            )
            a, b = a2, b2
        f_in = np.where(has, np.maximum(fc, fe), -np.inf)
        r_in = np.where(fc >= fe, c, e)
        allf = np.concatenate([f_crit, f_in], axis=1)
        allr = np.concatenate([cr, r_in], axis=1)
        j = np.argmax(allf, axis=1)
        best = allf[np.arange(len(j)), j]
        rb = allr[np.arange(len(j)), j]
        ok = np.isfinite(best) & (best > 0)
        dens[i0 : i0 + chunk] = np.where(ok, best, 0.0)
        rad[i0 : i0 + chunk] = np.where(ok, rb, 0.0)
    return dens, rad


# --------------------------------------------------------------------------
# Cone partners: does another point lie in the (closed) cone at x?
# --------------------------------------------------------------------------


@njit(parallel=True, cache=True)
def _cone_partners_nb(X, beta, ux, uy, nx, ny):
    n = X.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    for i in prange(n):
        for j in range(n):
            dx = X[j, 0] - X[i, 0]
            dy = X[j, 1] - X[i, 1]
            if dx == 0.0 and dy == 0.0:
                continue
            if abs(dx * ux + dy * uy) >= beta * abs(dx * nx + dy * ny):
                out[i] = True
                break
    return out


def _cone_partners_np(X, beta, ux, uy, nx, ny, chunk=1024):
    n = X.shape[0]
    out = np.zeros(n, dtype=bool)
    for i0 in range(0, n, chunk):
        dx = X[None, :, 0] - X[i0 : i0 + chunk, None, 0]
        dy = X[None, :, 1] - X[i0 : i0 + chunk, None, 1]
        hit = np.abs(dx * ux + dy * uy) >= beta * np.abs(dx * nx + dy * ny)
        hit &= (dx != 0.0) | (dy != 0.0)
        out[i0 : i0 + chunk] = hit.any(axis=1)
    return out


# --------------------------------------------------------------------------
# Random lines meeting two polygonal curves
# --------------------------------------------------------------------------


@njit(parallel=True, cache=True)
def _pair_hits_nb(thetas, ts, S1, S2):
    n = thetas.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    for i in prange(n):
        c = math.cos(thetas[i])
        s = math.sin(thetas[i])
        t = ts[i]
        h1 = False
        for k in range(S1.shape[0]):
            p = S1[k, 0] * c + S1[k, 1] * s
            q = S1[k, 2] * c + S1[k, 3] * s
            if min(p, q) <= t <= max(p, q):
                h1 = True
                break
        if not h1:
            continue
        for k in range(S2.shape[0]):
            p = S2[k, 0] * c + S2[k, 1] * s
            q = S2[k, 2] * c + S2[k, 3] * s
            if min(p, q) <= t <= max(p, q):
                out[i] = True
                break
    return out


def _hits_np(c, s, t, S):
    hit = np.zeros(t.shape, dtype=bool)
    for k in range(S.shape[0]):
        p = S[k, 0] * c + S[k, 1] * s
        q = S[k, 2] * c + S[k, 3] * s
        hit |= (np.minimum(p, q) <= t) & (t <= np.maximum(p, q))
    return hit


def _pair_hits_np(thetas, ts, S1, S2):
    c = np.cos(thetas)
    s = np.sin(thetas)
    return _hits_np(c, s, ts, S1) & _hits_np(c, s, ts, S2)


# --------------------------------------------------------------------------
# Dispatch
# --------------------------------------------------------------------------


def axis_frame(axis):
    """Unit axis ``u`` and normal ``n = u`` rotated by +pi/2, exact on the coordinate axes."""
    ux, uy = math.cos(axis), math.sin(axis)
    if abs(ux) < 1e-15:
        ux, uy = 0.0, math.copysign(1.0, uy)
    elif abs(uy) < 1e-15:
        ux, uy = math.copysign(1.0, ux), 0.0
    return ux, uy, -uy, ux


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def projection_profile(thetas, vx, vy, ptr, sdx, sdy, backend=None):
    args = (_f64(thetas), _f64(vx), _f64(vy), np.ascontiguousarray(ptr, dtype=np.int64), _f64(sdx), _f64(sdy))
    if _use_numba(backend):
        return _projection_profile_nb(*args)
    return _projection_profile_np(*args)


def max_conical_density_batch(X, A, B, beta, axis, tol=1e-9, backend=None):
    """Maximal conical density and a maximising radius at each row of ``X``."""
    X = _f64(X).reshape(-1, 2)
    A = _f64(A).reshape(-1, 2)
    B = _f64(B).reshape(-1, 2)
    ux, uy, nx, ny = axis_frame(axis)
    if A.shape[0] == 0 or X.shape[0] == 0:
        return np.zeros(X.shape[0]), np.zeros(X.shape[0])
    if _use_numba(backend):
        return _max_conical_density_batch_nb(X, A, B, float(beta), ux, uy, nx, ny, float(tol))
    return _max_conical_density_batch_np(X, A, B, float(beta), ux, uy, nx, ny, float(tol))


def cone_partners(X, beta, axis, backend=None):
    """Mask of points having another point inside their closed cone."""
    X = _f64(X).reshape(-1, 2)
    ux, uy, nx, ny = axis_frame(axis)
    if _use_numba(backend):
        return _cone_partners_nb(X, float(beta), ux, uy, nx, ny)
    return _cone_partners_np(X, float(beta), ux, uy, nx, ny)


def pair_hits(thetas, ts, S1, S2, backend=None):
    """Mask of lines ``(theta, t)`` meeting both segment arrays (rows ax, ay, bx, by)."""
    args = (_f64(thetas), _f64(ts), _f64(S1).reshape(-1, 4), _f64(S2).reshape(-1, 4))
    if _use_numba(backend):
        return _pair_hits_nb(*args)
    return _pair_hits_np(*args)


def _use_numba(backend):
    if backend is None:
        return HAS_NUMBA
    if backend == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is unavailable")
    return backend == "numba"
