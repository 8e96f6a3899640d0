"""Time each hot kernel on the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once per backend before timing so JIT compilation is
excluded; the table reports the best of ``--repeat`` runs and checks that
both backends return the same values.
"""

import argparse
import math
import time

import numpy as np

from favard_lab import _backend, kernels
from favard_lab.grid import generate_grid_set


def cases():
    rng = np.random.default_rng(0)
    E = generate_grid_set(8).E
    V, ptr = E.component_vertices()
    A, B = E.endpoint_arrays()
    D = B - A
    th = np.linspace(0, math.pi, 4096)
    yield "projection_profile", lambda b: kernels.projection_profile(th, V[:, 0], V[:, 1], ptr, D[:, 0], D[:, 1], backend=b)

    A2, B2 = generate_grid_set(2).E.endpoint_arrays()
    X = rng.uniform(0, 1, (100, 2))
    yield "max_conical_density_batch", lambda b: kernels.max_conical_density_batch(X, A2, B2, 0.5, math.pi / 2, backend=b)

    P = rng.uniform(-1, 1, (4000, 2))
    yield "cone_partners", lambda b: kernels.cone_partners(P, 5.0, 0.0, backend=b)

    n = 1_000_000
    lt = rng.uniform(0, math.pi, n)
    lo = rng.uniform(-1.5, 1.5, n)
    S1 = np.array([[0.0, 0.0, 1.0, 0.0]])
    S2 = np.array([[0.0, 1.0, 1.0, 1.2]])
    yield "pair_hits", lambda b: kernels.pair_hits(lt, lo, S1, S2, backend=b)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    return all(np.allclose(x, y, rtol=1e-8, atol=1e-12) for x, y in zip(a, b))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _backend.HAS_NUMBA:
        raise SystemExit("numba is not available (or FAVARD_LAB_DISABLE_NUMBA is set); nothing to compare")
    print(f"{'kernel':28s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}  agree")
    for name, fn in cases():
        fn("numba")
        fn("numpy")
        tn, on = best_of(lambda: fn("numba"), args.repeat)
        tp, op = best_of(lambda: fn("numpy"), args.repeat)
        print(f"{name:28s} {1e3 * tn:11.2f} {1e3 * tp:11.2f} {tp / tn:8.1f}  {same(on, op)}")


if __name__ == "__main__":
    main()
