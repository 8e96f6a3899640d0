"""Kernel backend selection.

Numba is used when it imports and ``FAVARD_LAB_DISABLE_NUMBA`` is unset or
"0"; otherwise every kernel falls back to its vectorised numpy twin.  The
choice is made once at import time.
"""

import os

_DISABLED = os.environ.get("FAVARD_LAB_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

# the bundled TBB is too old for numba; skip the probe and its warning
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

try:
    if _DISABLED:
        raise ImportError("numba disabled by FAVARD_LAB_DISABLE_NUMBA")
    import numba
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

    prange = range

BACKEND = "numba" if HAS_NUMBA else "numpy"


def set_threads(n):
    """Cap the numba worker pool; a no-op on the numpy backend."""
    if n is None or not HAS_NUMBA:
        return
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)


def threads_from_env():
    raw = os.environ.get("FAVARD_LAB_THREADS")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        return None
