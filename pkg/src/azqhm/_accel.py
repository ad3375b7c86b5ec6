"""Numba switch for the hot kernels.

Set ``AZQHM_DISABLE_NUMBA=1`` to force the pure-numpy code path. The flag is
read once at import time.
"""
import os

_DISABLE = os.environ.get("AZQHM_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLE:
        raise ImportError
    import numba  # noqa: F401
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrapper(f):
            return f

        return wrapper


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
