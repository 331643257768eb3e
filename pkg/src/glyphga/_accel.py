"""Selects between numba-compiled kernels and the pure numpy path.

Set ``GLYPHGA_DISABLE_NUMBA=1`` to force the numpy path (also used when
numba is not importable).
"""
import os

_disabled = os.environ.get("GLYPHGA_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _disabled


def njit(func):
    """``numba.njit(cache=True)`` when available, else a fallback that returns None.

    Callers keep the returned object next to a numpy implementation and pick
    one through :data:`USE_NUMBA`.
    """
    if not HAVE_NUMBA:
        return None
    return _njit(cache=True, nogil=True)(func)
