"""Optional numba acceleration.

Set ``PENNYTAX_NO_NUMBA=1`` to force the pure-numpy code paths (useful for
debugging and for checking that both paths agree bit for bit).
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("PENNYTAX_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise a no-op decorator."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def use_numba(flag: bool | None = None) -> bool:
    """Resolve a per-call override against the global availability."""
    if flag is None:
        return HAVE_NUMBA
    return flag and HAVE_NUMBA
