"""Kernel backend selection.

Numba is used when importable unless ``SIMPLEXLEARN_DISABLE_NUMBA`` is set to
a truthy value, in which case every kernel runs its pure-numpy twin.
"""
from __future__ import annotations

import os

_FLAG = os.environ.get("SIMPLEXLEARN_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG not in ("", "0", "false", "no")

try:
    from numba import njit as _njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity decorator otherwise.

    Kernels are always compiled when numba exists (even if disabled by the
    environment) so the benchmark can compare both paths in one process.
    """
    if _njit is None:
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return _njit(*args, **kwargs)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
