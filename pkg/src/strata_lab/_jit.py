"""Numba availability switch.

Set ``STRATA_LAB_DISABLE_JIT=1`` to force the pure-numpy kernels even when
numba is importable.  The flag is read once, at import time.
"""
from __future__ import annotations

import os

_FLAG = "STRATA_LAB_DISABLE_JIT"

JIT_DISABLED = os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}

try:
    from numba import njit as _njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    _njit = None
    NUMBA_AVAILABLE = False

USE_JIT = NUMBA_AVAILABLE and not JIT_DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if _njit is not None:
        return _njit(*args, **kwargs)

    def wrap(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap
