"""Kernel backend selection.

Hot numeric loops are JIT-compiled with numba by default. Setting the
environment variable ``DIALECTID_PURE_NUMPY=1`` (or ``true``/``yes``/``on``)
before import selects the pure-Python/numpy fallback instead. Both paths
run the same source, in the same operation order, so results are
bit-identical between backends.
"""

from __future__ import annotations

import os

_TRUTHY = {"1", "true", "yes", "on"}


def _pure_requested() -> bool:
    return os.environ.get("DIALECTID_PURE_NUMPY", "").strip().lower() in _TRUTHY


if _pure_requested():
    BACKEND = "numpy"

    def maybe_jit(func):
        return func

else:
    try:
        from numba import njit

        BACKEND = "numba"

        def maybe_jit(func):
            return njit(cache=True)(func)

    except ImportError:  # pragma: no cover - numba is a declared dependency
        BACKEND = "numpy"

        def maybe_jit(func):
            return func
