"""Numeric kernel package: numba-jitted hot loops with a pure-numpy fallback.

Set ``DIALECTID_PURE_NUMPY=1`` before import to force the fallback. The
selected backend name is exported as ``BACKEND``.
"""

from ._select import BACKEND
from .impl import csr_decision, dual_cd, skipgram_train, supervised_train

__all__ = [
    "BACKEND",
    "csr_decision",
    "dual_cd",
    "skipgram_train",
    "supervised_train",
]
