"""Hot numerical kernels with a JIT and a plain-numpy implementation.

The numba path is used when numba imports cleanly, unless the environment
variable ``EIT_QNLSE_DISABLE_JIT`` is set to a truthy value. Both paths are
importable explicitly (``kernels.numpy_backend``, ``kernels.numba_backend``)
so tests and the benchmark can compare them in one process.

``EIT_QNLSE_THREADS`` caps internal parallelism (FFT workers; the kernels
themselves are serial).
"""
from __future__ import annotations

import os

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba missing
    numba_backend = None

_TRUTHY = {"1", "true", "yes", "on"}


def jit_disabled() -> bool:
    return os.environ.get("EIT_QNLSE_DISABLE_JIT", "").strip().lower() in _TRUTHY


def thread_cap() -> int:
    raw = os.environ.get("EIT_QNLSE_THREADS", "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def _select():
    if numba_backend is None or jit_disabled():
        return numpy_backend, "numpy"
    return numba_backend, "numba"


_impl, BACKEND = _select()

kerr_rotate = _impl.kerr_rotate
linear_multiply = _impl.linear_multiply
tridiag_solve = _impl.tridiag_solve
sturm_count = _impl.sturm_count

__all__ = ["BACKEND", "kerr_rotate", "linear_multiply", "tridiag_solve", "sturm_count",
           "numpy_backend", "numba_backend", "jit_disabled", "thread_cap"]
