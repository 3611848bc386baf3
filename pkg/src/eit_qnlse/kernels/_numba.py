"""JIT-compiled hot kernels; same contracts as :mod:`._numpy`."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def kerr_rotate(values, factor):
    total = 0.0
    for i in range(values.shape[0]):
        v = values[i]
        a2 = v.real * v.real + v.imag * v.imag
        total += a2
        ph = factor * a2
        values[i] = v * complex(np.cos(ph), np.sin(ph))
    return total


@njit(cache=True)
def linear_multiply(values, multiplier):
    for i in range(values.shape[0]):
        values[i] *= multiplier[i]


@njit(cache=True)
def _thomas(lower, diag, upper, rhs, out):
    n = diag.shape[0]
    c = np.empty(n, dtype=out.dtype)
    c[0] = upper[0] / diag[0] if n > 1 else 0.0
    out[0] = rhs[0] / diag[0]
    for i in range(1, n):
        m = diag[i] - lower[i - 1] * c[i - 1]
        if i < n - 1:
            c[i] = upper[i] / m
        out[i] = (rhs[i] - lower[i - 1] * out[i - 1]) / m
    for i in range(n - 2, -1, -1):
        out[i] -= c[i] * out[i + 1]
    return out


def tridiag_solve(lower, diag, upper, rhs):
    dtype = np.result_type(diag, lower, upper, rhs)
    out = np.empty(diag.shape[0], dtype=dtype)
    return _thomas(lower.astype(dtype), diag.astype(dtype), upper.astype(dtype),
                   rhs.astype(dtype), out)


@njit(cache=True)
def sturm_count(diag, off, x):
    count = 0
    q = diag[0] - x
    if q < 0:
        count += 1
    for i in range(1, diag.shape[0]):
        if q == 0.0:
            q = 1e-300
        q = diag[i] - x - off[i - 1] * off[i - 1] / q
        if q < 0:
            count += 1
    return count
