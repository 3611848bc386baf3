"""Reference implementations of the hot kernels (no JIT)."""
from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded


def kerr_rotate(values, factor):
    """In place ``values *= exp(1j * factor * |values|^2)``; returns sum |values|^2."""
    a2 = values.real * values.real + values.imag * values.imag
    values *= np.exp(1j * factor * a2)
    return float(a2.sum())


def linear_multiply(values, multiplier):
    values *= multiplier


def tridiag_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system; ``lower``/``upper`` have length n-1."""
    n = diag.shape[0]
    ab = np.zeros((3, n), dtype=np.result_type(diag, lower, upper, rhs))
    ab[0, 1:] = upper
    ab[1] = diag
    ab[2, :-1] = lower
    return solve_banded((1, 1), ab, rhs)


def sturm_count(diag, off, x):
    """Number of eigenvalues < x of the symmetric tridiagonal (diag, off)."""
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
