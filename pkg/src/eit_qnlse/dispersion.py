"""Linear EIT dispersion K(omega), its Taylor coefficients at the carrier,
the transparency window and the first-order atomic coherences."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, PoleError
from .params import ComplexDetunings, MediumParams, complex_detunings

POLE_FLOOR_REL = 1e-6


@dataclass(frozen=True)
class TaylorCoefficients:
    K0: complex
    K1: complex
    K2: complex
    Vg: float


@dataclass(frozen=True)
class DispersionProfile:
    omega: np.ndarray
    K: np.ndarray
    omega_min_absorption: float
    peak_omegas: tuple[float, float] | None

    def __post_init__(self):
        if self.omega.shape != self.K.shape:
            raise ValueError("omega and K must have equal length")
        if np.any(np.diff(self.omega) <= 0):
            raise ValueError("omega must be strictly increasing")

    @property
    def in_window(self) -> bool:
        """True when the absorption minimum sits between the two peaks."""
        if self.peak_omegas is None:
            return False
        lo, hi = self.peak_omegas
        return lo < self.omega_min_absorption < hi


def big_d(omega, d: ComplexDetunings, omega_c):
    """D(omega) = |Omega_c|^2 - (omega + d21)(omega + d31)."""
    return abs(omega_c) ** 2 - (omega + d.d21) * (omega + d.d31)


def _require_kappa(p: MediumParams) -> float:
    if p.kappa13 is None:
        raise ParameterError("kappa13 is not set; run calibrate first")
    return p.kappa13


def _check_pole(D, p: MediumParams, pole_floor_rel: float):
    floor = pole_floor_rel * p.omega_c_abs2
    if np.any(np.abs(D) <= floor):
        raise PoleError(f"|D(omega)| below pole floor {floor:.3e} s^-2")


def linear_dispersion(omega, p: MediumParams, pole_floor_rel: float = POLE_FLOOR_REL):
    """K(omega) = omega/c + kappa13 (omega + d21) / D(omega), in cm^-1."""
    kappa = _require_kappa(p)
    d = complex_detunings(p)
    omega = np.asarray(omega, dtype=float)
    D = big_d(omega, d, p.omega_c)
    _check_pole(D, p, pole_floor_rel)
    K = omega / p.c_light + kappa * (omega + d.d21) / D
    return K if K.ndim else complex(K)


def response_derivatives(p: MediumParams) -> tuple[complex, complex, complex]:
    """f, f', f'' at omega = 0 for f(omega) = (omega + d21)/D(omega).

    Quotient rule with N = omega + d21 (N' = 1, N'' = 0) and
    D' = -(2 omega + d21 + d31), D'' = -2.
    """
    d = complex_detunings(p)
    D0 = big_d(0.0, d, p.omega_c)
    _check_pole(D0, p, POLE_FLOOR_REL)
    N0 = d.d21
    D1 = -(d.d21 + d.d31)
    D2 = -2.0
    f0 = N0 / D0
    f1 = 1.0 / D0 - N0 * D1 / D0**2
    f2 = -2.0 * D1 / D0**2 - N0 * D2 / D0**2 + 2.0 * N0 * D1**2 / D0**3
    return complex(f0), complex(f1), complex(f2)


def taylor_coefficients(p: MediumParams) -> TaylorCoefficients:
    kappa = _require_kappa(p)
    f0, f1, f2 = response_derivatives(p)
    K1 = 1.0 / p.c_light + kappa * f1
    if K1.real <= 0:
        raise PoleError("Re K1 <= 0: group velocity undefined")
    return TaylorCoefficients(K0=kappa * f0, K1=K1, K2=kappa * f2, Vg=1.0 / K1.real)


def _local_maxima(y):
    i = np.arange(1, y.size - 1)
    return i[(y[i] > y[i - 1]) & (y[i] >= y[i + 1])]


def transparency_scan(p: MediumParams, omega_min: float, omega_max: float, n: int) -> DispersionProfile:
    """Uniform scan of K(omega); locates the two strongest absorption peaks
    and the absorption minimum between them."""
    if n < 2:
        raise ParameterError("n must be >= 2")
    if not omega_min < omega_max:
        raise ParameterError("omega_min must be < omega_max")
    omega = np.linspace(omega_min, omega_max, n)
    K = np.asarray(linear_dispersion(omega, p), dtype=complex)
    im = K.imag
    peaks = _local_maxima(im)
    if peaks.size >= 2:
        top = np.sort(peaks[np.argsort(im[peaks])[-2:]])
        lo, hi = int(top[0]), int(top[1])
        j = lo + int(np.argmin(im[lo:hi + 1]))
        peak_omegas = (float(omega[lo]), float(omega[hi]))
    else:
        j = int(np.argmin(im))
        peak_omegas = None
    return DispersionProfile(omega=omega, K=K, omega_min_absorption=float(omega[j]),
                             peak_omegas=peak_omegas)


def first_order_coherences(p: MediumParams, A) -> tuple:
    """Envelope amplitudes of sigma21 and sigma31 driven by envelope ``A``.

    g_p is taken real and non-negative, g_p = sqrt(gp_abs2).
    """
    if p.gp_abs2 is None:
        raise ParameterError("gp_abs2 is not set; run calibrate first")
    d = complex_detunings(p)
    denom = p.omega_c_abs2 - d.d21 * d.d31
    if abs(denom) <= POLE_FLOOR_REL * max(p.omega_c_abs2, abs(d.d21 * d.d31)):
        raise PoleError("|Omega_c|^2 - d21 d31 vanishes")
    gp = math.sqrt(p.gp_abs2)
    A = np.asarray(A, dtype=complex)
    s21 = -gp * np.conj(p.omega_c) * A / denom
    s31 = gp * d.d21 * A / denom
    if A.ndim == 0:
        return complex(s21), complex(s31)
    return s21, s31
