"""Analytic bright-soliton family of the classical envelope equation

    i (1/Vg) dB/dt - (K2/2) Vg^2 d^2B/dxi^2 + W |B|^2 B = 0,    xi = z - Vg t,

with the probe field and the atomic coherences it drives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import epsilon_0, hbar

from .dispersion import first_order_coherences
from .errors import ParameterError, RegimeError
from .params import MediumParams, complex_detunings
from .reduction import NlseCoefficients

DEFAULT_ETA0 = 0.5


@dataclass(frozen=True)
class SolitonParams:
    eta0: float
    xi0: float
    t0: float          # s; independent input (see soliton_params)
    z0: float          # cm
    phi0: float        # rad
    Vg: float          # cm/s
    K2: float          # cm^-1 s^2
    W: float           # cm^-1
    B0: float          # photon-unit envelope scale
    l0: float          # cm
    Vs: float          # cm/s

    @property
    def amplitude(self) -> float:
        """Peak envelope 2 eta0 B0."""
        return 2.0 * self.eta0 * self.B0

    @property
    def width(self) -> float:
        """sech half-width l0/(2 eta0) in cm."""
        return self.l0 / (2.0 * self.eta0)

    @property
    def comoving_velocity(self) -> float:
        return 4.0 * self.xi0 * self.l0 / self.t0

    @property
    def dispersion_time(self) -> float:
        """width^2 / (K2 Vg^3), the usual T0^2/|beta2| time scale."""
        return self.width**2 / (self.K2 * self.Vg**3)


def soliton_params(coeffs: NlseCoefficients, eta0: float = DEFAULT_ETA0, xi0: float = 0.0,
                   t0: float = 2.4e-7, z0: float = 0.0, phi0: float = 0.0) -> SolitonParams:
    """B0 = sqrt(-2/(W Vg t0)), l0 = sqrt(K2 Vg^3 t0 / 2), Vs = Vg + 4 xi0 l0 / t0.

    t0 is taken as given; it is not re-derived from eta0 and l0.
    """
    K2, W, Vg = coeffs.K2.real, coeffs.W.real, coeffs.Vg
    if not (K2 > 0 and W < 0):
        raise RegimeError("bright soliton requires K2 > 0 and W < 0")
    if not t0 > 0:
        raise ParameterError("t0 must be > 0")
    if not eta0 > 0:
        raise ParameterError("eta0 must be > 0")
    B0 = math.sqrt(-2.0 / (W * Vg * t0))
    l0 = math.sqrt(K2 * Vg**3 * t0 / 2.0)
    return SolitonParams(eta0=eta0, xi0=xi0, t0=t0, z0=z0, phi0=phi0, Vg=Vg, K2=K2, W=W,
                         B0=B0, l0=l0, Vs=Vg + 4.0 * xi0 * l0 / t0)


def _sech(x):
    # 1/cosh overflows harmlessly to 0 far from the core
    with np.errstate(over="ignore"):
        return 1.0 / np.cosh(x)


def sech_argument(sp: SolitonParams, z, t):
    return (2.0 * sp.eta0 / sp.l0) * (z - sp.Vs * t - sp.z0)


def envelope_phase(sp: SolitonParams, z, t):
    return (-(2.0 * sp.xi0 / sp.l0) * z
            + 2.0 * (sp.xi0 * sp.Vg / sp.l0 + 2.0 * (sp.xi0**2 - sp.eta0**2) / sp.t0) * t
            - sp.phi0)


def soliton_envelope(sp: SolitonParams, z, t):
    """B(z, t) in the laboratory coordinate z."""
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    B = sp.amplitude * _sech(sech_argument(sp, z, t)) * np.exp(1j * envelope_phase(sp, z, t))
    return B if B.ndim else complex(B)


def comoving_envelope(sp: SolitonParams):
    """Callable (xi, t) -> B with xi = z - Vg t, for the propagator."""

    def f(xi, t):
        xi = np.asarray(xi, dtype=float)
        # z = xi + Vg t, written out so the Vg t terms cancel analytically
        arg = (2.0 * sp.eta0 / sp.l0) * (xi - sp.comoving_velocity * t - sp.z0)
        phase = (-(2.0 * sp.xi0 / sp.l0) * xi
                 + 4.0 * (sp.xi0**2 - sp.eta0**2) / sp.t0 * t - sp.phi0)
        return sp.amplitude * _sech(arg) * np.exp(1j * phase)

    return f


def single_photon_field(p: MediumParams) -> float:
    """E_p = sqrt(hbar omega_p / (2 eps0 V)) in V/m, with V = N / N_a from calibration."""
    V = p.inferred_volume
    if V is None:
        raise ParameterError("quantization volume unknown; calibrate kappa13 and gp_abs2 first")
    omega_p = p.c_light * p.k_p
    return math.sqrt(hbar * omega_p / (2.0 * epsilon_0 * V * 1e-6))


def probe_amplitude(sp: SolitonParams, p: MediumParams) -> float:
    """E_p0 = 2 E_single B0 eta0 (V/m)."""
    return 2.0 * single_photon_field(p) * sp.B0 * sp.eta0


def carrier_phase(sp: SolitonParams, p: MediumParams, K0: float, z, t):
    """Theta_s = (k_p + K0 - 2 xi0/l0) z - [omega_p - 2(xi0 Vg/l0 + 2(xi0^2-eta0^2)/t0)] t - phi0."""
    omega_p = p.c_light * p.k_p
    k = p.k_p + K0 - 2.0 * sp.xi0 / sp.l0
    w = omega_p - 2.0 * (sp.xi0 * sp.Vg / sp.l0 + 2.0 * (sp.xi0**2 - sp.eta0**2) / sp.t0)
    return k * np.asarray(z, dtype=float) - w * np.asarray(t, dtype=float) - sp.phi0


def probe_field(sp: SolitonParams, p: MediumParams, z, t, K0: float | None = None):
    """Real probe field 2 E_p0 sech(Xi) cos(Theta_s) in V/m (polarization dropped)."""
    if K0 is None:
        from .dispersion import taylor_coefficients

        K0 = taylor_coefficients(p).K0.real
    Ep0 = probe_amplitude(sp, p)
    return 2.0 * Ep0 * _sech(sech_argument(sp, z, t)) * np.cos(carrier_phase(sp, p, K0, z, t))


def coherence_profiles(sp: SolitonParams, p: MediumParams, z, t, K0: float | None = None):
    """(<S31>, <S21>) following the soliton: first-order coherence coefficients
    times the envelope peak 2 eta0 B0, sech(Xi) and the carrier exp(i Theta_s)."""
    if K0 is None:
        from .dispersion import taylor_coefficients

        K0 = taylor_coefficients(p).K0.real
    s21_amp, s31_amp = first_order_coherences(p, sp.amplitude)
    shape = _sech(sech_argument(sp, z, t)) * np.exp(1j * carrier_phase(sp, p, K0, z, t))
    return s31_amp * shape, s21_amp * shape


def coherence_ratio(p: MediumParams) -> complex:
    """<S21>/<S31> = -conj(Omega_c)/d21."""
    d = complex_detunings(p)
    return -np.conj(p.omega_c) / d.d21


def surface(sp: SolitonParams, s, tau):
    """|B| on the (s, t/t0) plane with s = (z - Vg t)/l0; rows indexed by tau."""
    s = np.asarray(s, dtype=float)
    tau = np.asarray(tau, dtype=float)
    t = tau[:, None] * sp.t0
    z = s[None, :] * sp.l0 + sp.Vg * t
    return np.abs(soliton_envelope(sp, z, t))
