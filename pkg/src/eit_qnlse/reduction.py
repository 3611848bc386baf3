"""Numerical stand-ins for the multiple-scales reduction.

The third-order (Kerr) coefficient is obtained from the stationary response
of the semiclassical Lambda-system Bloch equations: sigma31/Omega_p is fitted
as a polynomial in |Omega_p|^2 over a ladder of weak probe amplitudes, and
the |Omega_p|^2 coefficient is converted to W. The unpublished couplings
kappa13 and |g_p|^2 are recovered by calibrating against target K2 and W.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .dispersion import response_derivatives, taylor_coefficients
from .errors import CalibrationError, FitError, ParameterError, RegimeError, SingularSystemError
from .params import MediumParams

# Omega_p / |Omega_c| for the amplitude ladder.
DEFAULT_LADDER = (0.02, 0.03, 0.045, 0.068, 0.1)
FIT_DEGREE = 3
FIT_RESIDUAL_TOL = 1e-4
REPORT_SCHEMA_VERSION = 1

DEFAULT_K2_TARGET = 4.82e-15   # cm^-1 s^2
DEFAULT_W_TARGET = -2.28e-7    # cm^-1


# --- semiclassical Bloch oracle --------------------------------------------

@dataclass(frozen=True)
class BlochState:
    """Density-matrix elements sigma_ab = <a|rho|b> in the rotating frame."""

    s11: float
    s22: float
    s33: float
    s21: complex
    s31: complex
    s32: complex

    @property
    def trace(self) -> float:
        return self.s11 + self.s22 + self.s33

    def matrix(self) -> np.ndarray:
        return np.array([
            [self.s11, np.conj(self.s21), np.conj(self.s31)],
            [self.s21, self.s22, np.conj(self.s32)],
            [self.s31, self.s32, self.s33],
        ], dtype=complex)


def hamiltonian(p: MediumParams, omega_p) -> np.ndarray:
    """H/hbar = -(Delta2 |2><2| + Delta3 |3><3| + Omega_p |3><1| + Omega_c |3><2| + h.c.)."""
    op = complex(omega_p)
    oc = p.omega_c
    return -np.array([
        [0.0, 0.0, np.conj(op)],
        [0.0, p.delta2, np.conj(oc)],
        [op, oc, p.delta3],
    ], dtype=complex)


def _collapse_ops(p: MediumParams) -> list[np.ndarray]:
    ops = []
    e = np.eye(3)
    if p.gamma13 > 0:
        ops.append(math.sqrt(p.gamma13) * np.outer(e[0], e[2]))
    if p.gamma23 > 0:
        ops.append(math.sqrt(p.gamma23) * np.outer(e[1], e[2]))
    if p.gamma21_deph > 0:
        # rate 2*gamma21 on |2><2| damps sigma21 (and sigma32) at gamma21
        ops.append(math.sqrt(2.0 * p.gamma21_deph) * np.outer(e[1], e[1]))
    return ops


def liouvillian(p: MediumParams, omega_p) -> np.ndarray:
    """Row-major vec(rho) generator: d vec(rho)/dt = L vec(rho)."""
    H = hamiltonian(p, omega_p)
    eye = np.eye(3)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    for C in _collapse_ops(p):
        CdC = C.conj().T @ C
        L += np.kron(C, C.conj()) - 0.5 * np.kron(CdC, eye) - 0.5 * np.kron(eye, CdC.T)
    return L


def _rate_scale(p: MediumParams, omega_p) -> float:
    return max(abs(p.omega_c), abs(omega_p), p.gamma13 + p.gamma23,
               abs(p.delta2), abs(p.delta3), p.gamma21_deph, 1.0)


def steady_bloch_solve(p: MediumParams, omega_p) -> BlochState:
    """Stationary state of the Lambda Bloch equations.

    sigma11 is eliminated through the trace condition, leaving eight complex
    unknowns (sigma22, sigma33 and the six off-diagonals).
    """
    omega_p = complex(omega_p)
    if not (math.isfinite(omega_p.real) and math.isfinite(omega_p.imag)):
        raise ParameterError("probe Rabi frequency must be finite")
    L = liouvillian(p, omega_p) / _rate_scale(p, omega_p)
    # vec index of rho[a, b] is 3a + b; rho11 -> 0 is eliminated, drop its equation
    keep = np.arange(1, 9)
    A = L[np.ix_(keep, keep)].copy()
    A[:, 3] -= L[keep, 0]      # rho22
    A[:, 7] -= L[keep, 0]      # rho33
    b = -L[keep, 0]
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e13:
        raise SingularSystemError("steady-state Bloch system is singular", cond)
    x = np.linalg.solve(A, b)
    rho = np.empty(9, dtype=complex)
    rho[keep] = x
    rho[0] = 1.0 - x[3] - x[7]
    r = rho.reshape(3, 3)
    return BlochState(s11=float(r[0, 0].real), s22=float(r[1, 1].real), s33=float(r[2, 2].real),
                      s21=complex(r[1, 0]), s31=complex(r[2, 0]), s32=complex(r[2, 1]))


# --- Kerr coefficient ------------------------------------------------------

@dataclass(frozen=True)
class KerrFit:
    W: complex                 # cm^-1 (requires calibrated couplings)
    c1: complex                # linear response sigma31/Omega_p at Omega_p -> 0 [s]
    c3: complex                # coefficient of |Omega_p|^2 [s^3]
    residual: float            # relative L2 misfit of the polynomial fit
    amplitudes: tuple[float, ...]


def kerr_response(p: MediumParams, ladder=DEFAULT_LADDER, degree: int = FIT_DEGREE):
    """Fit chi(Omega_p) = sigma31/Omega_p = c1 + c3 |Omega_p|^2 + ... on the ladder.

    Returns (c1, c3, residual, amplitudes). The fit runs in the scaled variable
    (Omega_p/scale)^2 for conditioning; points are processed in ladder order.
    """
    ladder = tuple(float(a) for a in ladder)
    if len(ladder) < degree + 1:
        raise ParameterError(f"need at least {degree + 1} ladder amplitudes")
    scale = abs(p.omega_c) if abs(p.omega_c) > 0 else max(p.gamma31, 1.0)
    amps = tuple(a * scale for a in ladder)
    chi = np.array([steady_bloch_solve(p, a).s31 / a for a in amps])
    x = np.array(ladder) ** 2
    V = np.vander(x, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V, chi, rcond=None)
    residual = float(np.linalg.norm(V @ coef - chi) / np.linalg.norm(chi))
    return complex(coef[0]), complex(coef[1] / scale**2), residual, amps


def kerr_fit(p: MediumParams, ladder=DEFAULT_LADDER, degree: int = FIT_DEGREE,
             residual_tol: float = FIT_RESIDUAL_TOL) -> KerrFit:
    """W = kappa13 * c3 * |g_p|^2: the cubic term of the field equation
    written for the photon-unit envelope."""
    if p.kappa13 is None or p.gp_abs2 is None:
        raise ParameterError("kappa13 and gp_abs2 must be set; run calibrate first")
    c1, c3, residual, amps = kerr_response(p, ladder, degree)
    if residual > residual_tol:
        raise FitError(f"Kerr fit residual {residual:.3e} exceeds {residual_tol:.1e}; "
                       "probe amplitudes outside the perturbative window")
    return KerrFit(W=p.kappa13 * c3 * p.gp_abs2, c1=c1, c3=c3, residual=residual,
                   amplitudes=amps)


def kerr_coefficient(p: MediumParams, ladder=DEFAULT_LADDER) -> complex:
    return kerr_fit(p, ladder).W


# --- calibration -------------------------------------------------------------

@dataclass(frozen=True)
class CalibrationReport:
    kappa13: float
    gp_abs2: float
    inferred_N: float
    inferred_volume_cm3: float
    single_photon_rabi: float
    Vg: float
    K2: float
    W: float
    K2_target: float
    W_target: float
    residuals: dict
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)


def calibrate(p: MediumParams, K2_target: float = DEFAULT_K2_TARGET,
              W_target: float = DEFAULT_W_TARGET) -> tuple[MediumParams, CalibrationReport]:
    """Solve kappa13 from Re K2 = K2_target, then |g_p|^2 from Re W = W_target.

    Both relations are linear in the unknown, so each is a one-step solve.
    """
    if not (math.isfinite(K2_target) and math.isfinite(W_target)):
        raise ParameterError("targets must be finite")
    if K2_target == 0:
        raise ParameterError("K2_target must be nonzero")
    _, _, f2 = response_derivatives(p)
    if f2.real == 0:
        raise CalibrationError("no-solution: K2 does not depend on kappa13")
    kappa = K2_target / f2.real
    if not kappa > 0:
        raise CalibrationError(f"no-solution: K2 target {K2_target:.3e} needs kappa13 < 0")
    c1, c3, fit_residual, _ = kerr_response(p)
    if fit_residual > FIT_RESIDUAL_TOL:
        raise FitError(f"Kerr fit residual {fit_residual:.3e} exceeds tolerance")
    gp_abs2 = W_target / (kappa * c3.real) if c3.real != 0 else math.nan
    if not (math.isfinite(gp_abs2) and gp_abs2 > 0):
        raise CalibrationError(f"no-solution: W target {W_target:.3e} needs |g_p|^2 <= 0 "
                               f"(Re c3 = {c3.real:.3e})")
    out = replace(p, kappa13=kappa, gp_abs2=gp_abs2)
    taylor = taylor_coefficients(out)
    W = kerr_coefficient(out)
    report = CalibrationReport(
        kappa13=kappa,
        gp_abs2=gp_abs2,
        inferred_N=out.inferred_atom_number,
        inferred_volume_cm3=out.inferred_volume,
        single_photon_rabi=math.sqrt(gp_abs2),
        Vg=taylor.Vg,
        K2=taylor.K2.real,
        W=W.real,
        K2_target=K2_target,
        W_target=W_target,
        residuals={
            "K2_rel": abs(taylor.K2.real - K2_target) / abs(K2_target),
            "W_rel": abs(W.real - W_target) / abs(W_target),
            "kerr_fit": fit_residual,
        },
    )
    return out, report


# --- NLSE coefficients -------------------------------------------------------

@dataclass(frozen=True)
class NlseCoefficients:
    K0: complex
    Vg: float
    K2: complex
    W: complex
    diffraction: float         # 1/(2 k_p), cm
    real_only: bool = True

    def __post_init__(self):
        if self.real_only:
            for name in ("K0", "K2", "W"):
                object.__setattr__(self, name, complex(getattr(self, name).real, 0.0))

    @property
    def bright(self) -> bool:
        """Bright solitons / attractive pairing need K2 > 0 and W < 0."""
        return self.K2.real > 0 and self.W.real < 0

    def as_real(self) -> NlseCoefficients:
        return replace(self, real_only=True)


def nlse_coefficients(p: MediumParams, real_only: bool = True) -> NlseCoefficients:
    t = taylor_coefficients(p)
    W = kerr_coefficient(p)
    return NlseCoefficients(K0=t.K0, Vg=t.Vg, K2=t.K2, W=W, diffraction=1.0 / (2.0 * p.k_p),
                            real_only=real_only)


DEFAULT_DEPHASING = tuple(2 * np.pi * f for f in (1e2, 1e3, 1e4))   # rad/s


def dephasing_sensitivity(p: MediumParams, rates=DEFAULT_DEPHASING) -> list[dict]:
    """Re-evaluate K2, W and the line-centre absorption Im K0 at each ground-state
    dephasing rate, holding every other parameter (including the calibration) fixed.

    Changes are relative to the coefficients at ``p`` itself.
    """
    base = nlse_coefficients(p, real_only=False)
    rows = []
    for g in rates:
        c = nlse_coefficients(replace(p, gamma21_deph=float(g)), real_only=False)
        rows.append({
            "gamma21_rad_s": float(g),
            "K2_rel_change": abs(c.K2.real / base.K2.real - 1),
            "W_rel_change": abs(c.W.real / base.W.real - 1),
            "ImK0_cm-1": c.K0.imag,
            "ImK2_over_ReK2": c.K2.imag / c.K2.real,
            "ImW_over_ReW": c.W.imag / c.W.real,
        })
    return rows


# --- two-photon effective parameters -----------------------------------------

UNIT_CAVEAT = ("m0*a0 carries units of cm^-2 when z is in cm; zeta0 is meaningful as an "
               "inverse length only with positions measured in units of L")


@dataclass(frozen=True)
class EffectiveMasses:
    m0: float       # -L/(K2 Vg^3)
    a0: float       # -Vg W / L
    zeta0: float    # -m0 a0 / 2 = -W / (2 K2 Vg^2), independent of L
    L: float
    caveat: str = UNIT_CAVEAT


def effective_masses(coeffs: NlseCoefficients, L: float) -> EffectiveMasses:
    if not L > 0:
        raise ParameterError("L must be > 0")
    K2, W, Vg = coeffs.K2.real, coeffs.W.real, coeffs.Vg
    if K2 * W >= 0:
        raise RegimeError("no attractive bound state: requires K2 > 0 and W < 0 "
                          "(m0 < 0 and a0 > 0)")
    m0 = -L / (K2 * Vg**3)
    a0 = -Vg * W / L
    return EffectiveMasses(m0=m0, a0=a0, zeta0=-m0 * a0 / 2.0, L=L)


def length_for_mass(coeffs: NlseCoefficients, m0: float) -> float:
    """System length L giving the requested m0."""
    return -m0 * coeffs.K2.real * coeffs.Vg**3
