"""Two-photon sector of the envelope model.

The two-photon wavefunction obeys

    i dPhi/dt = [ -(1/(2 m0)) (d1^2 + d2^2) + a0 delta(z1 - z2) ] Phi,

with m0 = -L/(K2 Vg^3) and a0 = -Vg W / L. Separating the centre of mass
R = (z1+z2)/2 and the separation r = z1 - z2 leaves the relative problem
-(1/m0) phi'' + a0 delta(r) phi = E phi, bound when m0 a0 < 0 with
phi ~ exp(-zeta0 |r|), zeta0 = -m0 a0 / 2, E_rel = -m0 a0^2 / 4.

Lengths are in whatever unit m0 and a0 were built for; the CLI measures
them in units of L.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, ParameterError, RegimeError


@dataclass(frozen=True)
class EnergyTerms:
    com: float
    binding: float

    @property
    def total(self) -> float:
        return self.com + self.binding


def total_energy(m0: float, a0: float, p0: float = 0.0) -> EnergyTerms:
    """E_T = p0^2/(4 m0) - m0 a0^2/4, split into its two terms."""
    if m0 == 0:
        raise ParameterError("m0 must be nonzero")
    return EnergyTerms(com=p0**2 / (4.0 * m0), binding=-m0 * a0**2 / 4.0)


def decay_rate(m0: float, a0: float) -> float:
    return -m0 * a0 / 2.0


def _require_bound(m0: float, a0: float) -> float:
    zeta0 = decay_rate(m0, a0)
    if not (m0 < 0 and a0 > 0):
        raise RegimeError("no attractive bound state: requires m0 < 0 and a0 > 0")
    return zeta0


# --- analytic wavefunction --------------------------------------------------

@dataclass(frozen=True)
class BoundStateResult:
    zeta0: float
    p0: float
    E_T: float
    m0: float
    a0: float
    z: np.ndarray          # sample positions on each axis
    phi: np.ndarray        # Phi(z[i], z[j]) at t = 0, normalised on the box
    L: float
    raw_norm: float        # sum |Phi|^2 dz^2 before normalisation
    box_capture: float     # exact box integral / box length (1 for an infinite strip)
    quadrature_error: float

    @property
    def dz(self) -> float:
        return float(self.z[1] - self.z[0])

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.phi) ** 2) * self.dz**2)


def bound_state_wavefunction(zeta0: float, p0: float, z1, z2):
    """sqrt(zeta0) exp(-zeta0 |z1 - z2|) exp(-i p0 (z1 + z2)/2)."""
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    return (math.sqrt(zeta0) * np.exp(-zeta0 * np.abs(z1 - z2))
            * np.exp(-0.5j * p0 * (z1 + z2)))


def analytic_bound_state(m0: float, a0: float, p0: float, box: float, n: int,
                         L: float = 1.0) -> BoundStateResult:
    """Sample the bound state on an n x n cell-centred grid over [0, box]^2."""
    zeta0 = _require_bound(m0, a0)
    if not box > 10.0 / zeta0:
        raise ParameterError(f"box {box:.3e} must exceed 10/zeta0 = {10.0 / zeta0:.3e}")
    if n < 2:
        raise ParameterError("n must be >= 2")
    dz = box / n
    z = (np.arange(n) + 0.5) * dz
    phi = bound_state_wavefunction(zeta0, p0, z[:, None], z[None, :])
    raw = float(np.sum(np.abs(phi) ** 2) * dz**2)
    # integral of zeta0 exp(-2 zeta0 |z1 - z2|) over the square
    exact = box - (1.0 - math.exp(-2.0 * zeta0 * box)) / (2.0 * zeta0)
    return BoundStateResult(
        zeta0=zeta0, p0=p0, E_T=total_energy(m0, a0, p0).total, m0=m0, a0=a0, z=z,
        phi=phi / math.sqrt(raw), L=L, raw_norm=raw, box_capture=exact / box,
        quadrature_error=abs(raw - exact) / exact,
    )


def density_map(result: BoundStateResult):
    """(z/L axis, |Phi|^2 matrix) with density[i, j] at (z[i]/L, z[j]/L)."""
    return result.z / result.L, np.abs(result.phi) ** 2


# --- lattice oracle ----------------------------------------------------------

@dataclass(frozen=True)
class TwoBodyLattice:
    """Relative-coordinate lattice Hamiltonian, folded so the bound state is lowest.

    The physical operator is ``sign * (tridiag(off, diag, off))`` with
    ``sign = sign(m0)``; the well sits on the centre site.
    """

    n: int
    dx: float
    diag: np.ndarray
    off: np.ndarray
    sign: float
    kinetic: float         # 1/(|m0| dx^2)
    well: float            # sign * a0 / dx on the centre site

    @property
    def r(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)


def relative_lattice(m0: float, a0: float, n: int, dx: float) -> TwoBodyLattice:
    """Three-point stencil for -(1/m0) d^2/dr^2, delta(r) -> 1/dx on the centre site."""
    if m0 == 0:
        raise ParameterError("m0 must be nonzero")
    sign = 1.0 if m0 > 0 else -1.0
    kin = 1.0 / (abs(m0) * dx * dx)
    diag = np.full(n, 2.0 * kin)
    diag[n // 2] += sign * a0 / dx
    off = np.full(n - 1, -kin)
    return TwoBodyLattice(n=n, dx=dx, diag=diag, off=off, sign=sign, kinetic=kin,
                          well=sign * a0 / dx)


@dataclass(frozen=True)
class LatticeBoundState:
    E_rel: float
    phi: np.ndarray        # real, even, sum |phi|^2 dx = 1
    r: np.ndarray
    zeta0_fit: float
    iterations: int
    residual: float
    dx: float
    n: int


def count_below(lat: TwoBodyLattice, x: float) -> int:
    return int(kernels.sturm_count(lat.diag, lat.off, float(x)))


def lowest_eigenvalue_bracket(lat: TwoBodyLattice, rtol: float = 1e-12) -> tuple[float, float]:
    """Bisection (Sturm counts) for the lowest eigenvalue; returns (lo, hi) with
    no eigenvalue below ``lo`` and at least one below ``hi``."""
    lo = float(np.min(lat.diag) - 2.0 * np.max(np.abs(lat.off)))
    hi = float(np.max(lat.diag) + 2.0 * np.max(np.abs(lat.off)))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if count_below(lat, mid) >= 1:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rtol * max(abs(lo), abs(hi)):
            break
    return lo, hi


def fit_decay_rate(r: np.ndarray, phi: np.ndarray, r_min: float, r_max: float,
                   floor: float = 1e-12) -> float:
    """Least-squares slope of log|phi| against |r| over r_min <= |r| <= r_max."""
    a = np.abs(r)
    mag = np.abs(phi)
    sel = (a >= r_min) & (a <= r_max) & (mag > floor * mag.max())
    if sel.sum() < 3:
        raise ConvergenceError("too few tail points for the decay fit")
    slope, _ = np.polyfit(a[sel], np.log(mag[sel]), 1)
    return float(-slope)


def lattice_ground_state(m0: float, a0: float, n: int, dx: float, tol: float = 1e-12,
                         max_iter: int = 50, check_resolution: bool = True) -> LatticeBoundState:
    """Bound state of the relative problem by shifted inverse iteration.

    The shift comes from a Sturm-sequence bisection and sits just below the
    lowest eigenvalue of the folded operator, so every tridiagonal solve is
    positive definite.
    """
    if n % 2 == 0 or n < 3:
        raise ParameterError("n must be odd (well on the centre site) and >= 3")
    if not dx > 0:
        raise ParameterError("dx must be > 0")
    zeta_mag = abs(decay_rate(m0, a0))
    if check_resolution and zeta_mag > 0:
        if not dx * n > 20.0 / zeta_mag:
            raise ParameterError(f"box n*dx = {n * dx:.3e} must exceed 20/zeta0 = {20.0 / zeta_mag:.3e}")
        if not dx < 1.0 / (50.0 * zeta_mag):
            raise ParameterError(f"dx = {dx:.3e} must be below 1/(50 zeta0) = {1.0 / (50.0 * zeta_mag):.3e}")
    lat = relative_lattice(m0, a0, n, dx)
    # continuum of the folded operator starts at 0
    if count_below(lat, 0.0) == 0:
        raise RegimeError("no bound state below the continuum edge (repulsive interaction)")
    lo, hi = lowest_eigenvalue_bracket(lat)
    shift = lo - 1e-9 * abs(lo)
    lower = lat.off
    diag = lat.diag - shift
    v = np.exp(-np.abs(lat.r) / (0.05 * n * dx))
    v /= np.linalg.norm(v)
    trace = []
    lam = math.nan
    scale = float(np.max(np.abs(lat.diag)) + 2.0 * lat.kinetic)
    for it in range(1, max_iter + 1):
        w = kernels.tridiag_solve(lower, diag, lower, v)
        v = w / np.linalg.norm(w)
        Hv = lat.matvec(v)
        lam = float(v @ Hv)
        res = float(np.linalg.norm(Hv - lam * v))
        trace.append((it, lam, res))
        if res <= tol * scale:
            break
    else:
        raise ConvergenceError("inverse iteration did not converge", trace)
    c = n // 2
    if v[c] < 0:
        v = -v
    v = v / math.sqrt(float(np.sum(v * v) * dx))
    r = lat.r
    zeta_fit = fit_decay_rate(r, v, r_min=2.0 * dx, r_max=0.25 * n * dx)
    return LatticeBoundState(E_rel=lat.sign * lam, phi=v, r=r, zeta0_fit=zeta_fit,
                             iterations=len(trace), residual=trace[-1][2], dx=dx, n=n)


def com_sector_spectrum(m0: float, a0: float, n: int, dx: float) -> np.ndarray:
    """Spectrum of the periodic n x n two-body lattice assembled sector by sector.

    With psi(x1, x2) = exp(i K x2) f(x1 - x2), K = 2 pi j / n, the two-body
    problem reduces to an n-site relative problem whose hopping carries the
    centre-of-mass phase: (1 + e^{-iK}) forward and (1 + e^{iK}) backward.
    On a lattice this is the exact analogue of E_COM(K) + E_rel.
    """
    alpha = -1.0 / (2.0 * m0) / dx**2
    eigs = []
    for j in range(n):
        K = 2.0 * np.pi * j / n
        h = np.zeros((n, n), dtype=complex)
        fwd = alpha * (1.0 + np.exp(-1j * K))
        for r in range(n):
            h[r, r] = -4.0 * alpha
            h[r, (r + 1) % n] += fwd
            h[r, (r - 1) % n] += np.conj(fwd)
        h[0, 0] += a0 / dx
        eigs.append(np.linalg.eigvalsh(h))
    return np.sort(np.concatenate(eigs))
