import math

import numpy as np
import pytest

from eit_qnlse import twophoton as tp
from eit_qnlse.errors import ParameterError, RegimeError

M0, A0 = -1.0, 2.0          # zeta0 = 1, E_rel = 1 in lattice units


# --- energy ------------------------------------------------------------------------

def test_energy_terms():
    e = tp.total_energy(-1.08e-6, 1.31, 0.0)
    assert e.com == 0.0
    assert e.total == e.binding == -(-1.08e-6) * 1.31**2 / 4
    assert e.binding > 0


def test_energy_with_momentum():
    e = tp.total_energy(-2.0, 3.0, 4.0)
    assert e.com == 16.0 / (4 * -2.0)
    assert e.total == pytest.approx(-2.0 + 4.5)


def test_energy_reference_chain_regression(coeffs):
    from eit_qnlse.reduction import effective_masses

    m = effective_masses(coeffs, 1.0)
    e = tp.total_energy(m.m0, m.a0, 0.0)
    assert e.total == pytest.approx(4.671650606383958e-07, rel=1e-9)


def test_zero_mass_rejected():
    with pytest.raises(ParameterError):
        tp.total_energy(0.0, 1.0)


# --- analytic bound state ------------------------------------------------------------

@pytest.fixture(scope="module")
def bound():
    return tp.analytic_bound_state(M0, A0, 0.0, box=12.0, n=241)


def test_ridge_height():
    # raw samples: |Phi(z, z)|^2 = zeta0
    phi = tp.bound_state_wavefunction(0.7, 1.3, np.array([0.2, 5.0]), np.array([0.2, 5.0]))
    np.testing.assert_allclose(np.abs(phi) ** 2, 0.7, rtol=1e-14)


def test_depends_only_on_separation(bound):
    mag = np.abs(bound.phi)
    z = bound.z
    for shift in (1, 7, 30):
        np.testing.assert_allclose(np.diagonal(mag, shift), mag[0, shift], rtol=1e-12)
    assert np.allclose(mag, mag.T)


def test_normalised_on_box(bound):
    assert abs(bound.norm - 1.0) < 1e-6
    assert bound.quadrature_error < 1e-3
    assert bound.box_capture == pytest.approx(1 - (1 - math.exp(-24.0)) / 24.0, rel=1e-12)


def test_refinement_keeps_norm():
    a = tp.analytic_bound_state(M0, A0, 0.0, box=12.0, n=120)
    b = tp.analytic_bound_state(M0, A0, 0.0, box=12.0, n=480)
    assert abs(a.norm - 1) < 1e-6 and abs(b.norm - 1) < 1e-6
    assert b.quadrature_error < a.quadrature_error


@pytest.mark.parametrize("m0, a0", [(1.0, 2.0), (-1.0, -2.0), (1.0, -2.0)])
def test_analytic_regime(m0, a0):
    with pytest.raises(RegimeError):
        tp.analytic_bound_state(m0, a0, 0.0, box=100.0, n=10)


def test_box_too_small():
    with pytest.raises(ParameterError):
        tp.analytic_bound_state(M0, A0, 0.0, box=4.0, n=10)


def test_density_map_properties():
    res = tp.analytic_bound_state(-1.08e-6, 1.31, 0.0, box=12.0 / 7.074e-7, n=101, L=1.0)
    u, dens = tp.density_map(res)
    assert np.array_equal(dens, dens.T)
    assert np.all(np.argmax(dens, axis=1) == np.arange(dens.shape[0]))
    # monotone decay away from the ridge along each row
    for i in (0, 50, 100):
        row = dens[i]
        assert np.all(np.diff(row[i:]) <= 0) and np.all(np.diff(row[: i + 1]) >= 0)
    # density falls by 1/e at |z1 - z2| = 1/(2 zeta0)
    z = res.z
    j = np.argmin(np.abs(z - (z[0] + 1 / (2 * res.zeta0))))
    expected = math.exp(-2 * res.zeta0 * (z[j] - z[0]))
    assert dens[0, j] / dens[0, 0] == pytest.approx(expected, rel=1e-12)


def test_density_map_axes_in_units_of_L():
    res = tp.analytic_bound_state(M0, A0, 0.0, box=12.0, n=24, L=4.0)
    u, _ = tp.density_map(res)
    np.testing.assert_allclose(u, res.z / 4.0)


# --- lattice ---------------------------------------------------------------------------

def test_lattice_structure():
    lat = tp.relative_lattice(M0, A0, 11, 0.1)
    H = lat.dense()
    assert np.array_equal(H, H.T)
    # exactly one site carries the well
    assert np.count_nonzero(lat.diag != lat.diag[0]) == 1
    assert lat.diag[5] - lat.diag[0] == pytest.approx(lat.well)
    v = np.random.default_rng(0).normal(size=11)
    np.testing.assert_allclose(lat.matvec(v), H @ v, rtol=1e-14)
    # physical kinetic operator is sign * (folded); folded kinetic part is PSD
    kin = H - np.diag(lat.diag - 2 * lat.kinetic)
    assert np.linalg.eigvalsh(kin).min() >= -1e-9


def test_lattice_matches_dense_small():
    m0, a0, n = -1.0, 2.0, 301
    dx = 0.015
    lat = tp.lattice_ground_state(m0, a0, n, dx, check_resolution=False)
    lowest = np.linalg.eigvalsh(tp.relative_lattice(m0, a0, n, dx).dense())[0]
    assert lat.E_rel == pytest.approx(-lowest, rel=1e-10)


def test_lattice_ground_state_accuracy():
    res = tp.lattice_ground_state(M0, A0, 6001, 0.005)
    assert res.E_rel == pytest.approx(1.0, rel=1e-4)
    assert res.zeta0_fit == pytest.approx(1.0, rel=1e-2)
    assert np.sum(res.phi**2) * res.dx == pytest.approx(1.0, rel=1e-12)


def test_lattice_even_parity():
    res = tp.lattice_ground_state(M0, A0, 4001, 0.01)
    np.testing.assert_allclose(res.phi, res.phi[::-1], atol=1e-10 * res.phi.max())
    assert res.phi.argmax() == res.n // 2


def test_lattice_converges_at_three_resolutions():
    errs = []
    for dx in (0.016, 0.008, 0.004):
        n = int(30 / dx) | 1
        errs.append(abs(tp.lattice_ground_state(M0, A0, n, dx).E_rel - 1.0))
    assert errs[0] > errs[1] > errs[2]
    # single-site delta: sinh(kappa dx) = zeta0 dx, so E error -> (zeta0 dx)^2 / 4
    assert errs[2] == pytest.approx((0.004) ** 2 / 4, rel=1e-2)


def test_repulsive_has_no_bound_state():
    with pytest.raises(RegimeError):
        tp.lattice_ground_state(M0, -A0, 2001, 0.01)
    lat = tp.relative_lattice(M0, -A0, 2001, 0.01)
    assert tp.count_below(lat, 0.0) == 0


def test_lattice_in_units_of_L(coeffs):
    from eit_qnlse.reduction import effective_masses

    m = effective_masses(coeffs, 1.0)
    dx = 0.004 / m.zeta0
    res = tp.lattice_ground_state(m.m0, m.a0, int(30 / 0.004) | 1, dx)
    assert res.zeta0_fit == pytest.approx(m.zeta0, rel=1e-2)
    assert res.E_rel == pytest.approx(-m.m0 * m.a0**2 / 4, rel=1e-2)


@pytest.mark.parametrize("n, dx", [(100, 0.01), (3001, 0.05), (101, 0.01), (2001, 0.0)])
def test_lattice_preconditions(n, dx):
    with pytest.raises(ParameterError):
        tp.lattice_ground_state(M0, A0, n, dx)


# --- centre-of-mass factorisation --------------------------------------------------------

def _full_two_body(m0, a0, n, dx):
    """Dense periodic n x n two-body lattice: both particles hop, contact on x1 == x2."""
    H = np.zeros((n * n, n * n))
    alpha = -1.0 / (2.0 * m0 * dx**2)
    idx = lambda i, j: (i % n) * n + (j % n)
    for i in range(n):
        for j in range(n):
            a = idx(i, j)
            H[a, a] += -4.0 * alpha + (a0 / dx if i == j else 0.0)
            for b in (idx(i + 1, j), idx(i - 1, j), idx(i, j + 1), idx(i, j - 1)):
                H[a, b] += alpha
    return H


@pytest.mark.parametrize("m0, a0, n", [(-1.0, 2.0, 24), (0.7, -1.3, 17), (-0.5, 0.8, 30)])
def test_com_factorisation(m0, a0, n):
    dx = 0.3
    full = np.linalg.eigvalsh(_full_two_body(m0, a0, n, dx))
    sectors = tp.com_sector_spectrum(m0, a0, n, dx)
    np.testing.assert_allclose(sectors, full, atol=1e-8 * np.abs(full).max())
