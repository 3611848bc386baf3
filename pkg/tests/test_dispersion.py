import math
from dataclasses import replace

import numpy as np
import pytest

from eit_qnlse import dispersion as disp
from eit_qnlse.errors import ParameterError, PoleError
from eit_qnlse.params import complex_detunings

from conftest import KAPPA13_PRESET, random_eit_params

TWO_PI = 2.0 * math.pi


EPS = np.finfo(float).eps


def _fd_first(p, h):
    return (disp.linear_dispersion(h, p) - disp.linear_dispersion(-h, p)) / (2 * h)


def _fd_second(p, h):
    Km, K0, Kp = (disp.linear_dispersion(w, p) for w in (-h, 0.0, h))
    return (Kp - 2 * K0 + Km) / h**2


def _steps(p):
    # step ~ eps^(1/3) (first) and eps^(1/4) (second) times the line scale |Omega_c|
    scale = abs(p.omega_c)
    return EPS ** (1 / 3) * scale, EPS ** 0.25 * scale


# --- big_d -------------------------------------------------------------------

def test_big_d_at_dark_point(preset):
    d = complex_detunings(preset)
    assert disp.big_d(-d.d21, d, preset.omega_c) == preset.omega_c_abs2


def test_big_d_no_control(preset):
    d = complex_detunings(preset)
    assert disp.big_d(0.0, d, 0.0) == -d.d21 * d.d31


def test_big_d_preset(preset):
    D = disp.big_d(0.0, complex_detunings(preset), preset.omega_c)
    assert D.real == pytest.approx(2.811e16, rel=1e-3)
    assert D.imag == pytest.approx(-1.421e14, rel=1e-3)


# --- linear dispersion ---------------------------------------------------------

def test_dark_resonance_exact(cal_params):
    w = -cal_params.delta2
    assert disp.linear_dispersion(w, cal_params) == w / cal_params.c_light


def test_empty_medium(preset):
    p = replace(preset, kappa13=0.0)
    w = np.linspace(-1e8, 1e8, 11)
    np.testing.assert_array_equal(disp.linear_dispersion(w, p), w / p.c_light)
    t = disp.taylor_coefficients(p)
    assert t.K1 == 1.0 / p.c_light and t.K2 == 0.0 and t.Vg == p.c_light


def test_preset_value_at_zero(cal_params):
    # direct complex evaluation of kappa d21 / (|Oc|^2 - d21 d31)
    d21 = complex(TWO_PI * 1.2e6, 0.0)
    d31 = complex(TWO_PI * 60e6, TWO_PI * 3e6)
    expected = KAPPA13_PRESET * d21 / ((TWO_PI * 28e6) ** 2 - d21 * d31)
    K = disp.linear_dispersion(0.0, cal_params)
    assert K == pytest.approx(expected, rel=1e-9)
    assert K == pytest.approx(1.1840618080025587 + 0.005986829366305073j, rel=1e-9)


def test_requires_kappa(preset):
    with pytest.raises(ParameterError, match="calibrate"):
        disp.linear_dispersion(0.0, preset)


def test_pole_error(preset):
    # lossless medium with D(0) = 0: |Oc|^2 = Delta2 * Delta3
    p = replace(preset, gamma13=0.0, gamma23=0.0, kappa13=1.0,
                omega_c=math.sqrt(preset.delta2 * preset.delta3))
    with pytest.raises(PoleError):
        disp.linear_dispersion(0.0, p)
    with pytest.raises(PoleError):
        disp.taylor_coefficients(p)


# --- Taylor coefficients -------------------------------------------------------

def test_calibrated_k2(cal_params):
    assert disp.taylor_coefficients(cal_params).K2.real == pytest.approx(4.82e-15, rel=1e-9)


def test_vg_slow_light(cal_params):
    t = disp.taylor_coefficients(cal_params)
    assert t.Vg == 1.0 / t.K1.real
    assert 0 < t.Vg < cal_params.c_light
    assert t.Vg / cal_params.c_light == pytest.approx(1.925e-4, rel=1e-3)


@pytest.mark.parametrize("seed", range(20))
def test_closed_form_matches_finite_difference(seed):
    p = random_eit_params(np.random.default_rng(seed))
    t = disp.taylor_coefficients(p)
    h1, h2 = _steps(p)
    K1_fd, K2_fd = _fd_first(p, h1), _fd_second(p, h2)
    assert abs(t.K1 - K1_fd) / abs(K1_fd) < 1e-6
    assert abs(t.K2 - K2_fd) / abs(K2_fd) < 1e-6


@pytest.mark.parametrize("seed", range(20))
def test_k1_fixed_step(seed):
    p = random_eit_params(np.random.default_rng(seed))
    K1_fd = _fd_first(p, 1e3)
    assert abs(disp.taylor_coefficients(p).K1 - K1_fd) / abs(K1_fd) < 1e-6


def test_fixed_step_on_preset(cal_params):
    t = disp.taylor_coefficients(cal_params)
    assert abs(t.K1 - _fd_first(cal_params, 1e3)) / abs(t.K1) < 1e-6
    assert abs(t.K2 - _fd_second(cal_params, 1e3)) / abs(t.K2) < 1e-6


# --- scan ----------------------------------------------------------------------

def test_scan_contract(cal_params):
    prof = disp.transparency_scan(cal_params, -1e8, 2e8, 101)
    assert prof.omega.size == prof.K.size == 101
    assert prof.omega[0] == -1e8 and prof.omega[-1] == 2e8
    assert np.all(np.diff(prof.omega) > 0)


def test_scan_empty_medium(preset):
    prof = disp.transparency_scan(replace(preset, kappa13=0.0), -1e8, 1e8, 51)
    assert np.all(prof.K.imag == 0.0)


def test_transparency_window(cal_params):
    prof = disp.transparency_scan(cal_params, -TWO_PI * 100e6, TWO_PI * 100e6, 4001)
    assert prof.in_window
    lo, hi = prof.peak_omegas
    # the window sits at the two-photon resonance omega = -Delta2
    assert abs(prof.omega_min_absorption + cal_params.delta2) <= 2 * (prof.omega[1] - prof.omega[0])
    assert disp.linear_dispersion(0.0, cal_params).imag < 1e-3 * prof.K.imag.max()
    assert lo < 0 < hi


def test_passivity(cal_params):
    prof = disp.transparency_scan(cal_params, -TWO_PI * 200e6, TWO_PI * 200e6, 20001)
    assert prof.K.imag.min() >= -1e-12


@pytest.mark.parametrize("kw", [dict(n=1), dict(omega_min=1.0, omega_max=1.0)])
def test_scan_bad_input(cal_params, kw):
    args = dict(omega_min=-1.0, omega_max=1.0, n=10) | kw
    with pytest.raises(ParameterError):
        disp.transparency_scan(cal_params, **args)


# --- first-order coherences ----------------------------------------------------

@pytest.mark.parametrize("A", [1.0, 0.3 - 2.0j, 1e5j])
def test_coherence_ratio(cal_params, A):
    s21, s31 = disp.first_order_coherences(cal_params, A)
    d21 = complex_detunings(cal_params).d21
    assert s21 / s31 == pytest.approx(-np.conj(cal_params.omega_c) / d21, rel=1e-13)


def test_coherence_zero_field(cal_params):
    assert disp.first_order_coherences(cal_params, 0.0) == (0.0, 0.0)


def test_coherence_values(cal_params):
    gp = math.sqrt(cal_params.gp_abs2)
    d = complex_detunings(cal_params)
    den = cal_params.omega_c_abs2 - d.d21 * d.d31
    s21, s31 = disp.first_order_coherences(cal_params, 1.0)
    assert s21 == pytest.approx(-gp * np.conj(cal_params.omega_c) / den, rel=1e-13)
    assert s31 == pytest.approx(gp * d.d21 / den, rel=1e-13)
    assert s31 == pytest.approx(1.2954983272322079e-05 + 6.550272441061727e-08j, rel=1e-6)
