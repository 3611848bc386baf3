import math

import numpy as np
import pytest

from eit_qnlse import calibrate, nlse_coefficients, rb87_preset
from eit_qnlse.params import MediumParams

TWO_PI = 2.0 * math.pi

# Frozen from the closed-form K2 solve and the Bloch ladder fit on the preset.
KAPPA13_PRESET = 4.414322836943209e9
GP_ABS2_PRESET = 2.332669e9

# Outcome lines for the acceptance criteria, filled by tests/test_acceptance.py.
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def preset():
    return rb87_preset()


@pytest.fixture(scope="session")
def calibrated(preset):
    p, report = calibrate(preset)
    return p, report


@pytest.fixture(scope="session")
def cal_params(calibrated):
    return calibrated[0]


@pytest.fixture(scope="session")
def coeffs(cal_params):
    return nlse_coefficients(cal_params)


def random_eit_params(rng: np.random.Generator, kappa13: float | None = None) -> MediumParams:
    """A random but EIT-like medium: strong control, far-detuned excited state."""
    return MediumParams(
        gamma13=TWO_PI * rng.uniform(1e6, 6e6),
        gamma23=TWO_PI * rng.uniform(1e6, 6e6),
        gamma21_deph=TWO_PI * rng.uniform(0.0, 5e3),
        delta2=TWO_PI * rng.uniform(-3e6, 3e6),
        delta3=TWO_PI * rng.uniform(-100e6, 100e6),
        omega_c=TWO_PI * rng.uniform(10e6, 40e6) * np.exp(1j * rng.uniform(0, TWO_PI)),
        atom_density=rng.uniform(1e10, 1e11),
        kappa13=kappa13 if kappa13 is not None else rng.uniform(1e9, 1e10),
    )


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
