"""Slow-light EIT envelope model: linear dispersion, Kerr extraction,
bright solitons, split-step propagation and the two-photon bound state."""

__version__ = "0.1.0"

from .params import MediumParams, rb87_preset, load_config, save_config  # noqa: E402
from .reduction import calibrate, nlse_coefficients, effective_masses  # noqa: E402

__all__ = ["MediumParams", "rb87_preset", "load_config", "save_config", "calibrate",
           "nlse_coefficients", "effective_masses", "__version__"]
