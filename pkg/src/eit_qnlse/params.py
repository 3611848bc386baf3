"""Physical parameters of the Lambda-type EIT medium.

Units are fixed throughout the package: angular frequencies in rad/s,
lengths in cm, times in s, densities in cm^-3.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError, ParameterError, UnitMismatchError

TWO_PI = 2.0 * math.pi
C_LIGHT_CM_S = 2.998e10
RB87_D2_WAVELENGTH_CM = 780e-7

# Floor for the ground-state dephasing in the EIT ratio (rad/s).
EIT_DEPHASING_FLOOR = TWO_PI * 1.0


@dataclass(frozen=True)
class ComplexDetunings:
    d21: complex
    d31: complex


@dataclass(frozen=True)
class MediumParams:
    """All constants of the three-level medium.

    ``kappa13`` (|g_p|^2 N / c, cm^-1 s^-1) and ``gp_abs2`` (|g_p|^2, s^-2)
    are not quoted by any experiment directly; they stay ``None`` until
    :func:`eit_qnlse.reduction.calibrate` fills them in.
    """

    gamma13: float
    gamma23: float
    delta2: float
    delta3: float
    omega_c: complex
    atom_density: float
    gamma21_deph: float = 0.0
    kappa13: float | None = None
    gp_abs2: float | None = None
    k_p: float = TWO_PI / RB87_D2_WAVELENGTH_CM
    cell_length: float = 1.0
    c_light: float = C_LIGHT_CM_S

    def __post_init__(self):
        object.__setattr__(self, "omega_c", complex(self.omega_c))
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            parts = (v.real, v.imag) if isinstance(v, complex) else (v,)
            if not all(math.isfinite(x) for x in parts):
                raise ParameterError(f"{f.name} must be finite, got {v!r}")
        for name in ("gamma13", "gamma23", "gamma21_deph"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        for name in ("atom_density", "cell_length", "k_p", "c_light"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.kappa13 is not None and self.kappa13 < 0:
            raise ParameterError("kappa13 must be >= 0")
        if self.gp_abs2 is not None and self.gp_abs2 <= 0:
            raise ParameterError("gp_abs2 must be > 0")
        if self.kappa13 is not None and self.gp_abs2 is not None and self.kappa13 > 0:
            n_eff = self.kappa13 * self.c_light / self.gp_abs2
            if not (n_eff > 0 and math.isfinite(n_eff)):
                raise ParameterError("kappa13 * c / gp_abs2 must be a positive atom number")

    @property
    def gamma31(self) -> float:
        return 0.5 * (self.gamma13 + self.gamma23)

    @property
    def gamma21(self) -> float:
        return self.gamma21_deph

    @property
    def omega_c_abs2(self) -> float:
        return abs(self.omega_c) ** 2

    @property
    def calibrated(self) -> bool:
        return self.kappa13 is not None and self.gp_abs2 is not None

    @property
    def inferred_atom_number(self) -> float | None:
        """N = kappa13 * c / |g_p|^2."""
        if not self.calibrated or self.kappa13 == 0:
            return None
        return self.kappa13 * self.c_light / self.gp_abs2

    @property
    def inferred_volume(self) -> float | None:
        n = self.inferred_atom_number
        return None if n is None else n / self.atom_density


def rb87_preset() -> MediumParams:
    """Cold Rb-87 Lambda system on the D2 line.

    Gamma13 = Gamma23 = 2pi x 3 MHz, Delta3 = 2pi x 60 MHz, Delta2 = 2pi x 1.2 MHz,
    N_a = 8e10 cm^-3, Omega_c = 2pi x 28 MHz; couplings left uncalibrated.
    """
    return MediumParams(
        gamma13=TWO_PI * 3e6,
        gamma23=TWO_PI * 3e6,
        delta2=TWO_PI * 1.2e6,
        delta3=TWO_PI * 60e6,
        omega_c=complex(TWO_PI * 28e6),
        atom_density=8e10,
    )


def complex_detunings(p: MediumParams) -> ComplexDetunings:
    """d21 = Delta2 + i gamma21, d31 = Delta3 + i gamma31."""
    d21 = complex(p.delta2, p.gamma21)
    d31 = complex(p.delta3, p.gamma31)
    for d in (d21, d31):
        if not (math.isfinite(d.real) and math.isfinite(d.imag)):
            raise ParameterError("non-finite detuning")
    return ComplexDetunings(d21, d31)


@dataclass(frozen=True)
class EITCondition:
    ratio: float
    satisfied: bool
    threshold: float
    floor_applied: bool
    dephasing_used: float = field(default=0.0)


def eit_condition(p: MediumParams, threshold: float = 100.0,
                  floor: float = EIT_DEPHASING_FLOOR) -> EITCondition:
    """Ratio |Omega_c|^2 / (max(gamma21, floor) * gamma31) against ``threshold``."""
    g21 = max(p.gamma21, floor)
    denom = g21 * p.gamma31
    ratio = p.omega_c_abs2 / denom if denom > 0 else math.inf
    if p.omega_c_abs2 == 0:
        ratio = 0.0
    return EITCondition(ratio=ratio, satisfied=ratio > threshold, threshold=threshold,
                        floor_applied=p.gamma21 < floor, dephasing_used=g21)


# --- config file ----------------------------------------------------------

_FREQ_UNITS = {"rad_s": 1.0, "Hz_x2pi": TWO_PI, "kHz_x2pi": TWO_PI * 1e3,
               "MHz_x2pi": TWO_PI * 1e6, "GHz_x2pi": TWO_PI * 1e9}

# field -> (accepted unit suffixes with scale to base unit, canonical suffix)
_UNITS: dict[str, tuple[dict[str, float], str]] = {
    "gamma13": (_FREQ_UNITS, "rad_s"),
    "gamma23": (_FREQ_UNITS, "rad_s"),
    "gamma21_deph": (_FREQ_UNITS, "rad_s"),
    "delta2": (_FREQ_UNITS, "rad_s"),
    "delta3": (_FREQ_UNITS, "rad_s"),
    "omega_c": (_FREQ_UNITS, "rad_s"),
    "atom_density": ({"cm-3": 1.0}, "cm-3"),
    "kappa13": ({"cm-1_s-1": 1.0}, "cm-1_s-1"),
    "gp_abs2": ({"s-2": 1.0}, "s-2"),
    "k_p": ({"cm-1": 1.0}, "cm-1"),
    "cell_length": ({"cm": 1.0}, "cm"),
    "c_light": ({"cm_s": 1.0}, "cm_s"),
}
_REQUIRED = ("gamma13", "gamma23", "delta2", "delta3", "omega_c", "atom_density")
_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)\s+(\S+)\s*$")


def _format_value(v) -> str:
    if isinstance(v, complex):
        return f"{v.real!r}{'+' if math.copysign(1.0, v.imag) > 0 else '-'}{abs(v.imag)!r}j"
    return repr(float(v))


def dumps_config(p: MediumParams) -> str:
    lines = ["# eit-qnlse medium parameters (base units)"]
    for f in fields(p):
        v = getattr(p, f.name)
        if v is None:
            continue
        lines.append(f"{f.name} = {_format_value(v)} {_UNITS[f.name][1]}")
    return "\n".join(lines) + "\n"


def save_config(p: MediumParams, path: str | Path) -> None:
    Path(path).write_text(dumps_config(p), encoding="utf-8")


def loads_config(text: str) -> MediumParams:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if m is None:
            raise ConfigError("expected 'key = value unit'", line=lineno)
        key, sval, unit = m.groups()
        if key not in _UNITS:
            raise ConfigError("unknown key", line=lineno, field=key)
        if key in values:
            raise ConfigError("duplicate key", line=lineno, field=key)
        scales, canonical = _UNITS[key]
        if unit not in scales:
            raise UnitMismatchError(
                f"unit {unit!r} not valid here; expected one of {sorted(scales)}",
                line=lineno, field=key)
        try:
            num = complex(sval) if key == "omega_c" else float(sval)
        except ValueError:
            raise ConfigError(f"cannot parse number {sval!r}", line=lineno, field=key) from None
        scale = scales[unit]
        values[key] = num if scale == 1.0 else num * scale
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required field(s): {', '.join(missing)}", field=missing[0])
    return MediumParams(**values)


def load_config(path: str | Path) -> MediumParams:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    return loads_config(text)
