import math
from dataclasses import fields, replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eit_qnlse.errors import ConfigError, ParameterError, UnitMismatchError
from eit_qnlse.params import (EIT_DEPHASING_FLOOR, MediumParams, complex_detunings,
                              dumps_config, eit_condition, load_config, loads_config,
                              rb87_preset, save_config)

TWO_PI = 2.0 * math.pi


def test_preset_values(preset):
    assert preset.omega_c == TWO_PI * 28e6
    assert preset.gamma13 == preset.gamma23 == TWO_PI * 3e6
    assert preset.delta3 == TWO_PI * 60e6
    assert preset.delta2 == TWO_PI * 1.2e6
    assert preset.atom_density == 8e10
    assert preset.gamma21_deph == 0.0
    assert preset.kappa13 is None and preset.gp_abs2 is None
    assert preset.k_p == pytest.approx(8.0554e4, rel=1e-4)


def test_preset_gamma31(preset):
    assert preset.gamma31 == pytest.approx(TWO_PI * 3e6, rel=1e-15)


def test_preset_omega_c_squared(preset):
    assert preset.omega_c_abs2 == pytest.approx(3.095e16, rel=1e-3)


def test_detunings_preset(preset):
    d = complex_detunings(preset)
    assert d.d31 == pytest.approx(TWO_PI * complex(60e6, 3e6), rel=1e-15)
    assert d.d21 == TWO_PI * 1.2e6
    prod = d.d21 * d.d31
    assert prod.real == pytest.approx(2.843e15, rel=1e-3)
    assert prod.imag == pytest.approx(1.421e14, rel=1e-3)


def test_lossless_detunings_are_real(preset):
    p = replace(preset, gamma13=0.0, gamma23=0.0)
    d = complex_detunings(p)
    assert d.d21.imag == 0.0 and d.d31.imag == 0.0


@pytest.mark.parametrize("field, value", [
    ("gamma13", -1.0), ("gamma21_deph", -1e-3), ("atom_density", 0.0),
    ("cell_length", -1.0), ("k_p", 0.0), ("delta2", math.nan), ("omega_c", complex(math.inf, 0)),
])
def test_invariant_violations(preset, field, value):
    with pytest.raises(ParameterError):
        replace(preset, **{field: value})


def test_kappa_gp_consistency(preset):
    p = replace(preset, kappa13=4.4e9, gp_abs2=2.3e9)
    assert p.inferred_atom_number == pytest.approx(4.4e9 * p.c_light / 2.3e9, rel=1e-12)


def test_round_trip_file(tmp_path, preset):
    path = tmp_path / "rb.cfg"
    save_config(preset, path)
    assert load_config(path) == preset


finite = st.floats(min_value=1e-3, max_value=1e12, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(g13=finite, g23=finite, d2=st.floats(-1e12, 1e12), d3=st.floats(-1e12, 1e12),
       oc_re=st.floats(-1e12, 1e12), oc_im=st.floats(-1e12, 1e12), na=finite,
       kappa=st.one_of(st.none(), finite), gp=st.one_of(st.none(), finite))
def test_round_trip_bit_exact(g13, g23, d2, d3, oc_re, oc_im, na, kappa, gp):
    p = MediumParams(gamma13=g13, gamma23=g23, delta2=d2, delta3=d3,
                     omega_c=complex(oc_re, oc_im), atom_density=na, kappa13=kappa, gp_abs2=gp)
    q = loads_config(dumps_config(p))
    for f in fields(p):
        a, b = getattr(p, f.name), getattr(q, f.name)
        assert a == b and repr(a) == repr(b), f.name


def test_units_are_converted():
    text = """
    gamma13 = 3 MHz_x2pi
    gamma23 = 3 MHz_x2pi   # trailing comment
    delta2 = 1.2 MHz_x2pi
    delta3 = 60 MHz_x2pi
    omega_c = 28 MHz_x2pi
    atom_density = 8e10 cm-3
    gamma21_deph = 1 kHz_x2pi
    """
    p = loads_config(text)
    assert p.delta3 == pytest.approx(TWO_PI * 60e6, rel=1e-15)
    assert p.gamma21_deph == pytest.approx(TWO_PI * 1e3, rel=1e-15)


def _preset_text_without(key):
    return "\n".join(line for line in dumps_config(rb87_preset()).splitlines()
                     if not line.startswith(key + " "))


def test_missing_field_named():
    with pytest.raises(ConfigError, match="delta3") as exc:
        loads_config(_preset_text_without("delta3"))
    assert exc.value.field == "delta3"


def test_negative_gamma_in_file():
    text = dumps_config(rb87_preset()).replace(
        f"gamma13 = {TWO_PI * 3e6!r}", "gamma13 = -1.0")
    with pytest.raises(ParameterError, match="gamma13"):
        loads_config(text)


def test_unit_mismatch_has_line_and_field():
    text = dumps_config(rb87_preset()).replace("atom_density = 80000000000.0 cm-3",
                                               "atom_density = 8e10 rad_s")
    with pytest.raises(UnitMismatchError) as exc:
        loads_config(text)
    assert exc.value.field == "atom_density"
    assert exc.value.line is not None
    assert "atom_density" in str(exc.value)


@pytest.mark.parametrize("extra, msg", [
    ("bogus = 1 cm", "unknown"),
    ("delta2 = 1 rad_s", "duplicate"),
    ("delta2 1 rad_s", "key = value unit"),
    ("kappa13 = abc cm-1_s-1", "cannot parse"),
])
def test_parse_errors(extra, msg):
    with pytest.raises(ConfigError, match=msg):
        loads_config(dumps_config(rb87_preset()) + extra + "\n")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "nope.cfg")


def test_eit_condition_with_dephasing(preset):
    p = replace(preset, gamma21_deph=TWO_PI * 1e3)
    e = eit_condition(p)
    assert e.ratio == pytest.approx(2.6e5, rel=0.02)
    assert e.satisfied and not e.floor_applied


def test_eit_condition_zero_control(preset):
    e = eit_condition(replace(preset, omega_c=0j))
    assert e.ratio == 0.0 and not e.satisfied


def test_eit_condition_floor(preset):
    e = eit_condition(preset)
    assert e.floor_applied
    assert e.dephasing_used == EIT_DEPHASING_FLOOR
    assert e.ratio == pytest.approx(preset.omega_c_abs2 / (EIT_DEPHASING_FLOOR * preset.gamma31))
