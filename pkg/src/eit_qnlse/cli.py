"""Command-line front end.

Every subcommand takes the medium config as its positional argument, writes
CSV/JSON into ``--out`` and a ``<command>_manifest.json`` listing them.
Exit codes: 0 success, 2 parameter error, 3 numerical/regime error.
"""
from __future__ import annotations

import argparse
import math
import re
import sys
import time
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import __version__
from . import dispersion as disp
from . import propagator as prop
from . import soliton as sol
from . import twophoton as tp
from .errors import NumericError, ParameterError
from .io import environment_versions, read_csv, sha256_text, write_csv, write_json
from .params import MediumParams, dumps_config, eit_condition, load_config, save_config
from .reduction import (DEFAULT_K2_TARGET, DEFAULT_W_TARGET, calibrate, dephasing_sensitivity,
                        effective_masses, nlse_coefficients)

EXIT_OK, EXIT_PARAM, EXIT_NUMERIC = 0, 2, 3


class _Run:
    """Collects outputs and writes the manifest."""

    def __init__(self, command: str, args: argparse.Namespace, params: MediumParams):
        self.command = command
        self.args = args
        self.params = params
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.outputs: list[str] = []
        self.extra: dict = {}
        self.start = time.perf_counter()

    def path(self, name: str) -> Path:
        self.outputs.append(name)
        return self.out / name

    def finish(self) -> Path:
        snapshot = dumps_config(self.params)
        flags = {k: v for k, v in sorted(vars(self.args).items())
                 if k not in ("func", "config", "out")}
        manifest = {
            "schema_version": 1,
            "command": self.command,
            "flags": flags,
            "config_hash": sha256_text(snapshot),
            "parameters": {f.name: getattr(self.params, f.name) for f in fields(self.params)},
            "tool_version": __version__,
            "versions": environment_versions(),
            "outputs": list(self.outputs),
            "wall_time_s": time.perf_counter() - self.start,
            **self.extra,
        }
        name = f"{self.command}_manifest.json"
        return write_json(self.out / name, manifest)


def _load(args, require_calibrated: bool = False) -> tuple[MediumParams, bool]:
    p = load_config(args.config)
    if p.calibrated:
        return p, False
    if require_calibrated:
        raise ParameterError("kappa13/gp_abs2 not set; run `eit-qnlse calibrate` first")
    p, _ = calibrate(p)
    return p, True


# --- subcommands -------------------------------------------------------------

def cmd_dispersion(args) -> int:
    p, auto = _load(args, args.require_calibrated)
    run = _Run("dispersion", args, p)
    run.extra["auto_calibrated"] = auto
    prof = disp.transparency_scan(p, args.omega_min, args.omega_max, args.n)
    write_csv(run.path("dispersion.csv"), ["omega_rad_s", "ReK_cm-1", "ImK_cm-1"],
              [prof.omega, prof.K.real, prof.K.imag])
    t = disp.taylor_coefficients(p)
    eit = eit_condition(p)
    write_json(run.path("dispersion_summary.json"), {
        "K0": t.K0, "K1": t.K1, "K2": t.K2, "Vg": t.Vg, "Vg_over_c": t.Vg / p.c_light,
        "omega_min_absorption": prof.omega_min_absorption,
        "peak_omegas": prof.peak_omegas, "in_window": prof.in_window,
        "eit_ratio": eit.ratio, "eit_satisfied": eit.satisfied,
        "eit_floor_applied": eit.floor_applied,
        "gamma21_sensitivity": dephasing_sensitivity(p),
    })
    run.finish()
    return EXIT_OK


def cmd_calibrate(args) -> int:
    p = load_config(args.config)
    q, report = calibrate(p, args.k2_target, args.w_target)
    run = _Run("calibrate", args, q)
    save_config(q, run.path("calibrated.cfg"))
    write_json(run.path("calibration_report.json"), report.to_dict())
    run.finish()
    return EXIT_OK


def _parse_plot_grid(raw: str) -> tuple[int, int]:
    try:
        ns, nt = (int(x) for x in raw.lower().split("x"))
    except ValueError:
        raise ParameterError(f"--plot-grid must look like 201x41, got {raw!r}") from None
    if ns < 2 or nt < 1:
        raise ParameterError("--plot-grid sizes too small")
    return ns, nt


def cmd_soliton(args) -> int:
    ns, nt = _parse_plot_grid(args.plot_grid)
    p, auto = _load(args)
    coeffs = nlse_coefficients(p)
    sp = sol.soliton_params(coeffs, eta0=args.eta0, xi0=args.xi0, t0=args.t0)
    run = _Run("soliton", args, p)
    run.extra["auto_calibrated"] = auto

    s = np.linspace(-args.s_range, args.s_range, ns)
    tau = np.linspace(0.0, args.tau_max, nt)
    surf = sol.surface(sp, s, tau)
    S, TAU = np.meshgrid(s, tau)
    write_csv(run.path("soliton_surface.csv"), ["s", "t_over_t0", "absB"], [S, TAU, surf])

    z = s * sp.l0
    B = sol.soliton_envelope(sp, z, 0.0)
    write_csv(run.path("soliton_field.csv"), ["z_cm", "t_s", "ReB", "ImB", "absB"],
              [z, np.zeros_like(z), B.real, B.imag, np.abs(B)])

    lam = 2.0 * math.pi / p.k_p
    zc = sp.z0 + np.arange(-100, 101) * (lam / 20.0)
    Ep = sol.probe_field(sp, p, zc, 0.0, K0=coeffs.K0.real)
    write_csv(run.path("probe_field.csv"), ["z_cm", "t_s", "Ep"], [zc, np.zeros_like(zc), Ep])

    table = {
        "eta0": sp.eta0, "xi0": sp.xi0, "t0_s": sp.t0, "B0": sp.B0, "l0_cm": sp.l0,
        "Vg_cm_s": sp.Vg, "Vs_cm_s": sp.Vs, "Vg_over_c": sp.Vg / p.c_light,
        "Vs_over_c": sp.Vs / p.c_light, "K2": sp.K2, "W": sp.W,
        "peak_envelope": sp.amplitude, "width_cm": sp.width,
        "dispersion_time_s": sp.dispersion_time, "Ep0_V_m": sol.probe_amplitude(sp, p),
    }
    with run.path("soliton_table.csv").open("w", encoding="utf-8") as fh:
        fh.write("quantity,value\n")
        for k in sorted(table):
            fh.write(f"{k},{float(table[k])!r}\n")
    write_json(run.path("soliton_table.json"), table)
    run.finish()
    return EXIT_OK


def _initial_field(args, sp: sol.SolitonParams):
    if args.init == "soliton":
        return sol.comoving_envelope(sp)
    if args.init == "sech":
        amp = args.sech_amplitude * sp.amplitude
        w = sp.width
        return lambda xi: amp / np.cosh(np.clip(np.asarray(xi) / w, -700, 700))
    if args.init_file is None:
        raise ParameterError("--init file needs --init-file PATH (columns xi_cm,ReB,ImB)")
    try:
        header, data = read_csv(args.init_file)
    except (OSError, ValueError, IndexError) as exc:
        raise ParameterError(f"cannot read init file: {exc}") from None
    if header[:3] != ["xi_cm", "ReB", "ImB"]:
        raise ParameterError("init file header must start with xi_cm,ReB,ImB")
    x, re, im = data[:, 0], data[:, 1], data[:, 2]
    return lambda xi: (np.interp(xi, x, re, left=0.0, right=0.0)
                       + 1j * np.interp(xi, x, im, left=0.0, right=0.0))


def cmd_propagate(args) -> int:
    if args.grid < 64 or args.grid & (args.grid - 1):
        raise ParameterError("--grid must be a power of two >= 64")
    p, auto = _load(args)
    coeffs = nlse_coefficients(p)
    sp = sol.soliton_params(coeffs, eta0=args.eta0, xi0=args.xi0, t0=args.t0)
    T = args.T if args.T is not None else 5.0 * sp.dispersion_time
    dt = args.dt if args.dt is not None else T / 1e4
    if not (T > 0 and dt > 0 and dt <= T and math.isfinite(dt)):
        raise ParameterError(f"need 0 < dt <= T (dt={dt!r}, T={T!r})")
    run = _Run("propagate", args, p)
    grid = prop.make_grid(args.grid, args.span * sp.width, _initial_field(args, sp), coeffs)
    traj, final = prop.propagate(grid, T, dt, sample_every=args.sample_every)
    write_csv(run.path("trajectory.csv"),
              ["t_s", "norm", "momentum", "peak_xi_cm", "peak_abs", "rms_width_cm"],
              [traj.column(c) for c in ("t", "norm", "momentum", "peak_xi", "peak_abs",
                                        "rms_width")])
    v = final.values
    write_csv(run.path("final_field.csv"), ["xi_cm", "ReB", "ImB", "absB"],
              [final.xi, v.real, v.imag, np.abs(v)])
    norms = traj.column("norm")
    run.extra.update({
        "auto_calibrated": auto,
        "grid": {"n": grid.n, "xi_span_cm": grid.xi_span, "dx_cm": grid.dx},
        "dt_s": T / max(1, math.ceil(T / dt - 1e-9)), "T_s": T,
        "norm_drift": float(abs(norms[-1] / norms[0] - 1.0)) if norms[0] > 0 else 0.0,
        "params_hash": sha256_text(dumps_config(p)),
    })
    run.finish()
    return EXIT_OK


def cmd_boundstate(args) -> int:
    p, auto = _load(args)
    coeffs = nlse_coefficients(p)
    L = p.cell_length
    em = effective_masses(coeffs, L)
    # positions measured in units of L; m0 and a0 enter as printed
    zeta0 = em.zeta0
    dx = args.dx if args.dx is not None else 1.0 / (100.0 * zeta0)
    n = args.n
    lat = tp.lattice_ground_state(em.m0, em.a0, n, dx)
    box = args.box if args.box is not None else 12.0 / zeta0
    res = tp.analytic_bound_state(em.m0, em.a0, args.p0, box, args.map_n, L=1.0)
    run = _Run("boundstate", args, p)
    u, dens = tp.density_map(res)
    U1, U2 = np.meshgrid(u, u, indexing="ij")
    write_csv(run.path("density_map.csv"), ["z1_over_L", "z2_over_L", "prob_density"],
              [U1, U2, dens])
    energy = tp.total_energy(em.m0, em.a0, args.p0)
    write_json(run.path("boundstate_report.json"), {
        "zeta0_analytic": zeta0, "zeta0_fit": lat.zeta0_fit,
        "E_rel_lattice": lat.E_rel, "E_rel_analytic": energy.binding,
        "E_T": energy.total, "E_com": energy.com, "p0": args.p0,
        "m0": em.m0, "a0": em.a0, "L_cm": L, "dx": dx, "n": n,
        "length_unit": "L", "box": box, "map_n": args.map_n,
        "caveat": em.caveat,
    })
    run.extra["auto_calibrated"] = auto
    run.finish()
    return EXIT_OK


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eit-qnlse",
                                 description="EIT slow-light NLSE pipeline (dispersion, "
                                             "calibration, solitons, two-photon bound state)")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("config", help="medium config file (key = value unit)")
        sp.add_argument("--out", default=".", help="output directory")

    two_pi = 2.0 * math.pi
    d = sub.add_parser("dispersion", help="scan K(omega) and report Taylor coefficients")
    common(d)
    d.add_argument("--omega-min", type=float, default=-two_pi * 100e6, help="rad/s")
    d.add_argument("--omega-max", type=float, default=two_pi * 100e6, help="rad/s")
    d.add_argument("--n", type=int, default=2001)
    d.add_argument("--require-calibrated", action="store_true")
    d.set_defaults(func=cmd_dispersion)

    c = sub.add_parser("calibrate", help="fit kappa13 and |g_p|^2 to K2 and W targets")
    common(c)
    c.add_argument("--k2-target", type=float, default=DEFAULT_K2_TARGET, help="cm^-1 s^2")
    c.add_argument("--w-target", type=float, default=DEFAULT_W_TARGET, help="cm^-1")
    c.set_defaults(func=cmd_calibrate)

    def soliton_flags(sp):
        sp.add_argument("--eta0", type=float, default=sol.DEFAULT_ETA0)
        sp.add_argument("--xi0", type=float, default=0.1)
        sp.add_argument("--t0", type=float, default=2.4e-7, help="s")

    s = sub.add_parser("soliton", help="analytic soliton surface and derived quantities")
    common(s)
    soliton_flags(s)
    s.add_argument("--plot-grid", default="201x41", help="NSxNT samples on (s, t/t0)")
    s.add_argument("--s-range", type=float, default=10.0, help="s in [-R, R]")
    s.add_argument("--tau-max", type=float, default=5.0, help="t/t0 in [0, TAU]")
    s.set_defaults(func=cmd_soliton)

    pr = sub.add_parser("propagate", help="split-step propagation in the comoving frame")
    common(pr)
    soliton_flags(pr)
    pr.add_argument("--grid", type=int, default=4096, help="number of points (power of two)")
    pr.add_argument("--span", type=float, default=64.0, help="window in soliton widths")
    pr.add_argument("--dt", type=float, default=None, help="s (default T/1e4)")
    pr.add_argument("--T", type=float, default=None, help="s (default 5 dispersion times)")
    pr.add_argument("--init", choices=("soliton", "sech", "file"), default="soliton")
    pr.add_argument("--init-file", default=None)
    pr.add_argument("--sech-amplitude", type=float, default=1.5,
                    help="sech init peak in units of the soliton peak")
    pr.add_argument("--sample-every", type=int, default=100)
    pr.set_defaults(func=cmd_propagate)

    b = sub.add_parser("boundstate", help="two-photon bound state: lattice oracle and density map")
    common(b)
    b.add_argument("--p0", type=float, default=0.0, help="centre-of-mass momentum")
    b.add_argument("--n", type=int, default=4001, help="lattice sites (odd)")
    b.add_argument("--dx", type=float, default=None, help="lattice spacing in units of L")
    b.add_argument("--box", type=float, default=None, help="map box in units of L")
    b.add_argument("--map-n", type=int, default=201)
    b.set_defaults(func=cmd_boundstate)
    return ap


_NEGATIVE_NUMBER = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--flag -2.28e-7`` into ``--flag=-2.28e-7``; argparse alone
    reads exponent-form negatives as option names."""
    out: list[str] = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1]
                and _NEGATIVE_NUMBER.match(tok)):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = ap.parse_args(_attach_negative_values(argv))
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
