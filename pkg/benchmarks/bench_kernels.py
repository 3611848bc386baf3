"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 7] [--sizes 1024 4096 65536]

Each entry is the best of ``--repeat`` timeit runs, reported per call. The
last block times a full split-step propagation with each backend swapped in.
"""
import argparse
import timeit

import numpy as np

from eit_qnlse import kernels
from eit_qnlse import propagator as prop
from eit_qnlse import reduction as red
from eit_qnlse import soliton as sol
from eit_qnlse.params import rb87_preset


def _best(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def _cases(n, rng):
    field = rng.normal(size=n) + 1j * rng.normal(size=n)
    mult = np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
    lower, upper = rng.normal(size=n - 1), rng.normal(size=n - 1)
    diag = 4.0 + rng.uniform(size=n)
    rhs = rng.normal(size=n)
    return {
        "kerr_rotate": lambda be: be.kerr_rotate(field.copy(), 0.1),
        "linear_multiply": lambda be: be.linear_multiply(field.copy(), mult),
        "tridiag_solve": lambda be: be.tridiag_solve(lower, diag, upper, rhs),
        "sturm_count": lambda be: be.sturm_count(diag, lower, 4.5),
    }


def _propagation(n, backends, repeat):
    p, _ = red.calibrate(rb87_preset())
    coeffs = red.nlse_coefficients(p)
    sp = sol.soliton_params(coeffs, xi0=0.1)
    g = prop.make_grid(n, 64 * sp.width, sol.comoving_envelope(sp), coeffs)
    dt = 0.01 * sp.t0
    out = {}
    for be in backends:
        saved = kernels.kerr_rotate, kernels.linear_multiply
        kernels.kerr_rotate, kernels.linear_multiply = be.kerr_rotate, be.linear_multiply
        try:
            out[be] = _best(lambda: prop.propagate(g, 200 * dt, dt, sample_every=200), repeat)
        finally:
            kernels.kerr_rotate, kernels.linear_multiply = saved
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1024, 4096, 65536])
    args = ap.parse_args()

    if kernels.numba_backend is None:
        raise SystemExit("numba is not importable; nothing to compare")
    backends = [kernels.numpy_backend, kernels.numba_backend]
    rng = np.random.default_rng(0)

    # compile outside the timed region
    for fn in _cases(64, rng).values():
        fn(kernels.numba_backend)

    print(f"{'kernel':<18}{'n':>8}{'numpy [us]':>14}{'numba [us]':>14}{'speedup':>10}")
    for n in args.sizes:
        for name, fn in _cases(n, rng).items():
            t_np, t_nb = (_best(lambda: fn(be), args.repeat) for be in backends)
            print(f"{name:<18}{n:>8}{t_np * 1e6:>14.1f}{t_nb * 1e6:>14.1f}{t_np / t_nb:>10.2f}")

    print()
    print(f"{'propagate (200 steps)':<26}{'numpy [ms]':>14}{'numba [ms]':>14}{'speedup':>10}")
    for n in (1024, 4096):
        t = _propagation(n, backends, max(1, args.repeat // 2))
        t_np, t_nb = t[backends[0]], t[backends[1]]
        print(f"{'n=' + str(n):<26}{t_np * 1e3:>14.1f}{t_nb * 1e3:>14.1f}{t_np / t_nb:>10.2f}")
    print(f"\nthreads available to numba: {kernels.thread_cap()}")


if __name__ == "__main__":
    main()
