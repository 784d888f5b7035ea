"""Compare the compiled and numpy kernel backends.

Times the two hot kernels (upwind interface fluxes and limiter scalings) and a
full limited RK4 step of the Landau case, then checks that both backends give
bitwise identical results.

    python3 benchmarks/bench_kernels.py --sizes 64 128 256 --repeat 5
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from mppflow import kernels
from mppflow.integrator import SchemeConfig, compute_dt, first_order_fluxes, rk4_step
from mppflow.limiter import conservative_update
from mppflow.models import initial_condition


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_size(n, repeat):
    rho, bounds, model = initial_condition("landau_strong", n, n)
    f = rho.values
    vel = model.velocity(f)
    grid = model.grid
    dt = compute_dt(vel.alpha_x, vel.alpha_y, grid, 0.6)
    lam_x, lam_y = dt / grid.dx, dt / grid.dy
    h_low, g_low = first_order_fluxes(f, vel, grid)
    rho_fo = conservative_update(f, h_low, g_low, lam_x, lam_y)
    rng = np.random.default_rng(0)
    dh = 1e-3 * rng.standard_normal(f.shape)
    dg = 1e-3 * rng.standard_normal(f.shape)

    rows = []
    results = {}
    for backend in kernels.available_backends():
        cfg = SchemeConfig(scheme="hermite_weno", backend=backend)
        cases = {
            "flux linear": lambda: kernels.upwind_flux(f * vel.u_x, vel.u_x, axis=1, scheme=kernels.LINEAR, backend=backend),
            "flux weno": lambda: kernels.upwind_flux(f * vel.u_x, vel.u_x, axis=1, scheme=kernels.WENO, backend=backend),
            "limiter": lambda: kernels.limiter_thetas(rho_fo, dh, dg, lam_x, lam_y, bounds.rho_m, bounds.rho_M, backend=backend),
            "rk4 step": lambda: rk4_step(f, model, cfg, dt).rho,
        }
        for name, fn in cases.items():
            results[(backend, name)] = fn()
            rows.append((n, name, backend, _best(fn, repeat)))
    return rows, results


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    print(f"{'N':>5}  {'kernel':<12} " + " ".join(f"{b + ' [ms]':>14}" for b in backends) + ("  speedup  identical" if len(backends) > 1 else ""))
    for n in args.sizes:
        rows, results = bench_size(n, args.repeat)
        by_name = {}
        for _, name, backend, t in rows:
            by_name.setdefault(name, {})[backend] = t
        for name, times in by_name.items():
            line = f"{n:>5}  {name:<12} " + " ".join(f"{1e3 * times[b]:>14.3f}" for b in backends)
            if len(backends) > 1:
                same = _same(results[("cython", name)], results[("numpy", name)])
                line += f"  {times['numpy'] / times['cython']:>7.2f}  {same}"
            print(line)


if __name__ == "__main__":
    main()
