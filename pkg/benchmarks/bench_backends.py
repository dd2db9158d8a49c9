"""Timing comparison of the compiled and numpy stepping backends.

Run as:  python3 benchmarks/bench_backends.py
"""

from __future__ import annotations

import time

import numpy as np

import gravcat_liv as gl
from gravcat_liv import engine, evolve


def _model():
    k = gl.PhysicalConstants.natural(ell=0.1)
    p = gl.GravcatParams(M=1.0, d=0.5, d_prime=1.0, L=0.5, epsilon=1.0,
                         E_ref=2.0, n=2, t_QG=1.0, theta=0.0, units="natural")
    return p, k


def bench_integrate(backend: str, n_steps: int = 100_000) -> float:
    p, k = _model()
    gen = gl.make_generator(p, k)
    dt = 1e-3
    start = time.perf_counter()
    evolve.integrate(gen, gl.initial_state(p.theta), n_steps * dt, dt,
                     backend=backend)
    return time.perf_counter() - start


def bench_ensemble(backend: str, n_traj: int = 1000) -> float:
    p, k = _model()
    noise = gl.NoiseModel(t_QG=1.0, dt=1e-3)
    start = time.perf_counter()
    gl.ensemble_average(p, noise, 4.0, n_traj, 1234, k, backend=backend)
    return time.perf_counter() - start


def main():
    backends = ["numpy"] + (["native"] if engine.have_native() else [])
    if len(backends) == 1:
        print("compiled extension not available; timing numpy only")
    rows = []
    for backend in backends:
        rows.append((f"integrate 1e5 steps [{backend}]",
                     bench_integrate(backend)))
        rows.append((f"ensemble 1000 traj x 4000 steps [{backend}]",
                     bench_ensemble(backend)))
    width = max(len(name) for name, _ in rows)
    for name, seconds in rows:
        print(f"{name:<{width}}  {seconds:8.3f} s")
    if len(backends) == 2:
        for kind in ("integrate", "ensemble"):
            t_np = next(s for n, s in rows if kind in n and "numpy" in n)
            t_na = next(s for n, s in rows if kind in n and "native" in n)
            print(f"{kind}: native speedup x{t_np / t_na:.1f}")


if __name__ == "__main__":
    main()
