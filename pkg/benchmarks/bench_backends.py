#!/usr/bin/env python3
"""Benchmark the compiled integrand kernels against the NumPy fallback.

Two views: raw batch-kernel throughput (both modules imported side by
side), and one full plate-rate evaluation per backend (run in a fresh
subprocess so the import-time backend selection is exercised for real).

Usage: python benchmarks/bench_backends.py [--points N] [--repeats R]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

_RATE_SNIPPET = """
import time
import platedecay as pd
from platedecay.backend import BACKEND_NAME
geom = pd.PlateGeometry(10.0, 10.0, 0.2)
emitter = pd.EmitterConfig((0.0, 0.0, 0.5), (1.0, 0.0, 0.0))
t0 = time.perf_counter()
result = pd.decay_rate(geom, emitter, 0.1 + 1e-8j)
dt = time.perf_counter() - t0
print(f"{BACKEND_NAME} {dt:.6f} {result.rate!r} {result.evaluations}")
"""


def bench_kernels(points, repeats):
    from platedecay import _kernels_py

    backends = [("python", _kernels_py)]
    try:
        from platedecay import _kernels

        backends.insert(0, ("cython", _kernels))
    except ImportError:
        print("compiled kernels not available; benchmarking fallback only")

    rng = np.random.default_rng(12345)
    pts = np.ascontiguousarray(rng.random((points, 3)) - [0.0, 0.0, 1.0])
    r0 = np.ascontiguousarray([0.0, 0.0, 0.5])
    k = 2.0 * np.pi

    print(f"\nbatch kernels, {points} points, best of {repeats}:")
    header = f"{'backend':8} {'scalar ns/pt':>14} {'tensor ns/pt':>14}"
    print(header)
    print("-" * len(header))
    results = {}
    for name, mod in backends:
        best_rate = min(
            _timed(lambda: mod.rate_integrand_batch(pts, r0, k, 0))
            for _ in range(repeats)
        )
        best_tensor = min(
            _timed(lambda: mod.tensor_integrand_batch(pts, r0, k))
            for _ in range(repeats)
        )
        results[name] = (best_rate, best_tensor)
        print(f"{name:8} {best_rate / points * 1e9:14.1f} "
              f"{best_tensor / points * 1e9:14.1f}")
    if len(results) == 2:
        s = results["python"][0] / results["cython"][0]
        t = results["python"][1] / results["cython"][1]
        print(f"speedup: scalar {s:.2f}x, tensor {t:.2f}x")

    # cross-check both backends agree where both exist
    if len(backends) == 2:
        a = backends[0][1].rate_integrand_batch(pts[:1000], r0, k, 2)
        b = backends[1][1].rate_integrand_batch(pts[:1000], r0, k, 2)
        dev = float(np.max(np.abs(a - b)))
        print(f"backend agreement on 1000 points: max dev {dev:.2e}")


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def bench_full_rate():
    print("\nfull plate rate (10 x 10 x 0.2, emitter at z=0.5), per backend:")
    for backend in ("cython", "python"):
        env = dict(os.environ, PLATEDECAY_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, "-c", _RATE_SNIPPET],
            env=env, capture_output=True, text=True,
        )
        if proc.returncode != 0:
            print(f"{backend:8} unavailable "
                  f"({proc.stderr.strip().splitlines()[-1]})")
            continue
        name, dt, rate, evals = proc.stdout.split()
        print(f"{name:8} {float(dt):8.3f} s   rate={rate}   "
              f"evaluations={evals}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=1_000_000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    bench_kernels(args.points, args.repeats)
    bench_full_rate()


if __name__ == "__main__":
    main()
