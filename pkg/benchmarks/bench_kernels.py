"""Compare the compiled and pure-Python kernel backends.

Times each special-function kernel on the same inputs and one full
Fourier-inversion LPC evaluation under each backend, and checks that the
two backends agree.

    python benchmarks/bench_kernels.py [--size N] [--repeat R]
"""

import argparse
import importlib
import math
import os
import subprocess
import sys
import timeit

import numpy as np

from nmlkit import kernels


def kernel_table(size, repeat):
    rng = np.random.default_rng(0)
    z = rng.uniform(-20, 20, size) + 1j * rng.uniform(-20, 20, size)
    x = rng.uniform(0.01, 50, size)
    y = rng.uniform(-50, 50, size)
    cases = {
        "loggamma": lambda k: k.loggamma(z),
        "digamma": lambda k: k.digamma(x),
        "trigamma": lambda k: k.trigamma(x),
        "inverse_digamma": lambda k: k.inverse_digamma(y)[0],
    }
    backends = {name: kernels.get_backend(name) for name in kernels.available_backends()}
    print(f"{'kernel':<16}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}{'max rel diff':>14}")
    for label, fn in cases.items():
        times = {b: min(timeit.repeat(lambda: fn(k), number=1, repeat=repeat)) for b, k in backends.items()}
        outs = [fn(k) for k in backends.values()]
        diff = float(np.nanmax(np.abs(outs[0] - outs[-1]) / np.maximum(1.0, np.abs(outs[0])))) if len(outs) > 1 else 0.0
        speed = times.get("python", math.nan) / times.get("cython", math.nan)
        print(f"{label:<16}" + "".join(f"{t * 1e3:>12.2f}ms" for t in times.values())
              + f"{speed:>9.1f}x{diff:>14.2e}")


_LPC_SNIPPET = """
import time
from nmlkit import kernels, registry_get, Luckiness, lpc_gamma_known_scale
t = time.perf_counter()
r = lpc_gamma_known_scale(1.0, Luckiness.indicator(-1.0, 1.0), 5)
print(kernels.BACKEND, time.perf_counter() - t, repr(r.log_value))
"""


def lpc_table():
    # backend selection happens at import, so each run gets a fresh interpreter
    rows = []
    for env in ({}, {"NMLKIT_PURE_PYTHON": "1"}):
        out = subprocess.run([sys.executable, "-c", _LPC_SNIPPET], env={**os.environ, **env},
                             capture_output=True, text=True, check=True).stdout.split()
        rows.append(out)
    print(f"\n{'LPC (gamma-known-scale, n=5)':<30}{'seconds':>10}  log LPC")
    for backend, seconds, value in rows:
        print(f"{backend:<30}{float(seconds):>10.3f}  {value}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"default backend: {kernels.BACKEND}; available: {', '.join(kernels.available_backends())}\n")
    kernel_table(args.size, args.repeat)
    lpc_table()


if __name__ == "__main__":
    main()
