"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Kernel timings call both backend modules directly in one process. The
end-to-end rows run a fixed gind workload in a subprocess per backend,
selected through ``GIND_DISABLE_NUMBA``.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from gind import kernels
from gind.numerics import gaussian_matrix, rng

WORKLOAD = """
import time, numpy as np
from gind import kernels, gind, LINF, L1, Lp
from gind.numerics import gaussian_matrix, rng
kernels.warmup()
t = time.perf_counter()
for k in range(200):
    A = gaussian_matrix(rng(0, k), 3)
    gind(A, LINF, L1)
    gind(A, Lp(3), Lp(1.5))
print(time.perf_counter() - t)
"""


def best_of(fn, repeat):
    fn()  # compile / warm caches
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    B = gaussian_matrix(rng(0), 4)
    Y = gaussian_matrix(rng(1), 20_000, 4)
    X0 = gaussian_matrix(rng(2), 16, 4)
    phases = np.exp(2j * np.pi * np.arange(16) / 16)
    stack = np.stack([gaussian_matrix(rng(3, t), 3) for t in range(2000)])
    starts = np.stack([gaussian_matrix(rng(4, t), 4, 3) for t in range(2000)])
    return {
        "lp_norm_rows 20000x4, p=3": lambda k: k.lp_norm_rows(Y, 3.0),
        "multistart_ascent 16 starts, (inf, 1)": lambda k: k.multistart_ascent(B, np.inf, 1.0, X0, 500, 1e-13),
        "multistart_ascent 16 starts, (3, 1.5)": lambda k: k.multistart_ascent(B, 3.0, 1.5, X0, 500, 1e-13),
        "phase_enum_values 16^3 phases": lambda k: k.phase_enum_values(B, 1.0, phases),
        "batch_sigma_max 2000 x 3x3": lambda k: k.batch_sigma_max(stack, starts, 10_000, 1e-11),
    }


def end_to_end(flag):
    env = dict(os.environ, GIND_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True,
                         text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true", help="also time 400 gind calls per backend")
    args = ap.parse_args(argv)

    found = kernels.backends()
    if "numba" not in found:
        sys.exit("numba is not importable; nothing to compare")
    print(f"{'kernel':42s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, fn in cases().items():
        a = best_of(lambda: fn(found["numba"]), args.repeat) * 1e3
        b = best_of(lambda: fn(found["numpy"]), args.repeat) * 1e3
        print(f"{name:42s} {a:10.3f} {b:10.3f} {b / a:7.1f}x")
    if args.end_to_end:
        a, b = end_to_end("0") * 1e3, end_to_end("1") * 1e3
        print(f"{'gind x400 (complex 3x3, generic)':42s} {a:10.1f} {b:10.1f} {b / a:7.1f}x")


if __name__ == "__main__":
    main()
