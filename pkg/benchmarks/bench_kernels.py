"""Compare the compiled and numpy Kerr kernels, alone and inside full split-steps.

    python benchmarks/bench_kernels.py [--m 256] [--steps 200]
"""

import argparse
import timeit

import numpy as np

from soliton_entanglement import kernels
from soliton_entanglement._stepper import split_step
from soliton_entanglement.grid import make_grid


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=256)
    ap.add_argument("--steps", type=int, default=200)
    args = ap.parse_args()

    g = make_grid(args.m, 0.05)
    a0 = 2.0 * np.sqrt(1e9) / np.cosh(g.x) + 0j
    backends = {"python": kernels.python_kerr_step}
    if kernels.compiled_kerr_step is not None:
        backends["cython"] = kernels.compiled_kerr_step
    else:
        print("compiled extension not built; only the numpy kernel is timed")

    print(f"grid m={args.m}, {args.steps} steps")
    print(f"{'backend':<8} {'kernel [ms]':>12} {'split-step [ms/step]':>22}")
    for name, kerr in backends.items():
        a = a0.copy()
        u = np.eye(args.m, dtype=complex)
        v = np.zeros((args.m, args.m), dtype=complex)
        t_kernel = min(timeit.repeat(lambda: kerr(a, u, v, 1e-4, -1e-9), number=50, repeat=3)) / 50

        def run():
            split_step(a0.copy(), np.eye(args.m, dtype=complex), np.zeros((args.m, args.m), dtype=complex),
                       g.wavenumbers, 1e-4, args.steps, -1e-9, kerr)

        t_step = min(timeit.repeat(run, number=1, repeat=3)) / args.steps
        print(f"{name:<8} {t_kernel * 1e3:>12.3f} {t_step * 1e3:>22.3f}")


if __name__ == "__main__":
    main()
