"""Benchmark the FIFO wait-time kernel: compiled extension vs pure Python.

Runs the calibration-shaped workload (lambda = 23.110/min, mu = 2/min,
c = 12, utilization ~0.96) over one million arrivals and reports per-kernel
wall time, throughput, and the speedup ratio. Outputs are also compared
bit-for-bit, matching the equivalence the test suite asserts.

Usage: python benchmarks/bench_kernels.py [--arrivals N] [--repeat K]
"""

import argparse
import time

import numpy as np

from pegstress._kernels import IMPLEMENTATION
from pegstress._kernels.pure import fifo_wait_times as pure_kernel

try:
    from pegstress._kernels._mmc import fifo_wait_times as compiled_kernel
except ImportError:
    compiled_kernel = None


def bench(kernel, ia, sv, servers, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = kernel(ia, sv, servers)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--arrivals", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--servers", type=int, default=12)
    parser.add_argument("--seed", type=int, default=12)
    args = parser.parse_args()

    lam, mu = 23.110, 2.0
    rng = np.random.default_rng(args.seed)
    ia = rng.exponential(1.0 / lam, args.arrivals)
    sv = rng.exponential(1.0 / mu, args.arrivals)

    print(f"workload: {args.arrivals:,} arrivals, c={args.servers}, "
          f"rho={lam / (args.servers * mu):.3f} (dispatch selects: {IMPLEMENTATION})")

    t_pure, out_pure = bench(pure_kernel, ia, sv, args.servers, args.repeat)
    print(f"pure     : {t_pure * 1e3:9.1f} ms  "
          f"({args.arrivals / t_pure / 1e6:6.2f} M arrivals/s)")

    if compiled_kernel is None:
        print("compiled : not built (pip install -e . with Cython available)")
        return

    t_comp, out_comp = bench(compiled_kernel, ia, sv, args.servers, args.repeat)
    print(f"compiled : {t_comp * 1e3:9.1f} ms  "
          f"({args.arrivals / t_comp / 1e6:6.2f} M arrivals/s)")
    print(f"speedup  : {t_pure / t_comp:9.1f}x")
    identical = np.array_equal(out_pure, out_comp)
    print(f"outputs bit-identical: {identical}")
    if not identical:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
