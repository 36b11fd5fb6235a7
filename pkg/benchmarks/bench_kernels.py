"""Time the oracle kernels on both backends.

Usage: python3 benchmarks/bench_kernels.py [--batch 2048] [--repeat 5]
"""
import argparse
import time

import numpy as np

from gbss import _kernels
from gbss.gmqd import correlation_block, product_basis
from gbss.search import haar_bases
from gbss.state import random_physical_spec, realize


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=2048)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'shape':<8}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for n, m in [(1, 1), (1, 2), (2, 2), (2, 3)]:
        spec = random_physical_spec(n, m, rng)
        rho = realize(spec).data
        N, M = spec.dims
        rho4 = rho.reshape(N, M, N, M)
        bases = haar_bases(N, args.batch, rng)
        C = correlation_block(rho, spec.dims).C
        X = product_basis(N)
        jobs = {
            "conditional_entropy": lambda b: _kernels.conditional_entropy(rho4, bases, 0, 1.0, backend=b),
            "max_term": lambda b: _kernels.max_term(C, X, bases, backend=b),
        }
        for name, job in jobs.items():
            for b in backends:
                job(b)  # warm-up and JIT compilation
            times = [best_of(lambda: job(b), args.repeat) for b in backends]
            ratio = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else f"{'-':>10}"
            print(f"{name:<22}{f'{n},{m}':<8}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + ratio)


if __name__ == "__main__":
    main()
