#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot batch operations (pair feasibility, power allocation,
rate evaluation) and a composite policy-style pipeline over a range of
batch shapes, then prints a speedup table.

Run from the repository root:

    python benchmarks/bench_kernels.py [--repeats 7] [--clusters 4096]
"""

import argparse
import time

import numpy as np

from nomasim import _kernels_jit, _kernels_np
from nomasim.verification import sample_sorted_gammas


def _time(fn, *args, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def _pipeline(impl, gammas, betas):
    passed, _, _, _ = impl.feasibility_batch(gammas, betas)
    sub = gammas[passed]
    if sub.shape[0]:
        alphas, _, feasible = impl.allocate_batch(sub, np.zeros(sub.shape[0]))
        impl.noma_rates_batch(sub[feasible], alphas[feasible], betas[passed][feasible])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--clusters", type=int, default=4096)
    args = parser.parse_args()

    cases = []
    rng = np.random.default_rng(1)
    for size in (2, 4, 8, 16, 32):
        gammas = sample_sorted_gammas(rng, args.clusters, size)
        betas = rng.uniform(0.0, 0.1, args.clusters)
        alphas, _, _ = _kernels_np.allocate_batch(gammas, np.zeros(args.clusters))
        cases.append((size, gammas, betas, alphas))

    # trigger compilation outside the timed region
    warm_g, warm_b = cases[0][1][:4], cases[0][2][:4]
    _kernels_jit.feasibility_batch(warm_g, warm_b)
    _kernels_jit.allocate_batch(warm_g, warm_b)
    _kernels_jit.noma_rates_batch(warm_g, cases[0][3][:4], warm_b)

    ops = {
        "feasibility": lambda impl, g, b, a: impl.feasibility_batch(g, b),
        "allocation": lambda impl, g, b, a: impl.allocate_batch(g, b),
        "rates": lambda impl, g, b, a: impl.noma_rates_batch(g, a, b),
        "pipeline": lambda impl, g, b, a: _pipeline(impl, g, b),
    }

    print(f"{args.clusters} clusters per batch, best of {args.repeats} runs")
    print(f"{'op':<12} {'G':>3} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, op in ops.items():
        for size, gammas, betas, alphas in cases:
            t_np = _time(op, _kernels_np, gammas, betas, alphas, repeats=args.repeats)
            t_jit = _time(op, _kernels_jit, gammas, betas, alphas, repeats=args.repeats)
            print(
                f"{name:<12} {size:>3} {1e3 * t_np:>8.2f}ms {1e3 * t_jit:>8.2f}ms "
                f"{t_np / t_jit:>7.1f}x"
            )


if __name__ == "__main__":
    main()
