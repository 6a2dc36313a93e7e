#!/usr/bin/env python3
"""Benchmark the compiled coefficient kernels against their pure-Python twins.

Both backends implement the same dense-coefficient signatures; the package
picks one at import time (see quasifolds._kernels).  This script times each
hot kernel on representative workloads and prints a speedup table.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""

import argparse
import random
import timeit

from quasifolds._kernels import BACKEND, _ref

try:
    from quasifolds._kernels import _fast
except ImportError:
    _fast = None


def _poly(rng, degree):
    return [complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            for _ in range(degree + 1)]


def _workloads(seed):
    rng = random.Random(seed)
    p8, q8 = _poly(rng, 8), _poly(rng, 8)
    p32, q32 = _poly(rng, 32), _poly(rng, 32)
    m16, n16 = _poly(rng, 16), _poly(rng, 16)
    m32 = _poly(rng, 32)
    return (
        ("poly_mul deg 8 x 8", lambda k: k.poly_mul(p8, q8)),
        ("poly_mul deg 32 x 32", lambda k: k.poly_mul(p32, q32)),
        ("poly_add deg 32", lambda k: k.poly_add(p32, q32)),
        ("poly_shift deg 8", lambda k: k.poly_shift(p8, 0.3125)),
        ("poly_shift deg 32", lambda k: k.poly_shift(p32, 0.3125)),
        ("poly_eval deg 32", lambda k: k.poly_eval(p32, 0.7182)),
        ("trig_mul 17 x 17 modes", lambda k: k.trig_mul(-8, m16, -8, n16)),
        ("trig_rotate 33 modes", lambda k: k.trig_rotate(-16, m32, 0.61803)),
        ("trig_eval 33 modes", lambda k: k.trig_eval(-16, m32, 0.33)),
    )


def _time(func, repeat):
    timer = timeit.Timer(func)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions per workload (default 5)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the workload data (default 0)")
    args = parser.parse_args(argv)

    print(f"selected backend at import: {BACKEND}")
    if _fast is None:
        print("compiled backend not available; timing pure Python only\n")
    header = f"{'workload':<24} {'python':>12} {'cython':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, call in _workloads(args.seed):
        t_ref = _time(lambda: call(_ref), args.repeat)
        if _fast is not None:
            t_fast = _time(lambda: call(_fast), args.repeat)
            ratio = t_ref / t_fast if t_fast else float("inf")
            print(f"{name:<24} {t_ref * 1e6:>10.2f}us {t_fast * 1e6:>10.2f}us "
                  f"{ratio:>8.1f}x")
        else:
            print(f"{name:<24} {t_ref * 1e6:>10.2f}us {'-':>12} {'-':>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
