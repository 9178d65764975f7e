"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--size 512] [--repeat 5]
"""
import argparse
import time

import numpy as np

from cocycle import kernels
from cocycle.analysis import zero_clusters, directed_depth
from cocycle.samplers import StripParams, sample_strip_quadrant


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    n = args.size
    cfg = sample_strip_quadrant(StripParams(0.5, n, n, 0))
    cases = {
        "strip sample": lambda: sample_strip_quadrant(StripParams(0.5, n, n, 1)),
        "zero labels": lambda: kernels.zero_labels(cfg.h, cfg.v),
        "zero clusters": lambda: zero_clusters(cfg),
        "directed depth": lambda: directed_depth(cfg, 64),
    }
    backends = kernels.available_backends()
    results = {}
    prev = kernels.backend_name()
    try:
        for b in backends:
            kernels.use_backend(b)
            results[b] = {name: best_of(fn, args.repeat) for name, fn in cases.items()}
    finally:
        kernels.use_backend(prev)
    print(f"window {n}x{n}, best of {args.repeat}")
    print(f"{'kernel':<16}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name in cases:
        row = f"{name:<16}" + "".join(f"{results[b][name] * 1e3:>10.2f}ms" for b in backends)
        if "compiled" in results and "python" in results:
            row += f"{results['python'][name] / results['compiled'][name]:>11.1f}x"
        print(row)
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend was timed")


if __name__ == "__main__":
    main()
