#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the full classification pipeline (both sweeps, escape maps, detectors)
on the reference workloads, checks that the two backends produce identical
label maps, and prints per-workload timings with the speedup.

Usage: python benchmarks/bench_backends.py [--grid N] [--repeat K]
"""

import argparse
import time

import numpy as np

from fatoukit import backends as bk
from fatoukit.config import make_escape_params, make_normality_params
from fatoukit.parser import parse_family
from fatoukit.pipeline import classify
from fatoukit.window import Window

WORKLOADS = [
    ("linear pencil", "family n: n*z"),
    ("exponential pencil", "family n: exp(n*z)"),
    ("exp | power union", "family n: exp(n*z) | family n: z^n"),
    ("circle ring family", "family n from 2: z^n*(z-1/2)+z"),
]


def run_backend(backend: str, grid: int, repeat: int):
    bk.set_backend(backend)
    nparams = make_normality_params()
    eparams = make_escape_params()
    w = Window(-2, 2, -2, 2, grid, grid)
    results = {}
    for name, text in WORKLOADS:
        spec = parse_family(text)
        classify(spec, w, nparams, eparams)  # warm-up (JIT compile / caches)
        best = float("inf")
        labels = None
        for _ in range(repeat):
            t0 = time.perf_counter()
            cls = classify(spec, w, nparams, eparams)
            best = min(best, time.perf_counter() - t0)
            labels = cls.labels
        results[name] = (best, labels)
    return results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"grid {args.grid}x{args.grid}, n_max 256, best of {args.repeat}")
    numpy_res = run_backend("numpy", args.grid, args.repeat)
    try:
        numba_res = run_backend("numba", args.grid, args.repeat)
    except ImportError:
        print("numba not importable; numpy timings only")
        for name, (t, _) in numpy_res.items():
            print(f"{name:24s} numpy {t:8.3f}s")
        return

    print(f"{'workload':24s} {'numpy':>10s} {'numba':>10s} {'speedup':>9s}")
    for name, _ in WORKLOADS:
        t_np, lab_np = numpy_res[name]
        t_nb, lab_nb = numba_res[name]
        same = "ok" if np.array_equal(lab_np, lab_nb) else "LABELS DIFFER"
        print(f"{name:24s} {t_np:9.3f}s {t_nb:9.3f}s {t_np / t_nb:8.2f}x "
              f"{same}")
    bk.set_backend("auto")


if __name__ == "__main__":
    main()
