#!/usr/bin/env python3
"""Benchmark the compiled co-occurrence kernel against the numpy fallback.

Run from the repository root after an editable install:

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --n-objects 200000 --features 16,32,64

Both backends are exercised in-process (the fallback is forced via the
same switch the library uses), the outputs are checked for equality, and
end-to-end detection timings are reported alongside the raw kernel.
"""

import argparse
import os
import time

import numpy as np

os.environ.setdefault("VALUEWALK_NO_EXT", "0")

import valuewalk as vw
from valuewalk import kernels


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_config(n_objects, d, repeats):
    half = max(1, d // 2)
    ds = vw.generate_synthetic(n_objects, half, d - half, max(4, n_objects // 100), 0.9, seed=1)
    cells, offsets = ds.cells, ds.feature_offsets

    timings = {}
    outputs = {}
    for label, force in (("compiled", "0"), ("numpy", "1")):
        if force == "0" and not kernels.HAVE_NATIVE:
            continue
        os.environ["VALUEWALK_NO_EXT"] = force
        timings[label] = best_of(lambda: kernels.cooccurrence_counts(cells, offsets), repeats)
        outputs[label] = kernels.cooccurrence_counts(cells, offsets)
        timings[label + " detect"] = best_of(
            lambda: vw.detect(ds, vw.DetectorConfig(method="sdrw")), repeats
        )
    os.environ["VALUEWALK_NO_EXT"] = "0"

    if len(outputs) == 2:
        for a, b in zip(outputs["compiled"], outputs["numpy"]):
            assert np.array_equal(a, b), "backends disagree"
    return timings


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-objects", type=int, default=100_000)
    parser.add_argument("--features", default="8,16,32,64")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if not kernels.HAVE_NATIVE:
        print("note: compiled extension not available, benchmarking the fallback only")

    feature_counts = [int(x) for x in args.features.split(",")]
    header = f"{'D':>5} {'kernel(c)':>11} {'kernel(np)':>11} {'speedup':>8} {'detect(c)':>11} {'detect(np)':>11}"
    print(f"N = {args.n_objects}")
    print(header)
    print("-" * len(header))
    for d in feature_counts:
        t = bench_config(args.n_objects, d, args.repeats)
        kc = t.get("compiled", float("nan"))
        kn = t.get("numpy", float("nan"))
        dc = t.get("compiled detect", float("nan"))
        dn = t.get("numpy detect", float("nan"))
        speedup = kn / kc if kc == kc and kc > 0 else float("nan")
        print(f"{d:>5} {kc:>11.4f} {kn:>11.4f} {speedup:>8.2f} {dc:>11.4f} {dn:>11.4f}")


if __name__ == "__main__":
    main()
