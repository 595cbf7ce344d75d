"""Time the compiled and numpy subset kernels on the same designs.

    python benchmarks/bench_kernels.py            # default cases
    python benchmarks/bench_kernels.py --large    # adds the 256-run, 228-factor A4 sweep
"""

from __future__ import annotations

import argparse
import time

from qcdesign import _kernels
from qcdesign.regsel import ma_design

CASES = [
    # (n, runs, q, k)
    (3, 64, 48, 4),
    (4, 128, 103, 3),
    (4, 128, 103, 4),
    (4, 256, 228, 3),
]
LARGE = [(4, 256, 228, 4)]


def time_once(words, runs, k, backend):
    t0 = time.perf_counter()
    result = _kernels.subset_stats(words, runs, k, backend=backend)
    return time.perf_counter() - t0, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--large", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = list(_kernels.available_backends())
    print(f"backends: {', '.join(backends)}  threads: {_kernels.threads()}")
    print(f"{'design':<22}{'k':>3}" + "".join(f"{b + ' (s)':>14}" for b in backends) + f"{'speedup':>10}")
    for n, runs, q, k in CASES + (LARGE if args.large else []):
        words, _ = ma_design(n, runs, q).design.packed
        best = {}
        results = set()
        for b in backends:
            reps = args.repeat if q < 200 or k < 4 else 1
            times = []
            for _ in range(reps):
                dt, res = time_once(words, runs, k, b)
                times.append(dt)
                results.add(res)
            best[b] = min(times)
        assert len(results) == 1, f"backends disagree: {results}"
        speed = best["python"] / best["cython"] if "cython" in best else float("nan")
        label = f"N={runs} q={q}"
        print(f"{label:<22}{k:>3}" + "".join(f"{best[b]:>14.4f}" for b in backends) + f"{speed:>10.1f}x")


if __name__ == "__main__":
    main()
