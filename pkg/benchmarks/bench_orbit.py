"""Time the compiled orbit kernel against the pure-Python twin.

Run from the repository root after an editable install:

    python3 benchmarks/bench_orbit.py --n 100000 --repeat 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from apollon import _orbit_py

try:
    from apollon import _orbit
except ImportError:
    _orbit = None


def time_kernel(kernel, root, n, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        counts = np.zeros(n + 1, dtype=np.uint32)
        start = time.perf_counter()
        result = kernel.count_curvatures(*root, n, counts)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--root", default="-1,2,2,3", help="comma-separated curvatures")
    parser.add_argument("--n", type=int, default=10**5, help="curvature bound")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = parser.parse_args()

    root = tuple(int(v) for v in args.root.split(","))
    if len(root) != 4:
        parser.error("--root needs four curvatures")

    pure_t, pure_res = time_kernel(_orbit_py, root, args.n, args.repeat)
    print(f"root {root}, bound {args.n}: {pure_res[0]} circles, {pure_res[1]} ties")
    print(f"  pure python : {pure_t:9.4f} s")
    if _orbit is None:
        print("  compiled    : extension not built")
        return
    fast_t, fast_res = time_kernel(_orbit, root, args.n, args.repeat)
    if fast_res != pure_res:
        raise SystemExit(f"kernel disagreement: {fast_res} vs {pure_res}")
    print(f"  compiled    : {fast_t:9.4f} s")
    print(f"  speedup     : {pure_t / fast_t:9.1f}x")


if __name__ == "__main__":
    main()
