"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload runs on both backends; results are checked for equality
before timings are reported.
"""

from __future__ import annotations

import argparse
import time

from k3cls import kernels
from k3cls.autgroup import all_automorphisms, automorphism_group
from k3cls.classify import run_all
from k3cls.lattice import Lattice

E8 = [[2, -1, 0, 0, 0, 0, 0, 0], [-1, 2, -1, 0, 0, 0, 0, 0], [0, -1, 2, -1, 0, 0, 0, -1],
      [0, 0, -1, 2, -1, 0, 0, 0], [0, 0, 0, -1, 2, -1, 0, 0], [0, 0, 0, 0, -1, 2, -1, 0],
      [0, 0, 0, 0, 0, -1, 2, 0], [0, 0, -1, 0, 0, 0, 0, 2]]
D4 = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]
A2_CUBED = [[2, 1, 0, 0, 0, 0], [1, 2, 0, 0, 0, 0], [0, 0, 2, 1, 0, 0],
            [0, 0, 1, 2, 0, 0], [0, 0, 0, 0, 2, 1], [0, 0, 0, 0, 1, 2]]


def workloads():
    yield "short_vectors E8 norm<=6", lambda b: kernels.short_vectors(E8, 6, backend=b)
    yield "short_vectors No.81 norm<=200", lambda b: kernels.short_vectors(
        [[4, 0, 2], [0, 4, 2], [2, 2, 12]], 200, backend=b)
    yield "all automorphisms D4 (1152)", lambda b: all_automorphisms(Lattice(D4), backend=b)
    yield "all automorphisms A2^3 (10368)", lambda b: all_automorphisms(Lattice(A2_CUBED), backend=b)
    yield "stabilizer chain E8", lambda b: automorphism_group(Lattice(E8), backend=b).order


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernels.compiled_available():
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    print(f"{'workload':<34} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, fn in workloads():
        tp, rp = timed(lambda: fn("python"), args.repeat)
        tc, rc = timed(lambda: fn("cython"), args.repeat)
        if rp != rc:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<34} {tp:>9.4f}s {tc:>9.4f}s {tp / tc:>7.1f}x")
    t = time.perf_counter()
    run_all()
    print(f"full classification (default backend): {time.perf_counter() - t:.3f}s")


if __name__ == "__main__":
    main()
