#!/usr/bin/env python3
"""Benchmark the compiled simulation loop against the pure-Python one.

The two backends run the same catastrophic-failure scenario and must
produce identical traces; this script measures wall time per run.  Small
steps stretch the recurrence (dt 0.01 over 2000 minutes is 200k steps),
which is where the compiled loop earns its keep.

Usage:
    python benchmarks/bench_backends.py [--duration-min N] [--dt-min X]
                                        [--repeats K]
"""

import argparse
import time
from dataclasses import dataclass

from simiss import _core
from simiss.engine import SimConfig, run
from simiss.powerplant import builtin_schedule


@dataclass
class Result:
    backend: str
    steps: int
    seconds: float


def benchmark(duration_min: float = 2000.0, dt_min: float = 0.01,
              repeats: int = 3) -> list[Result]:
    cfg = SimConfig(schedule=builtin_schedule("catastrophic"),
                    duration_min=duration_min, dt_min=dt_min)
    results = []
    for backend in _core.available_backends():
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            trace, _ = run(cfg, backend=backend)
            best = min(best, time.perf_counter() - t0)
        results.append(Result(backend, len(trace), best))
    return results


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--duration-min", type=float, default=2000.0)
    parser.add_argument("--dt-min", type=float, default=0.01)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    results = benchmark(args.duration_min, args.dt_min, args.repeats)
    print(f"{'backend':<8} {'steps':>9} {'best time':>12}")
    for r in results:
        print(f"{r.backend:<8} {r.steps:>9} {r.seconds:>11.4f}s")
    by_name = {r.backend: r.seconds for r in results}
    if {"python", "cython"} <= by_name.keys():
        print(f"speedup: {by_name['python'] / by_name['cython']:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
