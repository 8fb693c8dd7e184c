#!/usr/bin/env python3
"""Benchmark the compiled schedule/coefficient kernels against the numpy
fallback.

Usage: python benchmarks/bench_kernels.py [--max-m 128]
"""

import argparse
import time

import numpy as np

from swapcool.kernels import _fallback

try:
    from swapcool.kernels import _compiled
except ImportError:
    _compiled = None


def time_call(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_schedule(impl, m):
    return time_call(impl.improved_schedule_events, m, True)


def bench_accumulate(impl, m, events):
    _, _, es, el, eh, et = events
    fresh = ((et == 0) & (es != 0)).astype(np.uint8)
    t, _ = time_call(impl.accumulate_rows, 2 * m, m, el, eh, et, fresh)
    return t


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-m", type=int, default=128)
    args = parser.parse_args()

    ms = [m for m in (8, 16, 32, 64, 128, 256) if m <= args.max_m]
    print(f"{'m':>5} {'sched py (s)':>13} {'sched cy (s)':>13} {'speedup':>8}"
          f" {'accum py (s)':>13} {'accum cy (s)':>13} {'speedup':>8}")
    for m in ms:
        t_py, ev_py = bench_schedule(_fallback, m)
        if _compiled is not None:
            t_cy, ev_cy = bench_schedule(_compiled, m)
            assert ev_py[0] == ev_cy[0], "backends disagree on step*"
        else:
            t_cy = float("nan")
        a_py = bench_accumulate(_fallback, m, ev_py)
        a_cy = bench_accumulate(_compiled, m, ev_py) if _compiled else float("nan")
        print(f"{m:>5} {t_py:>13.4f} {t_cy:>13.4f} {t_py / t_cy:>8.1f}"
              f" {a_py:>13.4f} {a_cy:>13.4f} {a_py / a_cy:>8.1f}")
    if _compiled is None:
        print("compiled kernels not built; showing fallback only")

    # the acceptance-critical sweep: stats-only schedules for every m
    for impl, tag in ((_compiled, "compiled"), (_fallback, "python")):
        if impl is None:
            continue
        t0 = time.perf_counter()
        for m in range(1, args.max_m + 1):
            impl.improved_schedule_events(m, False)
        print(f"stats-only sweep m=1..{args.max_m} [{tag}]: "
              f"{time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
