"""Timing comparison between the numba and pure-numpy simulation kernels.

Usage:
    python benchmarks/backend_bench.py [--ticks N] [--repeats K]

Runs the same configuration on both backends, checks the event logs are
bit-identical, and prints per-run wall times. The numba path pays a one-off
JIT compile on first use (cached on disk afterwards), so a warmup run is
excluded from the timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from stigmasim import SimConfig
from stigmasim.engine import run_sim


def time_backend(name: str, cfg: SimConfig, repeats: int) -> list[float]:
    run_sim(cfg, backend=name)  # warmup: JIT compile / cache load
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        run_sim(cfg, backend=name)
        times.append(time.perf_counter() - start)
    return times


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ticks", type=int, default=5000)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cfg = SimConfig(max_ticks=args.ticks, seed=args.seed)
    print(f"config: {cfg.grid_width}x{cfg.grid_height} grid, "
          f"{2 * cfg.n_per_group} civilians, {cfg.n_cops} cops, "
          f"{cfg.max_ticks} ticks")

    log_nb, _ = run_sim(cfg, backend="numba")
    log_np, _ = run_sim(cfg, backend="numpy")
    identical = np.array_equal(log_nb.array, log_np.array)
    print(f"event logs bit-identical across backends: {identical}")
    if not identical:
        raise SystemExit("backend mismatch; benchmark aborted")

    results = {}
    for name in ("numba", "numpy"):
        times = time_backend(name, cfg, args.repeats)
        results[name] = times
        per_tick = 1e6 * np.mean(times) / cfg.max_ticks
        print(f"{name:>6}: best {min(times):7.3f}s  mean {np.mean(times):7.3f}s "
              f"({per_tick:6.1f} us/tick, {args.repeats} runs)")

    speedup = np.mean(results["numpy"]) / np.mean(results["numba"])
    print(f"numba speedup over numpy: {speedup:.1f}x")


if __name__ == "__main__":
    main()
