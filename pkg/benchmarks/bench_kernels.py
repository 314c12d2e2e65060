"""Throughput comparison: compiled trial kernel vs the pure-Python twin.

Both backends produce bit-identical trajectories; this script measures
what the compiled extension buys in steps/second.

Run:  python3 benchmarks/bench_kernels.py [steps]
"""

import sys
import time

from vecbal.distributions import Atomic, UniformBall
from vecbal.engine import TrialConfig, checkpoint_schedule, run_trial
from vecbal.strategies import StrategySpec


def bench(label, cfg, backend, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        run_trial(cfg, backend=backend)
        best = min(best, time.perf_counter() - t0)
    rate = cfg.horizon / best
    print(f"  {label:28s} {backend:7s} {best:8.3f} s   {rate / 1e6:8.2f} M steps/s")
    return rate


def main():
    steps = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    cases = [
        (
            "inner-product d=2 k=2",
            TrialConfig(
                d=2, k=2, horizon=steps,
                strategy=StrategySpec("inner-product"),
                distribution=UniformBall(2),
                checkpoints=checkpoint_schedule(1000, steps, 10.0),
                master_seed=1,
            ),
        ),
        (
            "best-of-two d=2 k=8",
            TrialConfig(
                d=2, k=8, horizon=steps,
                strategy=StrategySpec("best-of-two"),
                distribution=UniformBall(2),
                checkpoints=checkpoint_schedule(1000, steps, 10.0),
                master_seed=1,
            ),
        ),
        (
            "inner-product d=1 atoms k=2",
            TrialConfig(
                d=1, k=2, horizon=steps,
                strategy=StrategySpec("inner-product"),
                distribution=Atomic(((1.0,), (-1.0,)), (0.5, 0.5)),
                checkpoints=checkpoint_schedule(1000, steps, 10.0),
                master_seed=1,
            ),
        ),
    ]
    # the pure-Python twin is ~100x slower; keep its workload proportionate
    py_steps = max(steps // 20, 10_000)
    print(f"compiled backend at {steps} steps, fallback at {py_steps} steps\n")
    for label, cfg in cases:
        fast = bench(label, cfg, "cython")
        small = TrialConfig(
            d=cfg.d, k=cfg.k, horizon=py_steps, strategy=cfg.strategy,
            distribution=cfg.distribution,
            checkpoints=checkpoint_schedule(1000, py_steps, 10.0),
            master_seed=cfg.master_seed,
        )
        slow = bench(label, small, "python", repeat=1)
        print(f"  {'':28s} speedup {fast / slow:6.1f}x\n")


if __name__ == "__main__":
    main()
