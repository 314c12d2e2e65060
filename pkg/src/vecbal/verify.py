"""Deterministic invariant suite behind `vecbal verify`.

Six checks, each a hard pass/fail:

  1. conservation: bin sums equal the running sample total at every
     checkpoint of a 10^5-step uniform-ball trial
  2. triangle bound 2S/k >= maxPair^2 at every step of that trial
  3. inner-product step bound dS <= (k-1)|v|^2 at every step
  4. greedy-1d keeps every pair distance <= 1 over 10^6 steps for
     k in {2, 3, 5} on uniform [-1, 1]
  5. best-of-two and inner-product make identical decisions at k=2
     when fed the same vectors (the only candidate pair is (0, 1))
  6. the golden trajectory reproduces the committed byte-pinned CSV

The whole suite runs in seconds with the compiled kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from . import kernels, serialize
from ._scalar import (
    decide_best_of_two,
    decide_inner_product,
    kahan_add,
    py_dist,
    sample_compiled,
)
from .distributions import UniformBall, compile_distribution
from .engine import (
    KernelInvariantError,
    TrialConfig,
    checkpoint_schedule,
    run_trial,
)
from .rng import Stream, derive_trial_seed
from .strategies import GREEDY_1D, INNER_PRODUCT, StrategySpec

GOLDEN_DATA = "data/golden_trajectory.csv"

_BO2_STEPS = 20_000


def golden_config() -> TrialConfig:
    """The pinned configuration of the committed golden trajectory."""
    return TrialConfig(
        d=2,
        k=2,
        horizon=100,
        strategy=StrategySpec(INNER_PRODUCT),
        distribution=UniformBall(2),
        checkpoints=checkpoint_schedule(1, 100, 10.0**0.5),  # [1, 3, 10, 32, 100]
        master_seed=1,
        trial_index=0,
    )


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _debug_trial(name, flag, strategy, d, k, horizon, seed, backend) -> CheckResult:
    cfg = TrialConfig(
        d=d,
        k=k,
        horizon=horizon,
        strategy=StrategySpec(strategy),
        distribution=UniformBall(d),
        checkpoints=checkpoint_schedule(10, horizon, 1.5),
        master_seed=seed,
        trial_index=0,
    )
    try:
        run_trial(cfg, debug_flags=flag, backend=backend)
    except KernelInvariantError as exc:
        return CheckResult(name, False, str(exc))
    return CheckResult(name, True, f"{horizon} steps clean")


def _best_of_two_matches_inner_product() -> CheckResult:
    name = "best-of-two = inner-product at k=2"
    pd = py_dist(compile_distribution(UniformBall(2)))
    vec_stream = Stream(derive_trial_seed(20240811, 0))
    pair_stream = Stream(7)  # pair draw is consumed but can only pick (0, 1)
    sums_ip = [[0.0, 0.0], [0.0, 0.0]]
    comp_ip = [[0.0, 0.0], [0.0, 0.0]]
    sums_b2 = [[0.0, 0.0], [0.0, 0.0]]
    comp_b2 = [[0.0, 0.0], [0.0, 0.0]]
    v = [0.0, 0.0]
    for n in range(_BO2_STEPS):
        sample_compiled(pd, vec_stream, v)
        h_ip = decide_inner_product(v, sums_ip, 2, 2)
        h_b2, _, _ = decide_best_of_two(v, sums_b2, 2, 2, pair_stream)
        if h_ip != h_b2:
            return CheckResult(name, False, f"decisions diverge at step {n + 1}")
        kahan_add(sums_ip, comp_ip, h_ip, v, 2)
        kahan_add(sums_b2, comp_b2, h_b2, v, 2)
    if sums_ip != sums_b2:
        return CheckResult(name, False, "final bin sums differ")
    return CheckResult(name, True, f"{_BO2_STEPS} identical decisions")


def _golden_trajectory(backend) -> CheckResult:
    name = "golden trajectory byte-reproducible"
    record = run_trial(golden_config(), backend=backend)
    produced = serialize.format_records_csv([record]).encode("utf-8")
    try:
        expected = resources.files("vecbal").joinpath(GOLDEN_DATA).read_bytes()
    except FileNotFoundError:
        return CheckResult(name, False, "committed golden file missing")
    if produced != expected:
        got = produced.decode("utf-8").splitlines()
        want = expected.decode("utf-8").splitlines()
        for i, (a, b) in enumerate(zip(got, want)):
            if a != b:
                return CheckResult(name, False, f"first mismatch at line {i + 1}: {a!r} != {b!r}")
        return CheckResult(name, False, f"line count differs: {len(got)} vs {len(want)}")
    return CheckResult(name, True, f"{len(record.records)} checkpoints match byte for byte")


def run_all(backend: str | None = None) -> list[CheckResult]:
    results = [
        _debug_trial(
            "conservation at checkpoints",
            kernels.DEBUG_CONSERVATION, INNER_PRODUCT, 2, 3, 100_000, 101, backend,
        ),
        _debug_trial(
            "triangle bound 2S/k >= maxPair^2",
            kernels.DEBUG_TRIANGLE, INNER_PRODUCT, 2, 3, 100_000, 101, backend,
        ),
        _debug_trial(
            "inner-product step bound dS <= (k-1)|v|^2",
            kernels.DEBUG_STEP_BOUND, INNER_PRODUCT, 2, 3, 100_000, 101, backend,
        ),
    ]
    for k in (2, 3, 5):
        results.append(
            _debug_trial(
                f"greedy-1d pair distances <= 1 (k={k})",
                kernels.DEBUG_GREEDY, GREEDY_1D, 1, k, 1_000_000, 202 + k, backend,
            )
        )
    results.append(_best_of_two_matches_inner_product())
    results.append(_golden_trajectory(backend))
    return results
