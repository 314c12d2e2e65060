"""Reproducible trial execution: seeds, schedules, sweeps, and probes.

A trial is fully determined by its TrialConfig: the per-trial stream
seed is derived from (masterSeed, trialIndex), sampling consumes a
fixed documented number of draws per step, and records are therefore
byte-identical across reruns, platforms, kernel backends, and sweep
parallelism levels.

Env var VECBAL_DEBUG_ASSERT=1 turns on per-step invariant assertions
inside the kernels (conservation, triangle bound, inner-product step
bound, greedy-1d bound); violations raise KernelInvariantError.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .distributions import (
    DistributionSpec,
    compile_distribution,
    spec_dimension,
    spec_to_dict,
)
from .rng import derive_trial_seed
from .strategies import BEST_OF_TWO, INNER_PRODUCT, StrategySpec

__all__ = [
    "TrialConfig",
    "CheckpointRecord",
    "TrialRecord",
    "TrialState",
    "DriftEstimate",
    "EventStats",
    "StepProbeResult",
    "KernelInvariantError",
    "SweepError",
    "checkpoint_schedule",
    "config_to_dict",
    "config_digest",
    "derive_trial_seed",
    "run_trial",
    "run_sweep",
    "run_drift_probe",
    "run_step_distribution_probe",
]

DEBUG_ENV = "VECBAL_DEBUG_ASSERT"


class KernelInvariantError(RuntimeError):
    """A per-step debug assertion failed inside a kernel."""

    def __init__(self, code: int, step: int):
        name = kernels.ERR_NAMES.get(code, f"kernel error code {code}")
        super().__init__(f"{name} at step {step}")
        self.code = code
        self.step = step


class SweepError(RuntimeError):
    """A trial inside a sweep failed; carries the offending config."""

    def __init__(self, config: "TrialConfig", cause: BaseException):
        super().__init__(
            "trial failed for config "
            f"(strategy={config.strategy.name}, d={config.d}, k={config.k}, "
            f"T={config.horizon}, trialIndex={config.trial_index}): {cause}"
        )
        self.config = config


def checkpoint_schedule(t_min: int, t_max: int, ratio: float) -> tuple[int, ...]:
    """Geometric times round(t_min * ratio**j) within [t_min, t_max].

    Deduplicated; t_max is always included.  Rounding is
    floor(x + 0.5), which is platform-stable (round-half-even is not
    what we want for pinned schedules).
    """
    t_min = int(t_min)
    t_max = int(t_max)
    if not 1 <= t_min <= t_max:
        raise ValueError("need 1 <= t_min <= t_max")
    if not ratio > 1.0:
        raise ValueError("checkpoint ratio must be > 1")
    times: list[int] = []
    j = 0
    while True:
        t = math.floor(t_min * ratio**j + 0.5)
        if t > t_max:
            break
        if not times or t > times[-1]:
            times.append(t)
        j += 1
    if not times or times[-1] != t_max:
        times.append(t_max)
    return tuple(times)


@dataclass(frozen=True)
class TrialConfig:
    """One fully-specified trial; validation happens at construction."""

    d: int
    k: int
    horizon: int
    strategy: StrategySpec
    distribution: DistributionSpec
    checkpoints: tuple[int, ...]
    master_seed: int
    trial_index: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.horizon < 1:
            raise ValueError("horizon T must be >= 1")
        if self.trial_index < 0:
            raise ValueError("trialIndex must be >= 0")
        self.strategy.check_dimensions(self.d, self.k)
        dd = spec_dimension(self.distribution)
        if dd != self.d:
            raise ValueError(f"distribution dimension {dd} does not match d={self.d}")
        cps = tuple(int(t) for t in self.checkpoints)
        if not cps:
            raise ValueError("checkpoint schedule must be non-empty")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ValueError("checkpoint times must be strictly increasing")
        if cps[0] < 1 or cps[-1] > self.horizon:
            raise ValueError("checkpoints must lie within [1, T]")
        object.__setattr__(self, "checkpoints", cps)


def config_to_dict(config: TrialConfig) -> dict:
    """JSON-able canonical form; the digest and the config files share it."""
    return {
        "d": config.d,
        "k": config.k,
        "T": config.horizon,
        "strategy": config.strategy.name,
        "distribution": spec_to_dict(config.distribution),
        "checkpoints": list(config.checkpoints),
        "masterSeed": config.master_seed,
        "trialIndex": config.trial_index,
    }


def config_digest(config: TrialConfig) -> str:
    text = json.dumps(config_to_dict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CheckpointRecord:
    n: int
    D: float  # running max pair distance over steps 1..n
    S: float  # sum of squared pairwise distances at n
    max_pair: float  # instantaneous max pair distance at n
    merged_imb: float


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    seed: int
    config_digest: str
    records: tuple[CheckpointRecord, ...]
    wall_time: float = field(default=0.0, compare=False)  # not part of the reproducible payload


@dataclass
class TrialState:
    """Final kernel state, exposed for consistency tests."""

    sums: np.ndarray
    comp: np.ndarray
    rng_state: np.ndarray
    d_running: float


def _default_debug_flags() -> int:
    return kernels.DEBUG_ALL if os.environ.get(DEBUG_ENV, "") == "1" else 0


def run_trial(
    config: TrialConfig,
    *,
    debug_flags: int | None = None,
    backend: str | None = None,
    return_state: bool = False,
):
    """Execute one trial; returns its TrialRecord.

    D is updated every step, not only at checkpoints, so the final
    record's D is the max over all steps 1..T.  With return_state=True
    returns (record, TrialState) so callers can recompute checkpoint
    quantities from the raw bin sums.
    """
    flags = _default_debug_flags() if debug_flags is None else debug_flags
    cd = compile_distribution(config.distribution)
    seed = derive_trial_seed(config.master_seed, config.trial_index)
    k, d = config.k, config.d
    sums = np.zeros((k, d), dtype=np.float64)
    comp = np.zeros((k, d), dtype=np.float64)
    totals = np.zeros((2, d), dtype=np.float64)
    rng_state = np.array([seed, 0], dtype=np.uint64)
    cpt = np.asarray(config.checkpoints, dtype=np.int64)
    rows = np.full((len(cpt), 4), np.nan, dtype=np.float64)
    err = np.zeros(2, dtype=np.int64)

    start = time.perf_counter()
    d_running = kernels.run_trial_kernel(
        sums, comp, cd, config.strategy.code, rng_state,
        0, config.horizon, cpt, rows, 0.0, flags, totals, err,
        backend=backend,
    )
    wall = time.perf_counter() - start
    if err[0] != kernels.ERR_OK:
        raise KernelInvariantError(int(err[0]), int(err[1]))

    records = tuple(
        CheckpointRecord(
            n=int(cpt[i]),
            D=float(rows[i, 0]),
            S=float(rows[i, 1]),
            max_pair=float(rows[i, 2]),
            merged_imb=float(rows[i, 3]),
        )
        for i in range(len(cpt))
    )
    record = TrialRecord(
        trial_index=config.trial_index,
        seed=seed,
        config_digest=config_digest(config),
        records=records,
        wall_time=wall,
    )
    if return_state:
        return record, TrialState(sums=sums, comp=comp, rng_state=rng_state, d_running=float(d_running))
    return record


def run_sweep(
    grid: list[TrialConfig],
    parallelism: int = 1,
    *,
    debug_flags: int | None = None,
    backend: str | None = None,
) -> list[TrialRecord]:
    """Run every config; results are in grid order and independent of parallelism.

    Each trial gets its own derived seed and its own state, so
    concurrent execution cannot change any trajectory.  The first
    failing trial aborts the sweep with the offending config named.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    grid = list(grid)
    if not grid:
        return []

    def one(cfg: TrialConfig) -> TrialRecord:
        try:
            return run_trial(cfg, debug_flags=debug_flags, backend=backend)
        except Exception as exc:
            raise SweepError(cfg, exc) from exc

    if parallelism == 1:
        return [one(cfg) for cfg in grid]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        futures = [pool.submit(one, cfg) for cfg in grid]
        return [f.result() for f in futures]


@dataclass(frozen=True)
class EventStats:
    count: int
    mean_delta: float | None
    std_err: float | None


@dataclass(frozen=True)
class DriftEstimate:
    """Per-bucket one-step drift of A = |B_i - B_j|^2.

    mean_delta/std_err are None (absent, not zero) when the bucket was
    never visited.  events holds the best-of-two decomposition by the
    exposed candidate pair: "both" tracked bins offered, "neither",
    "one"; empty for strategies that expose no pair.
    """

    bucket_low: float
    bucket_high: float
    count: int
    mean_delta: float | None
    std_err: float | None
    events: tuple[tuple[str, EventStats], ...]


_EVENT_COLS = (("both", 1), ("neither", 2), ("one", 3))


def _welford_stats(count: int, mean: float, m2: float) -> tuple[int, float | None, float | None]:
    if count == 0:
        return 0, None, None
    if count == 1:
        return 1, float(mean), None
    sd = math.sqrt(m2 / (count - 1))
    return count, float(mean), sd / math.sqrt(count)


def run_drift_probe(
    config: TrialConfig,
    pair: tuple[int, int],
    buckets: list[tuple[float, float]],
    burn_in: int | None = None,
    n_steps: int = 100_000,
    *,
    reseed_range: tuple[float, float] | None = None,
    backend: str | None = None,
) -> list[DriftEstimate]:
    """One-step drift of the tracked pair's squared distance, per bucket.

    Buckets are half-open [low, high) intervals of A and must be
    disjoint.  burn_in defaults to 10*k steps to escape the all-zero
    start.  reseed_range=(lo, hi) re-prepares the tracked pair at a
    uniform A in [lo, hi) whenever A leaves that window, which makes
    rarely-visited buckets reachable; the recorded one-step transitions
    are unchanged in law given the prepared state.
    """
    a, b = pair
    if not (0 <= a < b < config.k):
        raise ValueError("pair must satisfy 0 <= i < j < k")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if burn_in is None:
        burn_in = 10 * config.k
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    buck = [(float(lo), float(hi)) for lo, hi in buckets]
    if not buck:
        raise ValueError("need at least one bucket")
    for lo, hi in buck:
        if not lo < hi:
            raise ValueError(f"bucket ({lo}, {hi}) is empty")
        if lo < 0:
            raise ValueError("buckets measure a squared distance; bounds must be >= 0")
    for (lo1, hi1), (lo2, hi2) in zip(sorted(buck), sorted(buck)[1:]):
        if hi1 > lo2:
            raise ValueError("buckets must be disjoint")
    reseed = reseed_range is not None
    if reseed:
        lo, hi = float(reseed_range[0]), float(reseed_range[1])
        if not 0 <= lo < hi:
            raise ValueError("reseed_range must satisfy 0 <= lo < hi")
    else:
        lo = hi = 0.0

    cd = compile_distribution(config.distribution)
    seed = derive_trial_seed(config.master_seed, config.trial_index)
    sums = np.zeros((config.k, config.d), dtype=np.float64)
    comp = np.zeros((config.k, config.d), dtype=np.float64)
    rng_state = np.array([seed, 0], dtype=np.uint64)
    buckets_arr = np.array(buck, dtype=np.float64)
    nb = len(buck)
    counts = np.zeros((nb, 4), dtype=np.int64)
    means = np.zeros((nb, 4), dtype=np.float64)
    m2s = np.zeros((nb, 4), dtype=np.float64)

    kernels.drift_probe_kernel(
        sums, comp, cd, config.strategy.code, rng_state,
        a, b, buckets_arr, burn_in, n_steps,
        reseed, lo, hi, counts, means, m2s,
        backend=backend,
    )

    exposes_pair = config.strategy.name == BEST_OF_TWO
    out = []
    for r in range(nb):
        count, mean, se = _welford_stats(int(counts[r, 0]), means[r, 0], m2s[r, 0])
        events = ()
        if exposes_pair:
            events = tuple(
                (name, EventStats(*_welford_stats(int(counts[r, c]), means[r, c], m2s[r, c])))
                for name, c in _EVENT_COLS
            )
        out.append(
            DriftEstimate(
                bucket_low=buck[r][0],
                bucket_high=buck[r][1],
                count=count,
                mean_delta=mean,
                std_err=se,
                events=events,
            )
        )
    return out


@dataclass(frozen=True)
class StepProbeResult:
    visits: int
    decrements: int
    no_drops: int
    p_decrement: float | None
    p_no_drop: float | None


def run_step_distribution_probe(
    config: TrialConfig,
    ell_half: float,
    n_steps: int,
    *,
    burn_in: int = 0,
    init_sums: np.ndarray | None = None,
    reseed: bool = False,
    backend: str | None = None,
) -> StepProbeResult:
    """Frequency of large S-decrements and of bounded drops under inner-product.

    Over steps with S_t >= ell_half, counts {dS <= -sqrt(2*ell_half)/k}
    and {dS >= -k}.  Frequencies are None when no step qualified.
    init_sums seeds the starting bin sums; with reseed=True the bins
    snap back to init_sums whenever S falls below ell_half, keeping the
    probed region occupied (each recorded step is still one true
    transition from a reachable state).
    """
    if config.strategy.name != INNER_PRODUCT:
        raise ValueError("step probe requires the inner-product strategy")
    if not ell_half > 0:
        raise ValueError("ell_half must be > 0")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    if reseed and init_sums is None:
        raise ValueError("reseed mode needs init_sums")

    cd = compile_distribution(config.distribution)
    seed = derive_trial_seed(config.master_seed, config.trial_index)
    shape = (config.k, config.d)
    if init_sums is not None:
        init = np.ascontiguousarray(init_sums, dtype=np.float64)
        if init.shape != shape:
            raise ValueError(f"init_sums must have shape {shape}")
    else:
        init = np.zeros(shape, dtype=np.float64)
    sums = init.copy()
    comp = np.zeros(shape, dtype=np.float64)
    rng_state = np.array([seed, 0], dtype=np.uint64)
    counts = np.zeros(3, dtype=np.int64)

    kernels.step_probe_kernel(
        sums, comp, cd, rng_state,
        float(ell_half), burn_in, n_steps,
        reseed, init, counts,
        backend=backend,
    )
    visits, decrements, no_drops = (int(x) for x in counts)
    return StepProbeResult(
        visits=visits,
        decrements=decrements,
        no_drops=no_drops,
        p_decrement=decrements / visits if visits else None,
        p_no_drop=no_drops / visits if visits else None,
    )
