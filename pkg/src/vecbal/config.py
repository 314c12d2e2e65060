"""Strict JSON experiment configuration.

Unknown keys are fatal everywhere (a typo in a sweep axis would
silently invalidate an experiment); semantic errors name the offending
field.  parse_config validates eagerly, including expanding the sweep
axes once so every resulting trial config is known to be valid before
any sampling happens.

Schema (JSON object, keys in any order):

    d, k, T          integers           required
    strategy         string             required
    distribution     object             required  {"variant": ..., ...}
    checkpoints      object             required  {"tMin", "tMax", "ratio"}
    masterSeed       integer            required
    trials           integer >= 1       default 1
    parallelism      integer >= 1       default 1
    output           object             default {} {"records": path, "summary": path}
    sweep            object             optional  axes: T, k, d, strategy,
                                                  distribution (non-empty lists)
    drift            object             optional  {"pair", "buckets", "burnIn",
                                                  "nSteps", "reseed"}

Distribution objects: {"variant": "uniform-ball", "d": n} |
{"variant": "atomic", "atoms": [[...]], "weights": [...]} |
{"variant": "mixture", "components": [{"weight": w, "distribution": ...}]} |
{"variant": "pathological", "omega": {...}, "sCap": n} with omega
{"kind": "identity" | "power" | "log-power", "exponent": a} or
{"kind": "table", "breakpoints": [[x, y], ...]}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from .distributions import DistributionSpec, spec_from_dict, spec_to_dict
from .engine import TrialConfig, checkpoint_schedule
from .strategies import StrategySpec

__all__ = [
    "ConfigError",
    "CheckpointSpec",
    "OutputSpec",
    "DriftSpec",
    "SweepAxes",
    "ExperimentConfig",
    "parse_config",
    "serialize_config",
    "expand_trials",
]


class ConfigError(ValueError):
    """Invalid configuration document; message names the offending part."""


@dataclass(frozen=True)
class CheckpointSpec:
    t_min: int
    t_max: int
    ratio: float


@dataclass(frozen=True)
class OutputSpec:
    records: str | None = None
    summary: str | None = None


@dataclass(frozen=True)
class DriftSpec:
    pair: tuple[int, int]
    buckets: tuple[tuple[float, float], ...]
    burn_in: int | None
    n_steps: int
    reseed: tuple[float, float] | None


@dataclass(frozen=True)
class SweepAxes:
    T: tuple[int, ...] | None = None
    k: tuple[int, ...] | None = None
    d: tuple[int, ...] | None = None
    strategy: tuple[str, ...] | None = None
    distribution: tuple[DistributionSpec, ...] | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    d: int
    k: int
    T: int
    strategy: str
    distribution: DistributionSpec
    checkpoints: CheckpointSpec
    master_seed: int
    trials: int = 1
    parallelism: int = 1
    output: OutputSpec = OutputSpec()
    sweep: SweepAxes | None = None
    drift: DriftSpec | None = None


def _fail(field: str, message: str) -> ConfigError:
    return ConfigError(f"{field}: {message}")


def _as_int(obj, field: str, minimum: int | None = None) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise _fail(field, "must be an integer")
    if minimum is not None and obj < minimum:
        raise _fail(field, f"must be >= {minimum}")
    return obj


def _as_number(obj, field: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise _fail(field, "must be a number")
    return float(obj)


def _check_unknown(obj: dict, allowed: set[str], where: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}")


def _parse_distribution(obj, field: str) -> DistributionSpec:
    try:
        return spec_from_dict(obj)
    except ConfigError:
        raise
    except ValueError as exc:
        raise _fail(field, str(exc)) from exc


def _parse_strategy(obj, field: str) -> str:
    if not isinstance(obj, str):
        raise _fail(field, "must be a string")
    try:
        StrategySpec(obj)
    except ValueError as exc:
        raise _fail(field, str(exc)) from exc
    return obj


def _parse_checkpoints(obj) -> CheckpointSpec:
    if not isinstance(obj, dict):
        raise _fail("checkpoints", "must be an object with tMin, tMax, ratio")
    _check_unknown(obj, {"tMin", "tMax", "ratio"}, "checkpoints")
    for key in ("tMin", "tMax", "ratio"):
        if key not in obj:
            raise ConfigError(f"missing key {key!r} in checkpoints")
    t_min = _as_int(obj["tMin"], "checkpoints.tMin", 1)
    t_max = _as_int(obj["tMax"], "checkpoints.tMax", 1)
    ratio = _as_number(obj["ratio"], "checkpoints.ratio")
    if t_max < t_min:
        raise _fail("checkpoints.tMax", "must be >= tMin")
    if not ratio > 1.0:
        raise _fail("checkpoints.ratio", "must be > 1")
    return CheckpointSpec(t_min=t_min, t_max=t_max, ratio=ratio)


def _parse_output(obj) -> OutputSpec:
    if not isinstance(obj, dict):
        raise _fail("output", "must be an object")
    _check_unknown(obj, {"records", "summary"}, "output")
    for key in obj:
        if not isinstance(obj[key], str):
            raise _fail(f"output.{key}", "must be a path string")
    return OutputSpec(records=obj.get("records"), summary=obj.get("summary"))


def _parse_axis_list(obj, field: str):
    if not isinstance(obj, list) or not obj:
        raise _fail(field, "must be a non-empty list")
    return obj


def _parse_sweep(obj) -> SweepAxes:
    if not isinstance(obj, dict):
        raise _fail("sweep", "must be an object of axis lists")
    _check_unknown(obj, {"T", "k", "d", "strategy", "distribution"}, "sweep")
    axes = {}
    if "T" in obj:
        axes["T"] = tuple(_as_int(x, "sweep.T", 1) for x in _parse_axis_list(obj["T"], "sweep.T"))
    if "k" in obj:
        axes["k"] = tuple(_as_int(x, "sweep.k", 2) for x in _parse_axis_list(obj["k"], "sweep.k"))
    if "d" in obj:
        axes["d"] = tuple(_as_int(x, "sweep.d", 1) for x in _parse_axis_list(obj["d"], "sweep.d"))
    if "strategy" in obj:
        axes["strategy"] = tuple(
            _parse_strategy(x, "sweep.strategy") for x in _parse_axis_list(obj["strategy"], "sweep.strategy")
        )
    if "distribution" in obj:
        axes["distribution"] = tuple(
            _parse_distribution(x, "sweep.distribution")
            for x in _parse_axis_list(obj["distribution"], "sweep.distribution")
        )
    return SweepAxes(**axes)


def _parse_drift(obj) -> DriftSpec:
    if not isinstance(obj, dict):
        raise _fail("drift", "must be an object")
    _check_unknown(obj, {"pair", "buckets", "burnIn", "nSteps", "reseed"}, "drift")
    for key in ("pair", "buckets", "nSteps"):
        if key not in obj:
            raise ConfigError(f"missing key {key!r} in drift")
    pair = obj["pair"]
    if not (isinstance(pair, list) and len(pair) == 2):
        raise _fail("drift.pair", "must be a two-element list [i, j]")
    pair = (_as_int(pair[0], "drift.pair", 0), _as_int(pair[1], "drift.pair", 0))
    buckets = obj["buckets"]
    if not isinstance(buckets, list) or not buckets:
        raise _fail("drift.buckets", "must be a non-empty list of [low, high] pairs")
    parsed_buckets = []
    for b in buckets:
        if not (isinstance(b, list) and len(b) == 2):
            raise _fail("drift.buckets", "each bucket must be a [low, high] pair")
        parsed_buckets.append((_as_number(b[0], "drift.buckets"), _as_number(b[1], "drift.buckets")))
    burn_in = _as_int(obj["burnIn"], "drift.burnIn", 0) if "burnIn" in obj else None
    n_steps = _as_int(obj["nSteps"], "drift.nSteps", 1)
    reseed = None
    if "reseed" in obj:
        r = obj["reseed"]
        if not (isinstance(r, list) and len(r) == 2):
            raise _fail("drift.reseed", "must be a [low, high] pair")
        reseed = (_as_number(r[0], "drift.reseed"), _as_number(r[1], "drift.reseed"))
    return DriftSpec(
        pair=pair,
        buckets=tuple(parsed_buckets),
        burn_in=burn_in,
        n_steps=n_steps,
        reseed=reseed,
    )


_TOP_KEYS = {
    "d", "k", "T", "strategy", "distribution", "checkpoints",
    "masterSeed", "trials", "parallelism", "output", "sweep", "drift",
}
_REQUIRED = ("d", "k", "T", "strategy", "distribution", "checkpoints", "masterSeed")


def parse_config(text: str) -> ExperimentConfig:
    """Parse and fully validate a config document (strict JSON)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise ConfigError("config document must be a JSON object")
    _check_unknown(obj, _TOP_KEYS, "config")
    for key in _REQUIRED:
        if key not in obj:
            raise ConfigError(f"missing key {key!r} in config")

    cfg = ExperimentConfig(
        d=_as_int(obj["d"], "d", 1),
        k=_as_int(obj["k"], "k", 2),
        T=_as_int(obj["T"], "T", 1),
        strategy=_parse_strategy(obj["strategy"], "strategy"),
        distribution=_parse_distribution(obj["distribution"], "distribution"),
        checkpoints=_parse_checkpoints(obj["checkpoints"]),
        master_seed=_as_int(obj["masterSeed"], "masterSeed"),
        trials=_as_int(obj.get("trials", 1), "trials", 1),
        parallelism=_as_int(obj.get("parallelism", 1), "parallelism", 1),
        output=_parse_output(obj.get("output", {})),
        sweep=_parse_sweep(obj["sweep"]) if "sweep" in obj else None,
        drift=_parse_drift(obj["drift"]) if "drift" in obj else None,
    )
    expand_trials(cfg)  # every expanded TrialConfig must be valid
    return cfg


def serialize_config(cfg: ExperimentConfig) -> dict:
    """Dict form that parse_config accepts and reparses to an equal config."""
    out: dict = {
        "d": cfg.d,
        "k": cfg.k,
        "T": cfg.T,
        "strategy": cfg.strategy,
        "distribution": spec_to_dict(cfg.distribution),
        "checkpoints": {
            "tMin": cfg.checkpoints.t_min,
            "tMax": cfg.checkpoints.t_max,
            "ratio": cfg.checkpoints.ratio,
        },
        "masterSeed": cfg.master_seed,
        "trials": cfg.trials,
        "parallelism": cfg.parallelism,
    }
    output = {}
    if cfg.output.records is not None:
        output["records"] = cfg.output.records
    if cfg.output.summary is not None:
        output["summary"] = cfg.output.summary
    out["output"] = output
    if cfg.sweep is not None:
        sweep = {}
        if cfg.sweep.T is not None:
            sweep["T"] = list(cfg.sweep.T)
        if cfg.sweep.k is not None:
            sweep["k"] = list(cfg.sweep.k)
        if cfg.sweep.d is not None:
            sweep["d"] = list(cfg.sweep.d)
        if cfg.sweep.strategy is not None:
            sweep["strategy"] = list(cfg.sweep.strategy)
        if cfg.sweep.distribution is not None:
            sweep["distribution"] = [spec_to_dict(s) for s in cfg.sweep.distribution]
        out["sweep"] = sweep
    if cfg.drift is not None:
        drift: dict = {
            "pair": list(cfg.drift.pair),
            "buckets": [list(b) for b in cfg.drift.buckets],
            "nSteps": cfg.drift.n_steps,
        }
        if cfg.drift.burn_in is not None:
            drift["burnIn"] = cfg.drift.burn_in
        if cfg.drift.reseed is not None:
            drift["reseed"] = list(cfg.drift.reseed)
        out["drift"] = drift
    return out


def expand_trials(cfg: ExperimentConfig) -> list[TrialConfig]:
    """Expand sweep axes (cartesian, fixed axis order) x trial repeats.

    trialIndex is a running counter over the whole expansion, so every
    trial draws from a distinct derived stream.
    """
    sweep = cfg.sweep or SweepAxes()
    ts = sweep.T or (cfg.T,)
    ks = sweep.k or (cfg.k,)
    ds = sweep.d or (cfg.d,)
    strategies = sweep.strategy or (cfg.strategy,)
    dists = sweep.distribution or (cfg.distribution,)

    configs = []
    counter = 0
    for t, k, d, strat, dist in product(ts, ks, ds, strategies, dists):
        if cfg.checkpoints.t_max > t:
            raise _fail("checkpoints.tMax", f"exceeds horizon T={t}")
        schedule = checkpoint_schedule(cfg.checkpoints.t_min, cfg.checkpoints.t_max, cfg.checkpoints.ratio)
        for _ in range(cfg.trials):
            try:
                trial = TrialConfig(
                    d=d,
                    k=k,
                    horizon=t,
                    strategy=StrategySpec(strat),
                    distribution=dist,
                    checkpoints=schedule,
                    master_seed=cfg.master_seed,
                    trial_index=counter,
                )
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            configs.append(trial)
            counter += 1
    return configs
