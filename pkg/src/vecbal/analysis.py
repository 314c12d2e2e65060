"""Growth-law fitting, ratio stability, and cross-trial quantiles.

Candidate growth laws for the running max pair distance D(T):

    CONST                  1
    SQRT_LOG_OVER_LOGLOG   sqrt(log T / log log T)
    SQRT_LOG               sqrt(log T)
    LOG                    log T
    SQRT_T_LOG_T           sqrt(T log T)

log is natural log throughout.  Fits are least squares through the
origin: the laws are proportionality statements, and an intercept
would let CONST fit anything.  Model discrimination is advisory;
robust checks should use ratio_stability, since sqrt(log T) and
sqrt(log T / log log T) are numerically indistinguishable at any
reachable T.  All functions here are deterministic and pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .engine import TrialRecord

__all__ = [
    "GrowthModel",
    "CONST",
    "SQRT_LOG_OVER_LOGLOG",
    "SQRT_LOG",
    "LOG",
    "SQRT_T_LOG_T",
    "ALL_MODELS",
    "model_by_name",
    "ModelFit",
    "FitReport",
    "fit_scaling",
    "RatioStability",
    "ratio_stability",
    "QuantileRow",
    "aggregate_quantiles",
]

_MODEL_NAMES = ("CONST", "SQRT_LOG_OVER_LOGLOG", "SQRT_LOG", "LOG", "SQRT_T_LOG_T")


@dataclass(frozen=True)
class GrowthModel:
    name: str

    def __post_init__(self):
        if self.name not in _MODEL_NAMES:
            raise ValueError(f"unknown growth model {self.name!r}")

    def g(self, t: float) -> float:
        """Model value at horizon t; requires t >= 3 so log log t > 0."""
        if t < 3:
            raise ValueError("growth models are evaluated only for T >= 3")
        if self.name == "CONST":
            return 1.0
        lt = math.log(t)
        if self.name == "SQRT_LOG_OVER_LOGLOG":
            return math.sqrt(lt / math.log(lt))
        if self.name == "SQRT_LOG":
            return math.sqrt(lt)
        if self.name == "LOG":
            return lt
        return math.sqrt(t * lt)


CONST = GrowthModel("CONST")
SQRT_LOG_OVER_LOGLOG = GrowthModel("SQRT_LOG_OVER_LOGLOG")
SQRT_LOG = GrowthModel("SQRT_LOG")
LOG = GrowthModel("LOG")
SQRT_T_LOG_T = GrowthModel("SQRT_T_LOG_T")
ALL_MODELS = (CONST, SQRT_LOG_OVER_LOGLOG, SQRT_LOG, LOG, SQRT_T_LOG_T)


def model_by_name(name: str) -> GrowthModel:
    if name not in _MODEL_NAMES:
        raise ValueError(f"unknown growth model {name!r}")
    return GrowthModel(name)


@dataclass(frozen=True)
class ModelFit:
    model: str
    slope: float
    relative_residual: float


@dataclass(frozen=True)
class FitReport:
    per_model: tuple[ModelFit, ...]
    best_model: str
    ratio_series: tuple[tuple[float, float], ...]  # (T, D/g(T)) under best model


def _check_series(series, min_points: int) -> list[tuple[float, float]]:
    pts = [(float(t), float(d)) for t, d in series]
    if len(pts) < min_points:
        raise ValueError(f"need at least {min_points} points")
    for t, d in pts:
        if t < 3:
            raise ValueError("all T must be >= 3")
        if d < 0:
            raise ValueError("all D must be >= 0")
    return pts


def fit_scaling(series, models=ALL_MODELS) -> FitReport:
    """No-intercept least squares of D against each candidate g(T).

    slope a minimizes sum (D_j - a g(T_j))^2, so a = sum(D g)/sum(g^2);
    relative residual is RMS(D - a g)/RMS(D) (0 for an all-zero
    series).  Best model is the first minimizer in the given order.
    """
    pts = _check_series(series, 3)
    models = tuple(models)
    if not models:
        raise ValueError("need at least one model")
    fits = []
    best_idx = 0
    for idx, model in enumerate(models):
        gs = [model.g(t) for t, _ in pts]
        num = math.fsum(d * g for (_, d), g in zip(pts, gs))
        den = math.fsum(g * g for g in gs)
        slope = num / den
        res = math.fsum((d - slope * g) ** 2 for (_, d), g in zip(pts, gs))
        dsq = math.fsum(d * d for _, d in pts)
        rel = math.sqrt(res / dsq) if dsq > 0 else 0.0
        fits.append(ModelFit(model=model.name, slope=slope, relative_residual=rel))
        if rel < fits[best_idx].relative_residual:
            best_idx = idx
    best = models[best_idx]
    ratio_series = tuple((t, d / best.g(t)) for t, d in pts)
    return FitReport(
        per_model=tuple(fits),
        best_model=best.name,
        ratio_series=ratio_series,
    )


@dataclass(frozen=True)
class RatioStability:
    max_ratio: float
    min_ratio: float
    spread: float | None  # max/min; None (absent) when min is 0


def ratio_stability(series, model: GrowthModel) -> RatioStability:
    """Spread of D/g(T) over the series; spread 1 means exact proportionality."""
    pts = _check_series(series, 2)
    ratios = [d / model.g(t) for t, d in pts]
    hi = max(ratios)
    lo = min(ratios)
    return RatioStability(
        max_ratio=hi,
        min_ratio=lo,
        spread=hi / lo if lo > 0 else None,
    )


@dataclass(frozen=True)
class QuantileRow:
    n: int
    values: tuple[float, ...]  # aligned with the q vector passed in


def aggregate_quantiles(records: list[TrialRecord], q: list[float]) -> list[QuantileRow]:
    """Nearest-rank quantiles of D at each checkpoint across trials.

    All records must share one checkpoint schedule.  Nearest rank:
    for N sorted values, quantile p is the element at 1-based index
    max(1, ceil(p*N)), so p=0 gives the min and p=1 the max.
    """
    records = list(records)
    if not records:
        raise ValueError("need at least one record")
    qs = [float(p) for p in q]
    for p in qs:
        if not 0.0 <= p <= 1.0:
            raise ValueError("quantiles must lie in [0, 1]")
    schedule = tuple(r.n for r in records[0].records)
    for rec in records[1:]:
        if tuple(r.n for r in rec.records) != schedule:
            raise ValueError("records do not share one checkpoint schedule")
    out = []
    n_trials = len(records)
    for pos, n in enumerate(schedule):
        ds = sorted(rec.records[pos].D for rec in records)
        vals = tuple(ds[max(1, math.ceil(p * n_trials)) - 1] for p in qs)
        out.append(QuantileRow(n=n, values=vals))
    return out
