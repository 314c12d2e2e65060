"""Online vector balancing: k bins absorb an i.i.d. stream of vectors.

Simulation library and CLI for studying how large the largest gap
between bin sums grows when unit-ball vectors arrive one at a time and
an online rule must place each immediately: assignment strategies
(uniform-random, greedy-1d, inner-product, best-of-two), input
distributions (uniform ball, atomic, mixtures, an adversarial planar
family), a byte-reproducible trial engine with compiled hot loops,
drift and step-law probes, and growth-law fitting.
"""

from .analysis import (
    ALL_MODELS,
    CONST,
    LOG,
    SQRT_LOG,
    SQRT_LOG_OVER_LOGLOG,
    SQRT_T_LOG_T,
    FitReport,
    GrowthModel,
    QuantileRow,
    RatioStability,
    aggregate_quantiles,
    fit_scaling,
    model_by_name,
    ratio_stability,
)
from .config import ConfigError, ExperimentConfig, expand_trials, parse_config, serialize_config
from .core import BinEnsemble, PairObservables
from .distributions import (
    Atomic,
    BuiltinOmega,
    CmuEstimate,
    LengthScaleEntry,
    LengthScaleTable,
    Mixture,
    OmegaDomainError,
    PathologicalOmega,
    SlabEstimate,
    TableOmega,
    UniformBall,
    build_length_scales,
    estimate_cmu,
    sample_block,
    slab_probability_estimate,
)
from .engine import (
    CheckpointRecord,
    DriftEstimate,
    KernelInvariantError,
    StepProbeResult,
    SweepError,
    TrialConfig,
    TrialRecord,
    checkpoint_schedule,
    config_digest,
    derive_trial_seed,
    run_drift_probe,
    run_step_distribution_probe,
    run_sweep,
    run_trial,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .kernels import HAVE_CYTHON
from .rng import Stream, mix64
from .strategies import (
    BEST_OF_TWO,
    GREEDY_1D,
    INNER_PRODUCT,
    STRATEGY_NAMES,
    UNIFORM_RANDOM,
    AssignmentDecision,
    StrategySpec,
    assign,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_MODELS",
    "AssignmentDecision",
    "Atomic",
    "BEST_OF_TWO",
    "BinEnsemble",
    "BuiltinOmega",
    "CONST",
    "CheckpointRecord",
    "CmuEstimate",
    "ConfigError",
    "DriftEstimate",
    "ExperimentConfig",
    "FitReport",
    "GREEDY_1D",
    "GrowthModel",
    "HAVE_CYTHON",
    "INNER_PRODUCT",
    "KERNEL_BACKEND",
    "KernelInvariantError",
    "LOG",
    "LengthScaleEntry",
    "LengthScaleTable",
    "Mixture",
    "OmegaDomainError",
    "PairObservables",
    "PathologicalOmega",
    "QuantileRow",
    "RatioStability",
    "SQRT_LOG",
    "SQRT_LOG_OVER_LOGLOG",
    "SQRT_T_LOG_T",
    "STRATEGY_NAMES",
    "SlabEstimate",
    "StepProbeResult",
    "Stream",
    "StrategySpec",
    "SweepError",
    "TableOmega",
    "TrialConfig",
    "TrialRecord",
    "UNIFORM_RANDOM",
    "UniformBall",
    "aggregate_quantiles",
    "assign",
    "build_length_scales",
    "checkpoint_schedule",
    "config_digest",
    "derive_trial_seed",
    "estimate_cmu",
    "expand_trials",
    "fit_scaling",
    "mix64",
    "model_by_name",
    "parse_config",
    "ratio_stability",
    "run_drift_probe",
    "run_step_distribution_probe",
    "run_sweep",
    "run_trial",
    "sample_block",
    "serialize_config",
    "slab_probability_estimate",
    "__version__",
]
