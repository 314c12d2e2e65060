"""Command-line interface: simulate, sweep, drift, omega-table, verify.

Exit codes: 0 success, 1 invariant or trial failure, 2 usage or
configuration error.  File outputs go to the paths in the config's
"output" section; with no path set, the primary result is printed to
stdout.
"""

from __future__ import annotations

import argparse
import sys

from . import serialize, verify
from .config import ConfigError, ExperimentConfig, expand_trials, parse_config
from .distributions import PathologicalOmega, build_length_scales
from .engine import (
    KernelInvariantError,
    SweepError,
    run_drift_probe,
    run_sweep,
    run_trial,
)


def _load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    return parse_config(text)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit(text: str, path: str | None, label: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        _write_text(path, text)
        print(f"{label} written to {path}")


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    trials = expand_trials(cfg)
    if len(trials) != 1:
        raise ConfigError(
            f"simulate expects exactly one trial (trials=1, no sweep); config expands to {len(trials)}"
        )
    record = run_trial(trials[0])
    _emit(serialize.format_records_csv([record]), cfg.output.records, "records")
    if cfg.output.summary is not None:
        _write_text(cfg.output.summary, serialize.dump_json(serialize.build_summary(cfg, [record])))
        print(f"summary written to {cfg.output.summary}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    trials = expand_trials(cfg)
    records = run_sweep(trials, parallelism=cfg.parallelism)
    _emit(serialize.format_records_csv(records), cfg.output.records, "records")
    summary_text = serialize.dump_json(serialize.build_summary(cfg, records))
    if cfg.output.summary is not None:
        _write_text(cfg.output.summary, summary_text)
        print(f"summary written to {cfg.output.summary}")
    elif cfg.output.records is not None:
        sys.stdout.write(summary_text)
    return 0


def cmd_drift(args) -> int:
    cfg = _load_config(args.config)
    if cfg.drift is None:
        raise ConfigError("drift command needs a 'drift' section in the config")
    trials = expand_trials(cfg)
    if len(trials) != 1:
        raise ConfigError(
            f"drift expects exactly one trial config (trials=1, no sweep); config expands to {len(trials)}"
        )
    estimates = run_drift_probe(
        trials[0],
        cfg.drift.pair,
        list(cfg.drift.buckets),
        burn_in=cfg.drift.burn_in,
        n_steps=cfg.drift.n_steps,
        reseed_range=cfg.drift.reseed,
    )
    try:
        text = serialize.dump_json(serialize.drift_to_dict(estimates))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(text, cfg.output.summary, "drift estimates")
    return 0


def cmd_omega_table(args) -> int:
    cfg = _load_config(args.config)
    dist = cfg.distribution
    if not isinstance(dist, PathologicalOmega):
        raise ConfigError("omega-table needs distribution.variant = 'pathological'")
    table = build_length_scales(dist.omega, dist.s_cap)
    _emit(serialize.omega_table_csv(table), cfg.output.records, "omega table")
    return 0


def cmd_verify(args) -> int:
    results = verify.run_all()
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        detail = f" ({res.detail})" if res.detail else ""
        print(f"{status} {res.name}{detail}")
        if not res.passed:
            failed += 1
    print(f"{len(results) - failed} passed, {failed} failed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vecbal",
        description="Online vector balancing simulations: k bins fed i.i.d. vectors from the unit ball.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one trial, emit its records CSV")
    p.add_argument("config", help="path to a JSON config file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a sweep, emit records CSV and a summary JSON")
    p.add_argument("config", help="path to a JSON config file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("drift", help="estimate per-bucket one-step drift of a tracked bin pair")
    p.add_argument("config", help="path to a JSON config file with a 'drift' section")
    p.set_defaults(func=cmd_drift)

    p = sub.add_parser("omega-table", help="dump the length-scale table of a pathological distribution")
    p.add_argument("config", help="path to a JSON config file with a pathological distribution")
    p.set_defaults(func=cmd_omega_table)

    p = sub.add_parser("verify", help="run the deterministic invariant suite")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KernelInvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1
    except SweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
