"""Bit-exact result serialization: records CSV, summary JSON, table dumps.

Floats are printed with repr (shortest decimal that round-trips the
exact binary value), so output files are byte-stable across runs and
platforms and usable as golden files.
"""

from __future__ import annotations

import hashlib
import json

from . import analysis
from .config import ExperimentConfig, serialize_config
from .distributions import LengthScaleTable
from .engine import DriftEstimate, TrialRecord

CSV_HEADER = "trial_index,seed,n,D,S,max_pair,merged_imb"

SUMMARY_QUANTILES = (0.1, 0.5, 0.9)


def fmt_float(x: float) -> str:
    return repr(float(x))


def format_records_csv(records: list[TrialRecord]) -> str:
    lines = [CSV_HEADER]
    for rec in records:
        for row in rec.records:
            lines.append(
                f"{rec.trial_index},{rec.seed},{row.n},"
                f"{fmt_float(row.D)},{fmt_float(row.S)},"
                f"{fmt_float(row.max_pair)},{fmt_float(row.merged_imb)}"
            )
    return "\n".join(lines) + "\n"


def experiment_digest(cfg: ExperimentConfig) -> str:
    text = json.dumps(serialize_config(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def build_summary(cfg: ExperimentConfig, records: list[TrialRecord]) -> dict:
    """Digest + per-checkpoint quantiles of D + growth-law fit report.

    Quantiles and fit need a shared checkpoint schedule across trials;
    a heterogeneous sweep gets a note instead.  The fit uses the
    median series restricted to checkpoints with n >= 3 (model domain)
    and needs at least three of them.
    """
    summary: dict = {
        "configDigest": experiment_digest(cfg),
        "trials": len(records),
    }
    try:
        q_rows = analysis.aggregate_quantiles(records, list(SUMMARY_QUANTILES))
    except ValueError:
        summary["quantiles"] = None
        summary["fit"] = None
        summary["note"] = "heterogeneous checkpoint schedules; aggregate statistics omitted"
        return summary

    quantiles: dict = {"n": [row.n for row in q_rows]}
    for pos, q in enumerate(SUMMARY_QUANTILES):
        quantiles[str(q)] = [row.values[pos] for row in q_rows]
    summary["quantiles"] = quantiles

    median_pos = SUMMARY_QUANTILES.index(0.5)
    series = [(row.n, row.values[median_pos]) for row in q_rows if row.n >= 3]
    if len(series) >= 3:
        report = analysis.fit_scaling(series)
        summary["fit"] = {
            "bestModel": report.best_model,
            "perModel": [
                {
                    "model": f.model,
                    "slope": f.slope,
                    "relativeResidual": f.relative_residual,
                }
                for f in report.per_model
            ],
            "ratioSeries": [[t, r] for t, r in report.ratio_series],
        }
    else:
        summary["fit"] = None
    return summary


def drift_to_dict(estimates: list[DriftEstimate]) -> dict:
    rows = []
    for est in estimates:
        rows.append(
            {
                "bucketLow": est.bucket_low,
                "bucketHigh": est.bucket_high,
                "count": est.count,
                "meanDelta": est.mean_delta,
                "stdErr": est.std_err,
                "events": {
                    name: {
                        "count": s.count,
                        "meanDelta": s.mean_delta,
                        "stdErr": s.std_err,
                    }
                    for name, s in est.events
                },
            }
        )
    return {"estimates": rows}


def omega_table_csv(table: LengthScaleTable) -> str:
    lines = ["s,L_s,T_s,tail_mass"]
    for entry in table.entries:
        t_s = "overflow" if entry.saturated else str(int(entry.horizon))
        lines.append(
            f"{entry.s},{fmt_float(entry.length_scale)},{t_s},{fmt_float(table.tail_mass)}"
        )
    return "\n".join(lines) + "\n"


def dump_json(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
