"""Error statistics, message counters, and CSV trace output."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable


@dataclass(frozen=True)
class MeasurementRecord:
    """One estimated measurement: ground truth vs. head-side estimate."""

    measurement_id: int
    true_ref_time: float
    estimated_head_time: float
    error: float  # estimated - true, seconds
    r_hat_at_estimate: float


@dataclass(frozen=True)
class CfrTracePoint:
    beacon_index: int
    ref_time: float
    r_hat: float


@dataclass(frozen=True)
class NodeCounters:
    sensor_tx: int = 0
    sensor_rx: int = 0
    head_tx: int = 0
    head_rx: int = 0


@dataclass(frozen=True)
class SummaryStats:
    """Post-warm-up error statistics. Stats are None (not zero) when empty."""

    count: int
    mean_error: float | None
    mean_abs_error: float | None
    rmse: float | None
    max_abs_error: float | None
    sensor_tx: int
    sensor_rx: int
    head_tx: int
    head_rx: int


def compute_summary(
    records: Iterable[MeasurementRecord],
    warmup_s: float,
    counters: NodeCounters | None = None,
) -> SummaryStats:
    """Summarize estimation errors, excluding records before ``warmup_s``."""
    c = counters or NodeCounters()
    errors = [r.error for r in records if r.true_ref_time >= warmup_s]
    if not errors:
        return SummaryStats(
            count=0,
            mean_error=None,
            mean_abs_error=None,
            rmse=None,
            max_abs_error=None,
            sensor_tx=c.sensor_tx,
            sensor_rx=c.sensor_rx,
            head_tx=c.head_tx,
            head_rx=c.head_rx,
        )
    n = len(errors)
    # fsum keeps the statistics exactly permutation-invariant
    return SummaryStats(
        count=n,
        mean_error=math.fsum(errors) / n,
        mean_abs_error=math.fsum(abs(e) for e in errors) / n,
        rmse=math.sqrt(math.fsum(e * e for e in errors) / n),
        max_abs_error=max(abs(e) for e in errors),
        sensor_tx=c.sensor_tx,
        sensor_rx=c.sensor_rx,
        head_tx=c.head_tx,
        head_rx=c.head_rx,
    )


def _fmt(x: float) -> str:
    # repr() gives the shortest string that round-trips the double exactly;
    # ns-scale errors on 100 s-scale values need that full precision.
    return repr(float(x))


def write_records_csv(records: Iterable[MeasurementRecord], destination: str | Path) -> None:
    """Write measurement records, one row per record, in measurement_id order."""
    rows = sorted(records, key=lambda r: r.measurement_id)
    try:
        with open(destination, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(
                ["measurement_id", "true_ref_time_s", "estimated_head_time_s", "error_s", "r_hat"]
            )
            for r in rows:
                w.writerow(
                    [
                        r.measurement_id,
                        _fmt(r.true_ref_time),
                        _fmt(r.estimated_head_time),
                        _fmt(r.error),
                        _fmt(r.r_hat_at_estimate),
                    ]
                )
    except OSError as exc:
        raise OSError(f"failed writing records CSV to {destination}: {exc}") from exc


def read_records_csv(source: str | Path) -> list[MeasurementRecord]:
    """Parse a file written by write_records_csv."""
    out = []
    with open(source, newline="") as f:
        for row in csv.DictReader(f):
            out.append(
                MeasurementRecord(
                    measurement_id=int(row["measurement_id"]),
                    true_ref_time=float(row["true_ref_time_s"]),
                    estimated_head_time=float(row["estimated_head_time_s"]),
                    error=float(row["error_s"]),
                    r_hat_at_estimate=float(row["r_hat"]),
                )
            )
    return out


def write_cfr_trace_csv(trace: Iterable[CfrTracePoint], destination: str | Path) -> None:
    """Write the skew-estimate trace sampled after each beacon."""
    try:
        with open(destination, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["beacon_index", "ref_time_s", "r_hat"])
            for p in trace:
                w.writerow([p.beacon_index, _fmt(p.ref_time), _fmt(p.r_hat)])
    except OSError as exc:
        raise OSError(f"failed writing trace CSV to {destination}: {exc}") from exc


def format_summary(stats: SummaryStats) -> str:
    """Aligned plain-text rendering for the CLI."""
    def sec(v: float | None) -> str:
        return "undefined" if v is None else f"{v:.6e} s"

    lines = [
        f"  records (post warm-up): {stats.count}",
        f"  mean error:             {sec(stats.mean_error)}",
        f"  mean |error|:           {sec(stats.mean_abs_error)}",
        f"  rmse:                   {sec(stats.rmse)}",
        f"  max |error|:            {sec(stats.max_abs_error)}",
        f"  sensor tx/rx:           {stats.sensor_tx}/{stats.sensor_rx}",
        f"  head tx/rx:             {stats.head_tx}/{stats.head_rx}",
    ]
    return "\n".join(lines)
