"""Discrete-event simulator for energy-efficient WSN time synchronization.

A head node broadcasts timestamped beacons; battery-powered sensors recover
the head clock frequency from the one-way beacon stream and piggyback the
reverse two-way exchange on their ordinary data reports, so each sensor
transmits exactly once per measurement.
"""

from .engine import ConfigError, SimConfig, SimResult, gen_measurement_times, propagation_delay, run
from .metrics import (
    CfrTracePoint,
    MeasurementRecord,
    NodeCounters,
    SummaryStats,
    compute_summary,
    write_cfr_trace_csv,
    write_records_csv,
)
from .protocol import (
    Beacon,
    OffsetDelayEstimate,
    Report,
    TwoWaySample,
    estimate_measurement_time,
    estimate_offset_delay,
)
from .scfr import CfrState, RecoveredClock, cfr_estimate, cfr_update, recovered_read
from .timebase import AffineClock, ClockParams, clock_read, true_offset_at

__all__ = [
    "AffineClock",
    "Beacon",
    "CfrState",
    "CfrTracePoint",
    "ClockParams",
    "ConfigError",
    "MeasurementRecord",
    "NodeCounters",
    "OffsetDelayEstimate",
    "RecoveredClock",
    "Report",
    "SimConfig",
    "SimResult",
    "SummaryStats",
    "TwoWaySample",
    "cfr_estimate",
    "cfr_update",
    "clock_read",
    "compute_summary",
    "estimate_measurement_time",
    "estimate_offset_delay",
    "gen_measurement_times",
    "propagation_delay",
    "recovered_read",
    "run",
    "true_offset_at",
    "write_cfr_trace_csv",
    "write_records_csv",
]
