"""Message formats and node state machines.

Proposed mode reverses the two-way exchange: the head's periodic beacon
plays the "request" role and the sensor's ordinary data report plays the
"response", so the sensor transmits nothing beyond its measurement data.
The head pairs the report's echoed beacon timestamps with its own receipt
time to form the (T1, T2, T3, T4) quadruple, computes offset and delay,
and keeps the latest estimate per sensor in a central table.

Classic mode models a TPSN-style exchange round (sensor-initiated
Request/Response) for message-count comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .scfr import CfrState, RecoveredClock, cfr_estimate, cfr_update, recovered_read
from .timebase import AffineClock, clock_read


class UnknownSensorError(KeyError):
    """No synchronization information for the requested sensor yet."""


@dataclass(frozen=True)
class Beacon:
    seq: int
    t1: float  # head-clock send timestamp


@dataclass(frozen=True)
class Report:
    """Sensor data message. Beacon echo fields are all present or all absent."""

    sensor_id: str
    measurement_id: int
    t3: float  # sensor-clock measurement/transmission time
    beacon_seq: int | None = None
    t1_echo: float | None = None
    t2: float | None = None


class TwoWaySample(NamedTuple):
    t1: float  # head clock
    t2: float  # sensor clock
    t3: float  # sensor clock
    t4: float  # head clock


@dataclass(frozen=True)
class OffsetDelayEstimate:
    theta_hat: float  # sensor clock offset, seconds
    delay_hat: float  # propagation delay, seconds


class LastBeacon(NamedTuple):
    seq: int
    t1: float
    t2: float  # receipt time: recovered clock if SCFR is on, raw otherwise


@dataclass
class SensorState:
    clock: AffineClock
    scfr_enabled: bool = True
    cfr: CfrState = field(default_factory=CfrState)
    last_beacon: LastBeacon | None = None
    classic_estimate: OffsetDelayEstimate | None = None
    tx_count: int = 0
    rx_count: int = 0
    ignored_beacons: int = 0

    @property
    def recovered(self) -> RecoveredClock:
        return RecoveredClock(self.cfr)


@dataclass(frozen=True)
class TableEntry:
    estimate: OffsetDelayEstimate
    updated_at: float  # head-clock time of the update


@dataclass
class HeadState:
    clock: AffineClock
    table: dict[str, TableEntry] = field(default_factory=dict)
    tx_count: int = 0
    rx_count: int = 0
    skipped_reports: int = 0
    negative_delay_count: int = 0


@dataclass(frozen=True)
class MeasurementEstimate:
    sensor_id: str
    measurement_id: int
    estimated_head_time: float
    sample: TwoWaySample
    estimate: OffsetDelayEstimate


def estimate_offset_delay(s: TwoWaySample) -> OffsetDelayEstimate:
    """Offset and delay from one exchange.

    theta = ((T2 - T1) - (T4 - T3)) / 2, delay = ((T2 - T1) + (T4 - T3)) / 2.
    A negative delay is returned as-is; it signals skew or noise corruption
    and is counted, not clamped, by the head.
    """
    forward = s.t2 - s.t1
    backward = s.t4 - s.t3
    return OffsetDelayEstimate(
        theta_hat=(forward - backward) / 2.0,
        delay_hat=(forward + backward) / 2.0,
    )


def estimate_measurement_time(s: TwoWaySample) -> float:
    """Head-clock estimate of the sensor-clock instant T3.

    Equals t3 - theta_hat = (t1 + t3 + t4 - t2) / 2.
    """
    return (s.t1 + s.t3 + s.t4 - s.t2) / 2.0


def sensor_on_beacon(
    state: SensorState, b: Beacon, t_ref: float, rng: np.random.Generator
) -> SensorState:
    """Handle a beacon delivered at reference time ``t_ref``.

    The raw local receipt timestamp always feeds the skew estimator (it must
    see the physical clock); the stored T2 is on the recovered clock when
    SCFR is enabled.
    """
    raw = clock_read(state.clock, t_ref, rng)
    if state.last_beacon is not None and b.seq <= state.last_beacon.seq:
        state.ignored_beacons += 1
        return state
    state.rx_count += 1
    state.cfr, _ = cfr_update(state.cfr, b.t1, raw)
    t2 = recovered_read(state.recovered, raw) if state.scfr_enabled else raw
    state.last_beacon = LastBeacon(seq=b.seq, t1=b.t1, t2=t2)
    return state


def sensor_on_measurement(
    state: SensorState,
    t_ref: float,
    measurement_id: int,
    rng: np.random.Generator,
) -> Report:
    """Take a measurement at ``t_ref`` and emit the data report carrying it.

    Measurement and report transmission are simultaneous: the data message
    itself is timestamped as T3. Before the first beacon the report carries
    no echo fields and the head will skip it.
    """
    raw = clock_read(state.clock, t_ref, rng)
    t3 = recovered_read(state.recovered, raw) if state.scfr_enabled else raw
    state.tx_count += 1
    lb = state.last_beacon
    if lb is None:
        return Report(sensor_id=state.clock.node_id, measurement_id=measurement_id, t3=t3)
    return Report(
        sensor_id=state.clock.node_id,
        measurement_id=measurement_id,
        t3=t3,
        beacon_seq=lb.seq,
        t1_echo=lb.t1,
        t2=lb.t2,
    )


def head_on_report(
    head: HeadState, r: Report, t_ref: float, rng: np.random.Generator
) -> MeasurementEstimate | None:
    """Process a report arriving at ``t_ref``; returns the measurement estimate.

    Reports without beacon context are skipped (counted), not buffered.
    """
    head.rx_count += 1
    t4 = clock_read(head.clock, t_ref, rng)
    if r.beacon_seq is None:
        head.skipped_reports += 1
        return None
    sample = TwoWaySample(t1=r.t1_echo, t2=r.t2, t3=r.t3, t4=t4)
    est = estimate_offset_delay(sample)
    if est.delay_hat < 0.0:
        head.negative_delay_count += 1
    head.table[r.sensor_id] = TableEntry(estimate=est, updated_at=t4)
    return MeasurementEstimate(
        sensor_id=r.sensor_id,
        measurement_id=r.measurement_id,
        estimated_head_time=estimate_measurement_time(sample),
        sample=sample,
        estimate=est,
    )


def head_schedule_for_sensor(head: HeadState, sensor_id: str, head_time: float) -> float:
    """Translate a head-clock instant into the sensor's clock for scheduling."""
    entry = head.table.get(sensor_id)
    if entry is None:
        raise UnknownSensorError(f"no offset estimate for sensor {sensor_id!r}")
    return head_time + entry.estimate.theta_hat


def classic_exchange_round(
    sensor: SensorState,
    head: HeadState,
    t_ref: float,
    delay: float,
    sensor_rng: np.random.Generator,
    head_rng: np.random.Generator,
) -> OffsetDelayEstimate:
    """One TPSN-style sensor-initiated exchange round starting at ``t_ref``.

    Roles are mirrored relative to proposed mode: T1/T4 are on the sensor
    clock, T2/T3 on the head clock, so theta_hat is the head's offset in the
    sensor's frame. The sensor transmission here is the energy cost the
    proposed scheme removes.
    """
    t1 = clock_read(sensor.clock, t_ref, sensor_rng)
    sensor.tx_count += 1
    t2 = clock_read(head.clock, t_ref + delay, head_rng)
    head.rx_count += 1
    t3 = clock_read(head.clock, t_ref + delay, head_rng)  # immediate response
    head.tx_count += 1
    t4 = clock_read(sensor.clock, t_ref + 2.0 * delay, sensor_rng)
    sensor.rx_count += 1
    est = estimate_offset_delay(TwoWaySample(t1=t1, t2=t2, t3=t3, t4=t4))
    sensor.classic_estimate = est
    return est


def sensor_cfr_estimate(state: SensorState) -> float:
    """Current skew estimate at this sensor (1.0 until two beacons)."""
    return cfr_estimate(state.cfr)
