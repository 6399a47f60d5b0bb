"""Deterministic discrete-event simulation of one head and its sensors.

Events are processed in (time, scheduling order) so ties break
deterministically. All randomness comes from named substreams spawned from
the master seed: one per-node timestamp-noise stream and one
measurement-times stream per sensor, plus the head's stream. Toggling SCFR
on or off changes neither event times nor noise draws, only the estimates.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import protocol
from .metrics import CfrTracePoint, MeasurementRecord, NodeCounters
from .timebase import AffineClock, ClockParams, clock_read

SPEED_OF_LIGHT_M_S = 299_792_458.0


class ConfigError(ValueError):
    """Invalid simulation configuration; message names the offending field."""


@dataclass(frozen=True)
class SimConfig:
    duration: float = 120.0
    beacon_interval: float = 0.1
    n_measurements: int = 100
    distance_m: float = 100.0
    skew_ppm: float = 100.0
    offset_s: float = 1.0
    noise_sigma: float = 1e-9
    scfr_enabled: bool = True
    mode: str = "proposed"  # "proposed" | "classic"
    seed: int = 0
    warmup_s: float = 10.0  # metrics-only exclusion
    n_sensors: int = 1
    # Optional per-sensor clock parameters; None means every sensor uses the
    # scalar skew_ppm/offset_s/noise_sigma above.
    sensor_params: tuple[ClockParams, ...] | None = None

    def validate(self) -> None:
        if not self.duration > 0:
            raise ConfigError(f"duration must be > 0, got {self.duration}")
        if not self.beacon_interval > 0:
            raise ConfigError(f"beacon-interval must be > 0, got {self.beacon_interval}")
        if self.n_measurements < 0:
            raise ConfigError(f"measurements must be >= 0, got {self.n_measurements}")
        if self.distance_m < 0:
            raise ConfigError(f"distance must be >= 0, got {self.distance_m}")
        if self.noise_sigma < 0:
            raise ConfigError(f"noise-std must be >= 0, got {self.noise_sigma}")
        if self.warmup_s < 0:
            raise ConfigError(f"warmup must be >= 0, got {self.warmup_s}")
        if self.n_sensors < 1:
            raise ConfigError(f"sensors must be >= 1, got {self.n_sensors}")
        if self.mode not in ("proposed", "classic"):
            raise ConfigError(f"mode must be 'proposed' or 'classic', got {self.mode!r}")
        if self.sensor_params is not None and len(self.sensor_params) != self.n_sensors:
            raise ConfigError(
                f"sensor-params length {len(self.sensor_params)} != sensors {self.n_sensors}"
            )


class EventKind(enum.Enum):
    BEACON_SEND = "beacon_send"
    BEACON_ARRIVE = "beacon_arrive"
    MEASUREMENT = "measurement"
    REPORT_ARRIVE = "report_arrive"
    CLASSIC_ROUND = "classic_round"


@dataclass(frozen=True)
class Event:
    time: float
    kind: EventKind
    sensor_idx: int = -1
    beacon: protocol.Beacon | None = None
    report: protocol.Report | None = None
    measurement_id: int = -1
    true_time: float = math.nan


class EventQueue:
    """Min-heap on (time, scheduling sequence number)."""

    def __init__(self) -> None:
        self._heap: list[tuple[float, int, Event]] = []
        self._seq = 0

    def push(self, ev: Event) -> None:
        heapq.heappush(self._heap, (ev.time, self._seq, ev))
        self._seq += 1

    def pop(self) -> Event:
        return heapq.heappop(self._heap)[2]

    def __len__(self) -> int:
        return len(self._heap)


@dataclass
class SimResult:
    records: list[MeasurementRecord]
    counters: NodeCounters
    cfr_trace: list[CfrTracePoint]
    estimates: list[protocol.MeasurementEstimate] = field(default_factory=list)
    sensors: list[protocol.SensorState] = field(default_factory=list)
    head: protocol.HeadState | None = None


def propagation_delay(distance_m: float) -> float:
    """Radio propagation delay over a line-of-sight link at vacuum light speed."""
    return distance_m / SPEED_OF_LIGHT_M_S


def gen_measurement_times(n: int, duration: float, rng: np.random.Generator) -> list[float]:
    """Exactly-n arrival times of a Poisson process conditioned on its count.

    Given n arrivals in [0, duration), the arrival times are distributed as
    the order statistics of n i.i.d. uniforms, so draw and sort.
    """
    return sorted(rng.uniform(0.0, duration, size=n).tolist())


def _beacon_send_times(duration: float, interval: float) -> list[float]:
    times = []
    k = 0
    while True:
        t = k * interval
        if t >= duration:
            break
        times.append(t)
        k += 1
    return times


def run(config: SimConfig) -> SimResult:
    """Execute one scenario; a pure function of the config."""
    config.validate()
    delay = propagation_delay(config.distance_m)
    n = config.n_sensors

    ss = np.random.SeedSequence(config.seed)
    children = ss.spawn(1 + 2 * n)
    head_rng = np.random.default_rng(children[0])
    sensor_rngs = [np.random.default_rng(c) for c in children[1 : 1 + n]]
    meas_rngs = [np.random.default_rng(c) for c in children[1 + n :]]

    head = protocol.HeadState(
        clock=AffineClock(ClockParams(0.0, 1.0, config.noise_sigma), node_id="head")
    )
    if config.sensor_params is not None:
        params = list(config.sensor_params)
    else:
        base = ClockParams(
            offset=config.offset_s,
            skew=1.0 + config.skew_ppm * 1e-6,
            noise_sigma=config.noise_sigma,
        )
        params = [base] * n
    sensors = [
        protocol.SensorState(
            clock=AffineClock(p, node_id=f"sensor{i}"),
            scfr_enabled=config.scfr_enabled,
        )
        for i, p in enumerate(params)
    ]

    queue = EventQueue()
    for i in range(n):
        for mid, t in enumerate(gen_measurement_times(config.n_measurements, config.duration, meas_rngs[i])):
            queue.push(Event(time=t, kind=EventKind.MEASUREMENT, sensor_idx=i, measurement_id=mid))
    if config.mode == "proposed":
        for seq, t in enumerate(_beacon_send_times(config.duration, config.beacon_interval)):
            queue.push(Event(time=t, kind=EventKind.BEACON_SEND, measurement_id=seq))
    else:
        for i in range(n):
            for t in _beacon_send_times(config.duration, config.beacon_interval):
                queue.push(Event(time=t, kind=EventKind.CLASSIC_ROUND, sensor_idx=i))

    records: list[MeasurementRecord] = []
    estimates: list[protocol.MeasurementEstimate] = []
    cfr_trace: list[CfrTracePoint] = []
    last_time = -math.inf

    while len(queue):
        ev = queue.pop()
        assert ev.time >= last_time, "event queue produced a time in the past"
        last_time = ev.time

        if ev.kind is EventKind.BEACON_SEND:
            t1 = clock_read(head.clock, ev.time, head_rng)
            head.tx_count += 1  # one broadcast transmission regardless of fan-out
            beacon = protocol.Beacon(seq=ev.measurement_id, t1=t1)
            for i in range(n):
                queue.push(
                    Event(time=ev.time + delay, kind=EventKind.BEACON_ARRIVE, sensor_idx=i, beacon=beacon)
                )

        elif ev.kind is EventKind.BEACON_ARRIVE:
            sensor = sensors[ev.sensor_idx]
            protocol.sensor_on_beacon(sensor, ev.beacon, ev.time, sensor_rngs[ev.sensor_idx])
            if ev.sensor_idx == 0:
                cfr_trace.append(
                    CfrTracePoint(
                        beacon_index=ev.beacon.seq,
                        ref_time=ev.time,
                        r_hat=protocol.sensor_cfr_estimate(sensor),
                    )
                )

        elif ev.kind is EventKind.MEASUREMENT:
            sensor = sensors[ev.sensor_idx]
            if config.mode == "proposed":
                report = protocol.sensor_on_measurement(
                    sensor, ev.time, ev.measurement_id, sensor_rngs[ev.sensor_idx]
                )
                queue.push(
                    Event(
                        time=ev.time + delay,
                        kind=EventKind.REPORT_ARRIVE,
                        sensor_idx=ev.sensor_idx,
                        report=report,
                        measurement_id=ev.measurement_id,
                        true_time=ev.time,
                    )
                )
            else:
                # Classic mode: the sensor corrects its own timestamp with the
                # latest exchange estimate and ships the head-frame time.
                raw = clock_read(sensor.clock, ev.time, sensor_rngs[ev.sensor_idx])
                sensor.tx_count += 1
                est = sensor.classic_estimate
                report = protocol.Report(
                    sensor_id=sensor.clock.node_id,
                    measurement_id=ev.measurement_id,
                    t3=raw + est.theta_hat if est is not None else raw,
                    beacon_seq=0 if est is not None else None,
                )
                queue.push(
                    Event(
                        time=ev.time + delay,
                        kind=EventKind.REPORT_ARRIVE,
                        sensor_idx=ev.sensor_idx,
                        report=report,
                        measurement_id=ev.measurement_id,
                        true_time=ev.time,
                    )
                )

        elif ev.kind is EventKind.REPORT_ARRIVE:
            sensor = sensors[ev.sensor_idx]
            if config.mode == "proposed":
                est = protocol.head_on_report(head, ev.report, ev.time, head_rng)
                if est is not None:
                    estimates.append(est)
                    records.append(
                        MeasurementRecord(
                            measurement_id=ev.measurement_id,
                            true_ref_time=ev.true_time,
                            estimated_head_time=est.estimated_head_time,
                            error=est.estimated_head_time - ev.true_time,
                            r_hat_at_estimate=protocol.sensor_cfr_estimate(sensor),
                        )
                    )
            else:
                head.rx_count += 1
                if ev.report.beacon_seq is not None:
                    records.append(
                        MeasurementRecord(
                            measurement_id=ev.measurement_id,
                            true_ref_time=ev.true_time,
                            estimated_head_time=ev.report.t3,
                            error=ev.report.t3 - ev.true_time,
                            r_hat_at_estimate=1.0,
                        )
                    )
                else:
                    head.skipped_reports += 1

        elif ev.kind is EventKind.CLASSIC_ROUND:
            protocol.classic_exchange_round(
                sensors[ev.sensor_idx], head, ev.time, delay, sensor_rngs[ev.sensor_idx], head_rng
            )

    counters = NodeCounters(
        sensor_tx=sum(s.tx_count for s in sensors),
        sensor_rx=sum(s.rx_count for s in sensors),
        head_tx=head.tx_count,
        head_rx=head.rx_count,
    )
    records.sort(key=lambda r: (r.measurement_id,))
    return SimResult(
        records=records,
        counters=counters,
        cfr_trace=cfr_trace,
        estimates=estimates,
        sensors=sensors,
        head=head,
    )
