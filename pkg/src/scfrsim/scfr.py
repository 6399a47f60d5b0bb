"""Source clock frequency recovery at a sensor node.

The sensor observes a one-way stream of timestamped beacons from the head
and estimates the frequency ratio of its own clock to the head clock as a
cumulative ratio: elapsed local time over elapsed source time between the
first and the latest beacon. The recovered clock keeps the local offset at
the anchor but runs at the estimated head frequency (syntonized, not
synchronized).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CfrState:
    """Cumulative-ratio estimator state, anchored at the first beacon.

    Only the anchor pair and the latest pair are kept; intermediate beacons
    contribute nothing to the cumulative ratio.
    """

    anchor_src_ts: float = 0.0
    anchor_local_ts: float = 0.0
    latest_src_ts: float = 0.0
    latest_local_ts: float = 0.0
    sample_count: int = 0


@dataclass(frozen=True)
class RecoveredClock:
    """Local clock re-rated to the estimated source frequency."""

    cfr: CfrState


def cfr_update(state: CfrState, src_ts: float, local_ts: float) -> tuple[CfrState, bool]:
    """Consume one (source timestamp, local receipt timestamp) pair.

    Returns the new state and an acceptance flag. A non-increasing source
    timestamp is rejected with the state unchanged: the channel is FIFO, so
    an out-of-order or duplicate beacon indicates a harness bug upstream.
    """
    if state.sample_count == 0:
        return (
            CfrState(
                anchor_src_ts=src_ts,
                anchor_local_ts=local_ts,
                latest_src_ts=src_ts,
                latest_local_ts=local_ts,
                sample_count=1,
            ),
            True,
        )
    if src_ts <= state.latest_src_ts:
        return state, False
    return (
        CfrState(
            anchor_src_ts=state.anchor_src_ts,
            anchor_local_ts=state.anchor_local_ts,
            latest_src_ts=src_ts,
            latest_local_ts=local_ts,
            sample_count=state.sample_count + 1,
        ),
        True,
    )


def cfr_estimate(state: CfrState) -> float:
    """Current skew estimate; 1.0 until two beacons have been seen."""
    if state.sample_count < 2:
        return 1.0
    return (state.latest_local_ts - state.anchor_local_ts) / (
        state.latest_src_ts - state.anchor_src_ts
    )


def recovered_read(rc: RecoveredClock, local_ts: float) -> float:
    """Map a raw local timestamp onto the recovered (source-rate) clock.

    The anchor is a fixed point: recovered_read(anchor_local_ts) equals
    anchor_local_ts. Before two beacons this is the identity.
    """
    r_hat = cfr_estimate(rc.cfr)
    anchor = rc.cfr.anchor_local_ts
    return anchor + (local_ts - anchor) / r_hat
