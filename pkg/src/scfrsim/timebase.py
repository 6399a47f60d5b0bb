"""Clock models: reference timeline and affine local clocks with timestamp noise.

Reference ("true") time is a plain float in seconds. Each node owns an
affine local clock C(t) = offset + skew * t; every timestamping action
adds an independent Gaussian noise draw from the node's random stream.
The head node's clock is the reference clock (offset 0, skew 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClockParams:
    """Parameters of an affine clock relative to the reference timeline."""

    offset: float = 0.0       # initial offset at reference time 0, seconds
    skew: float = 1.0         # frequency ratio of this clock to the reference
    noise_sigma: float = 0.0  # std dev of timestamping noise, seconds

    def __post_init__(self) -> None:
        if not self.skew > 0.0:
            raise ValueError(f"clock skew must be > 0, got {self.skew}")
        if self.noise_sigma < 0.0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")


@dataclass(frozen=True)
class AffineClock:
    """A node's local clock. Noiseless reading is offset + skew * t_ref."""

    params: ClockParams
    node_id: str = ""


def clock_read(clock: AffineClock, t_ref: float, rng: np.random.Generator) -> float:
    """Timestamp reference instant ``t_ref`` on this clock, with noise.

    Always consumes exactly one draw from ``rng`` so that stream alignment
    is independent of the noise level; the draw is exactly 0.0 when
    noise_sigma is 0. Negative results near t_ref = 0 are legal (the noise
    is unbounded).
    """
    p = clock.params
    return p.offset + p.skew * t_ref + rng.normal(0.0, p.noise_sigma)


def true_offset_at(clock: AffineClock, t_ref: float) -> float:
    """Instantaneous offset of this clock from the reference at ``t_ref``."""
    p = clock.params
    return p.offset + (p.skew - 1.0) * t_ref
