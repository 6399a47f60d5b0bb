import numpy as np
import pytest

from scfrsim.scfr import CfrState, RecoveredClock, cfr_estimate, cfr_update, recovered_read
from scfrsim.timebase import AffineClock, ClockParams, clock_read


def feed(pairs):
    state = CfrState()
    for src, local in pairs:
        state, accepted = cfr_update(state, src, local)
        assert accepted
    return state


def test_update_anchors_first_pair():
    state, accepted = cfr_update(CfrState(), 0.0, 100.0)
    assert accepted
    assert state.anchor_src_ts == 0.0
    assert state.anchor_local_ts == 100.0
    assert state.sample_count == 1


def test_update_latest_pair():
    state = feed([(0.0, 100.0), (0.1, 100.10001)])
    assert state.latest_src_ts == 0.1
    assert state.latest_local_ts == 100.10001
    assert state.sample_count == 2


def test_update_rejects_out_of_order():
    state = feed([(0.0, 100.0), (0.1, 100.10001)])
    rejected_state, accepted = cfr_update(state, 0.05, 123.0)
    assert not accepted
    assert rejected_state == state
    # duplicate of the anchor is rejected too
    _, accepted = cfr_update(state, 0.0, 99.0)
    assert not accepted


def test_estimate_default_before_two_samples():
    assert cfr_estimate(CfrState()) == 1.0
    state = feed([(0.0, 100.0)])
    assert cfr_estimate(state) == 1.0


def test_estimate_noiseless_ratio():
    state = feed([(0.0, 100.0), (0.2, 100.20002)])
    assert cfr_estimate(state) == pytest.approx(1.0001, rel=1e-12)


def test_estimate_noiseless_exact_any_spacing():
    skew = 1.0001
    rng = np.random.default_rng(3)
    sources = np.sort(rng.uniform(0, 100, size=20))
    state = CfrState()
    for s in sources:
        state, _ = cfr_update(state, s, 7.0 + skew * s)
        if state.sample_count >= 2:
            assert cfr_estimate(state) == pytest.approx(skew, rel=1e-12)


def test_estimate_converges_with_noise():
    # 1 ns timestamp noise on both sides, beacons every 100 ms over 120 s.
    rng = np.random.default_rng(42)
    head = AffineClock(ClockParams(0.0, 1.0, 1e-9))
    sensor = AffineClock(ClockParams(1.0, 1.0001, 1e-9))
    state = CfrState()
    for k in range(1200):
        t = 0.1 * k
        state, _ = cfr_update(state, clock_read(head, t, rng), clock_read(sensor, t, rng))
    assert abs(cfr_estimate(state) - 1.0001) <= 1e-9


def test_recovered_read_examples():
    state = feed([(0.0, 100.0), (1.0, 100.0 + 1.0001)])
    rc = RecoveredClock(state)
    assert cfr_estimate(state) == pytest.approx(1.0001, rel=1e-12)
    assert recovered_read(rc, 101.0001) == pytest.approx(101.0, abs=1e-12)
    # identity when no information yet
    assert recovered_read(RecoveredClock(CfrState()), 42.0) == 42.0


def test_recovered_intervals_match_reference():
    # with the exact skew recovered, intervals on the recovered clock equal
    # reference intervals
    skew = 1.0003
    offset = 5.0
    state = feed([(0.0, offset), (10.0, offset + skew * 10.0)])
    rc = RecoveredClock(state)
    rng = np.random.default_rng(9)
    for _ in range(100):
        ta, tb = sorted(rng.uniform(0, 120, size=2))
        la, lb = offset + skew * ta, offset + skew * tb
        assert recovered_read(rc, lb) - recovered_read(rc, la) == pytest.approx(
            tb - ta, abs=1e-12
        )


def test_anchor_fixed_point():
    state = feed([(0.0, 100.0), (5.0, 105.0007)])
    rc = RecoveredClock(state)
    assert recovered_read(rc, 100.0) == 100.0


def test_noise_std_shrinks_with_span():
    # 1000 seeded trials each: estimator scatter strictly smaller at 100 s
    # span than at 1 s span
    skew = 1.0001
    sigma = 1e-9

    def trial_std(span, seed):
        rng = np.random.default_rng(seed)
        errs = []
        for _ in range(1000):
            state = feed(
                [
                    (0.0, 2.0 + rng.normal(0, sigma)),
                    (span, 2.0 + skew * span + rng.normal(0, sigma)),
                ]
            )
            errs.append(cfr_estimate(state) - skew)
        return np.std(errs)

    assert trial_std(100.0, 11) < trial_std(1.0, 11)


def test_estimate_positive_for_positive_skew():
    state = feed([(0.0, 50.0), (0.1, 50.0999)])
    assert cfr_estimate(state) > 0
