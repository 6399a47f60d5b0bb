import math

import pytest

from scfrsim.metrics import (
    CfrTracePoint,
    MeasurementRecord,
    NodeCounters,
    compute_summary,
    format_summary,
    read_records_csv,
    write_cfr_trace_csv,
    write_records_csv,
)


def rec(mid, true_t, err, r_hat=1.0001):
    return MeasurementRecord(
        measurement_id=mid,
        true_ref_time=true_t,
        estimated_head_time=true_t + err,
        error=err,
        r_hat_at_estimate=r_hat,
    )


def test_summary_arithmetic():
    records = [rec(0, 20.0, 1e-9), rec(1, 30.0, -1e-9), rec(2, 40.0, 3e-9)]
    s = compute_summary(records, warmup_s=0.0)
    assert s.count == 3
    assert s.mean_error == pytest.approx(1e-9)
    assert s.mean_abs_error == pytest.approx(5e-9 / 3)
    assert s.rmse == pytest.approx(math.sqrt(11.0 / 3.0) * 1e-9)
    assert s.max_abs_error == pytest.approx(3e-9)


def test_summary_empty_is_undefined_not_zero():
    s = compute_summary([], warmup_s=0.0)
    assert s.count == 0
    assert s.mean_error is None
    assert s.mean_abs_error is None
    assert s.rmse is None
    assert s.max_abs_error is None


def test_summary_all_zero_errors():
    s = compute_summary([rec(i, 20.0 + i, 0.0) for i in range(5)], warmup_s=0.0)
    assert s.mean_error == 0.0
    assert s.rmse == 0.0
    assert s.max_abs_error == 0.0


def test_summary_warmup_filter():
    records = [rec(0, 5.0, 1.0), rec(1, 15.0, 1e-9)]
    s = compute_summary(records, warmup_s=10.0)
    assert s.count == 1
    assert s.max_abs_error == pytest.approx(1e-9)
    assert compute_summary(records, warmup_s=0.0).count == 2
    assert compute_summary(records, warmup_s=120.0).count == 0


def test_summary_permutation_invariant():
    records = [rec(i, 20.0 + i, (i - 2) * 1e-9) for i in range(5)]
    assert compute_summary(records, 0.0) == compute_summary(list(reversed(records)), 0.0)


def test_summary_bounds():
    records = [rec(i, 20.0, e) for i, e in enumerate([2e-9, -1e-9, 5e-10])]
    s = compute_summary(records, 0.0)
    assert s.rmse >= abs(s.mean_error)
    assert s.max_abs_error >= s.mean_abs_error


def test_summary_carries_counters():
    c = NodeCounters(sensor_tx=100, sensor_rx=1200, head_tx=1200, head_rx=100)
    s = compute_summary([], 0.0, c)
    assert (s.sensor_tx, s.sensor_rx, s.head_tx, s.head_rx) == (100, 1200, 1200, 100)


def test_records_csv_roundtrip(tmp_path):
    records = [
        rec(0, 1.5, 1.2e-9),
        rec(1, 100.123456789012, -3.4e-10),
    ]
    path = tmp_path / "records.csv"
    write_records_csv(records, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "measurement_id,true_ref_time_s,estimated_head_time_s,error_s,r_hat"
    assert len(lines) == 3
    back = read_records_csv(path)
    for a, b in zip(records, back):
        assert a.measurement_id == b.measurement_id
        assert abs(a.true_ref_time - b.true_ref_time) <= 1e-12
        assert abs(a.estimated_head_time - b.estimated_head_time) <= 1e-12
        assert abs(a.error - b.error) <= 1e-12


def test_records_csv_empty(tmp_path):
    path = tmp_path / "empty.csv"
    write_records_csv([], path)
    assert path.read_text() == "measurement_id,true_ref_time_s,estimated_head_time_s,error_s,r_hat\n"


def test_records_csv_sorted_by_id(tmp_path):
    path = tmp_path / "records.csv"
    write_records_csv([rec(1, 2.0, 0.0), rec(0, 1.0, 0.0)], path)
    back = read_records_csv(path)
    assert [r.measurement_id for r in back] == [0, 1]


def test_records_csv_deterministic_bytes(tmp_path):
    records = [rec(i, 20.0 + i * 0.7, (i - 1) * 1.3e-9) for i in range(10)]
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_records_csv(records, p1)
    write_records_csv(records, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_records_csv_write_failure(tmp_path):
    with pytest.raises(OSError, match="no/such/dir"):
        write_records_csv([], tmp_path / "no" / "such" / "dir" / "x.csv")


def test_cfr_trace_csv(tmp_path):
    trace = [
        CfrTracePoint(0, 3.34e-7, 1.0),
        CfrTracePoint(1, 0.1000003, 1.0001),
        CfrTracePoint(2, 0.2000003, 1.0001),
    ]
    path = tmp_path / "cfr_trace.csv"
    write_cfr_trace_csv(trace, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "beacon_index,ref_time_s,r_hat"
    assert lines[1].startswith("0,") and lines[1].endswith(",1.0")
    assert lines[2].endswith(",1.0001")


def test_format_summary_renders_undefined():
    text = format_summary(compute_summary([], 0.0))
    assert "undefined" in text
    assert "records (post warm-up): 0" in text
