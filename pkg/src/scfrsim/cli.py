"""Command-line entry point: single runs, sweeps, and the fixed scenario matrix."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import ConfigError, SimConfig, run
from .metrics import compute_summary, format_summary, write_cfr_trace_csv, write_records_csv


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--duration", type=float, default=120.0, help="observation window, seconds")
    p.add_argument("--beacon-interval", type=float, default=0.1, help="head beacon period, seconds")
    p.add_argument("--measurements", type=int, default=100, help="measurements per sensor")
    p.add_argument("--distance", type=float, default=100.0, help="head-sensor distance, meters")
    p.add_argument("--skew-ppm", type=float, default=100.0, help="sensor clock skew, ppm from 1")
    p.add_argument("--offset", type=float, default=1.0, help="sensor initial clock offset, seconds")
    p.add_argument("--noise-std", type=float, default=1e-9, help="timestamp noise std dev, seconds")
    p.add_argument("--scfr", choices=["on", "off"], default="on", help="frequency recovery at sensors")
    p.add_argument("--mode", choices=["proposed", "classic"], default="proposed")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--warmup", type=float, default=10.0, help="seconds excluded from statistics")
    p.add_argument("--sensors", type=int, default=1, help="number of sensor nodes")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")


def _config_from_args(args: argparse.Namespace, **overrides) -> SimConfig:
    cfg = SimConfig(
        duration=args.duration,
        beacon_interval=args.beacon_interval,
        n_measurements=args.measurements,
        distance_m=args.distance,
        skew_ppm=args.skew_ppm,
        offset_s=args.offset,
        noise_sigma=args.noise_std,
        scfr_enabled=args.scfr == "on",
        mode=args.mode,
        seed=args.seed,
        warmup_s=args.warmup,
        n_sensors=args.sensors,
    )
    if overrides:
        cfg = SimConfig(**{**cfg.__dict__, **overrides})
    cfg.validate()
    return cfg


def _execute(cfg: SimConfig, out_dir: Path, label: str | None = None):
    result = run(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_records_csv(result.records, out_dir / "records.csv")
    write_cfr_trace_csv(result.cfr_trace, out_dir / "cfr_trace.csv")
    stats = compute_summary(result.records, cfg.warmup_s, result.counters)
    if label:
        print(f"scenario {label}:")
    print(format_summary(stats))
    return stats


def _scenario_table(rows: list[tuple[str, object]]) -> str:
    header = f"{'scenario':<28} {'count':>5} {'mean_abs_error':>15} {'rmse':>15} {'sensor_tx':>9}"
    lines = [header, "-" * len(header)]
    for name, stats in rows:
        mae = "undefined" if stats.mean_abs_error is None else f"{stats.mean_abs_error:.3e}"
        rmse = "undefined" if stats.rmse is None else f"{stats.rmse:.3e}"
        lines.append(f"{name:<28} {stats.count:>5} {mae:>15} {rmse:>15} {stats.sensor_tx:>9}")
    return "\n".join(lines)


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args)
    _execute(cfg, args.out)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    rows = []
    for interval in args.beacon_intervals:
        for scfr_on in (True, False):
            cfg = _config_from_args(args, beacon_interval=interval, scfr_enabled=scfr_on)
            name = f"b{interval:g}s_scfr_{'on' if scfr_on else 'off'}"
            stats = _execute(cfg, args.out / name, label=name)
            rows.append((name, stats))
    print()
    print(_scenario_table(rows))
    return 0


def cmd_paper(args: argparse.Namespace) -> int:
    scenarios = []
    for interval in (0.1, 0.01):
        tag = f"b{int(interval * 1000)}ms"
        for scfr_on in (True, False):
            scenarios.append(
                (
                    f"proposed_{tag}_scfr_{'on' if scfr_on else 'off'}",
                    {"beacon_interval": interval, "scfr_enabled": scfr_on, "mode": "proposed"},
                )
            )
        scenarios.append(
            (f"classic_{tag}", {"beacon_interval": interval, "scfr_enabled": False, "mode": "classic"})
        )
    rows = []
    for name, overrides in scenarios:
        cfg = _config_from_args(args, **overrides)
        stats = _execute(cfg, args.out / name, label=name)
        rows.append((name, stats))
    print()
    print(_scenario_table(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scfrsim",
        description="Discrete-event simulator for energy-efficient WSN time "
        "synchronization with source clock frequency recovery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario")
    _add_config_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="beacon-interval x SCFR sweep")
    _add_config_flags(p_sweep)
    p_sweep.add_argument(
        "--beacon-intervals",
        type=float,
        nargs="+",
        default=[0.1, 0.01],
        help="beacon intervals to sweep, seconds",
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_paper = sub.add_parser(
        "paper", help="fixed matrix: {100 ms, 10 ms} x {scfr on, off} plus classic baselines"
    )
    _add_config_flags(p_paper)
    p_paper.set_defaults(func=cmd_paper)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
