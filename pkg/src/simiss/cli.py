"""Command-line front end.

Subcommands::

    simiss run        run a scenario, write a trace CSV and a summary
    simiss loads      print load-bank power for a mask set
    simiss calibrate  closed-form energy balance and time-to-full estimate

Exit codes: 0 success, 2 configuration or scenario error, 3 simulation
completed but unsustainable (with ``--fail-on-unsustainable``), 4 output
I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

from . import __version__
from .configfile import ConfigError, load_config, parse_config
from .engine import SimConfig, run
from .loadbank import builtin_iss_table, channel_power, load_table_from_csv, total_power
from .powerplant import builtin_schedule, schedule_from_csv
from .traceio import format_summary, write_summary_json, write_trace_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSUSTAINABLE = 3
EXIT_IO = 4

#: observed base-case climb duration the calibration report compares against
BASE_CASE_TARGET_MIN = 830.0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simiss",
        description="Simulate the ISS U.S.-segment electrical power system "
                    "under generation-failure scenarios.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write the trace")
    p_run.add_argument("--scenario", required=True,
                       help="builtin name (ideal, catastrophic, breaking-point) "
                            "or file:<path> to a scenario CSV")
    p_run.add_argument("--config", metavar="PATH",
                       help="key=value configuration file")
    p_run.add_argument("--controller", choices=("on", "off"),
                       help="override the load controller switch")
    p_run.add_argument("--duration-min", type=float, metavar="N",
                       help="override the simulated horizon")
    p_run.add_argument("--dt-min", type=float, metavar="X",
                       help="override the step size")
    p_run.add_argument("--out", required=True, metavar="PATH",
                       help="trace CSV output path")
    p_run.add_argument("--summary-json", metavar="PATH",
                       help="also write the summary as JSON")
    p_run.add_argument("--fail-on-unsustainable", action="store_true",
                       help="exit with status 3 when the run is unsustainable")

    p_loads = sub.add_parser("loads",
                             help="print load-bank power under a mask set")
    p_loads.add_argument("--masks", default="0,0,0,0", metavar="a,b,c,d",
                         help="four channel masks (default 0,0,0,0)")
    p_loads.add_argument("--table", metavar="PATH",
                         help="load-table CSV (default: builtin ISS table)")

    p_cal = sub.add_parser("calibrate",
                           help="report the closed-form orbit energy balance")
    p_cal.add_argument("--config", metavar="PATH",
                       help="key=value configuration file")
    return parser


def _load_sim_config(args: argparse.Namespace) -> SimConfig:
    if getattr(args, "config", None):
        cfg = load_config(args.config)
    else:
        cfg = parse_config("")
    if getattr(args, "scenario", None):
        name = args.scenario
        if name.startswith("file:"):
            schedule = schedule_from_csv(name[len("file:"):])
        else:
            try:
                schedule = builtin_schedule(name)
            except KeyError as exc:
                raise ConfigError(exc.args[0]) from None
        cfg = replace(cfg, schedule=schedule)
    if getattr(args, "controller", None):
        cfg = replace(cfg, controller=replace(cfg.controller,
                                              enabled=args.controller == "on"))
    if getattr(args, "duration_min", None) is not None:
        cfg = replace(cfg, duration_min=args.duration_min)
    if getattr(args, "dt_min", None) is not None:
        cfg = replace(cfg, dt_min=args.dt_min)
    return cfg


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        cfg = _load_sim_config(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    trace, summary = run(cfg)
    try:
        write_trace_csv(trace, args.out)
        if args.summary_json:
            write_summary_json(summary, args.summary_json)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"scenario: {args.scenario}")
    print(f"steps:    {len(trace)} (dt={cfg.dt_min:g} min, "
          f"backend={trace.backend})")
    print(format_summary(summary))
    if args.fail_on_unsustainable and not summary.sustainable:
        return EXIT_UNSUSTAINABLE
    return EXIT_OK


def _cmd_loads(args: argparse.Namespace) -> int:
    try:
        parts = [p.strip() for p in args.masks.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 comma-separated masks, got {args.masks!r}")
        masks = tuple(int(p) for p in parts)
        table = (load_table_from_csv(args.table) if args.table
                 else builtin_iss_table())
        per_channel = [channel_power(ch, m)
                       for ch, m in zip(table.channels, masks)]
        total = total_power(table, masks)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"masks: {masks[0]},{masks[1]},{masks[2]},{masks[3]}")
    for ch, power in zip(table.channels, per_channel):
        print(f"channel {ch.id}: {power:.10g} kW")
    print(f"total: {total:.10g} kW")
    return EXIT_OK


def _cmd_calibrate(args: argparse.Namespace) -> int:
    try:
        cfg = _load_sim_config(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(format_calibration(cfg))
    return EXIT_OK


def predict_time_to_full(cfg: SimConfig) -> float | None:
    """Closed-form minute at which the base case first fills the battery.

    Assumes the controller is off (full demand) and an unscaled plateau.
    Charging is front-loaded into the sunlit phase, so the first touch of
    100% lands at the end of a sunlit arc: the battery fills during the
    first orbit ``K`` whose accumulated net energy plus one sunlit-phase
    gain covers the headroom.  Returns None when it never fills.
    """
    full_load = total_power(cfg.table, (0, 0, 0, 0))
    headroom_kwh = (100.0 - cfg.battery.initial_soc) / 100.0 * cfg.battery.capacity_kwh
    if headroom_kwh == 0.0:
        return 0.0
    surplus_kw = cfg.gen.insolation_power_kw - full_load
    if surplus_kw <= 0.0:
        return None
    sun_h = cfg.orbit.sunlit_min / 60.0
    ecl_h = (cfg.orbit.period_min - cfg.orbit.sunlit_min) / 60.0
    sun_gain = surplus_kw * sun_h
    net = sun_gain - full_load * ecl_h
    if headroom_kwh <= sun_gain:
        orbits = 0
    elif net <= 0.0:
        return None
    else:
        orbits = math.ceil((headroom_kwh - sun_gain) / net)
    return orbits * cfg.orbit.period_min + (headroom_kwh - orbits * net) / surplus_kw * 60.0


def format_calibration(cfg: SimConfig) -> str:
    """Per-orbit energy balance and predicted time to full charge."""
    full_load = total_power(cfg.table, (0, 0, 0, 0))
    sun_h = cfg.orbit.sunlit_min / 60.0
    ecl_h = (cfg.orbit.period_min - cfg.orbit.sunlit_min) / 60.0
    net = ((cfg.gen.insolation_power_kw - full_load) * sun_h
           - full_load * ecl_h)
    headroom_kwh = (100.0 - cfg.battery.initial_soc) / 100.0 * cfg.battery.capacity_kwh
    lines = [
        f"full-demand load:     {full_load:.10g} kW",
        f"plateau generation:   {cfg.gen.insolation_power_kw:.10g} kW",
        f"orbit:                {cfg.orbit.period_min:g} min "
        f"({cfg.orbit.sunlit_min:g} sunlit / "
        f"{cfg.orbit.period_min - cfg.orbit.sunlit_min:g} eclipse)",
        f"per-orbit net energy: {net:+.6g} kWh",
        f"headroom to full:     {headroom_kwh:.6g} kWh "
        f"(from {cfg.battery.initial_soc:g}% of {cfg.battery.capacity_kwh:g} kWh)",
    ]
    predicted = predict_time_to_full(cfg)
    if predicted is None:
        lines.append("predicted time to full: never "
                     "(per-orbit net energy is not positive)")
    elif predicted == 0.0:
        lines.append("predicted time to full: 0 min (battery starts full)")
    else:
        deviation = predicted - BASE_CASE_TARGET_MIN
        lines.append(f"predicted time to full: {predicted:.1f} min "
                     f"({predicted / cfg.orbit.period_min:.2f} orbits, "
                     "fills late in a sunlit phase)")
        lines.append(f"deviation from {BASE_CASE_TARGET_MIN:g}-min reference: "
                     f"{deviation:+.1f} min "
                     f"({deviation / BASE_CASE_TARGET_MIN * 100:+.1f}%)")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "loads":
        return _cmd_loads(args)
    return _cmd_calibrate(args)


if __name__ == "__main__":
    sys.exit(main())
