"""Trace CSV and summary JSON serialization.

Floats are written with ``repr``, which round-trips exactly, so a parsed
trace CSV reproduces the original values bit for bit.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import IO

import numpy as np

from .engine import Summary, Trace

TRACE_COLUMNS = (
    "t_min", "phase", "scale", "available_kw", "delivered_kw", "curtailed_kw",
    "pv_voltage_v", "pv_current_a", "tier",
    "mask_ch1", "mask_ch2", "mask_ch3", "mask_ch4",
    "load_kw", "ch1_kw", "ch2_kw", "ch3_kw", "ch4_kw",
    "batt_flow_kw", "soc_percent", "unserved_kw",
)

_PHASE_NAMES = ("eclipse", "insolation")  # indexed by the phase code
_TIER_NAMES = ("FULL", "MID", "LOW")      # indexed by the tier code


def write_trace_csv(trace: Trace, dest: str | Path | IO[str]) -> None:
    if hasattr(dest, "write"):
        _write_trace(trace, dest)
    else:
        with Path(dest).open("w", newline="") as fh:
            _write_trace(trace, fh)


def _write_trace(trace: Trace, fh: IO[str]) -> None:
    writer = csv.writer(fh)
    writer.writerow(TRACE_COLUMNS)
    for i in range(len(trace)):
        writer.writerow((
            repr(float(trace.t_min[i])),
            _PHASE_NAMES[trace.phase[i]],
            repr(float(trace.scale[i])),
            repr(float(trace.available_kw[i])),
            repr(float(trace.delivered_kw[i])),
            repr(float(trace.curtailed_kw[i])),
            repr(float(trace.pv_voltage_v[i])),
            repr(float(trace.pv_current_a[i])),
            _TIER_NAMES[trace.tier[i]],
            int(trace.masks[i, 0]), int(trace.masks[i, 1]),
            int(trace.masks[i, 2]), int(trace.masks[i, 3]),
            repr(float(trace.load_kw[i])),
            repr(float(trace.channel_kw[i, 0])), repr(float(trace.channel_kw[i, 1])),
            repr(float(trace.channel_kw[i, 2])), repr(float(trace.channel_kw[i, 3])),
            repr(float(trace.batt_flow_kw[i])),
            repr(float(trace.soc_percent[i])),
            repr(float(trace.unserved_kw[i])),
        ))


def trace_csv_text(trace: Trace) -> str:
    import io

    buf = io.StringIO()
    write_trace_csv(trace, buf)
    return buf.getvalue()


def read_trace_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Parse a trace CSV back into column arrays.

    Numeric columns come back as float64 (masks as int64); ``phase`` and
    ``tier`` as string arrays.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != TRACE_COLUMNS:
            raise ValueError(f"{path}: not a trace CSV (unexpected header)")
        columns: list[list] = [[] for _ in TRACE_COLUMNS]
        for row in reader:
            for j, cell in enumerate(row):
                columns[j].append(cell)
    out: dict[str, np.ndarray] = {}
    for name, cells in zip(TRACE_COLUMNS, columns):
        if name in ("phase", "tier"):
            out[name] = np.array(cells)
        elif name.startswith("mask_"):
            out[name] = np.array([int(c) for c in cells], dtype=np.int64)
        else:
            out[name] = np.array([float(c) for c in cells], dtype=np.float64)
    return out


def summary_json_text(summary: Summary) -> str:
    return json.dumps(summary.as_dict(), indent=2) + "\n"


def write_summary_json(summary: Summary, path: str | Path) -> None:
    Path(path).write_text(summary_json_text(summary))


def format_summary(summary: Summary) -> str:
    """Human-readable summary block."""
    ttf = ("never" if summary.time_to_full_min is None
           else f"{summary.time_to_full_min:g} min")
    tiers = "  ".join(f"{tier.value} {minutes:g}"
                      for tier, minutes in summary.tier_minutes.items())
    lines = (
        f"time to full:     {ttf}",
        f"min SoC:          {summary.min_soc:.3f} %",
        f"final SoC:        {summary.final_soc:.3f} %",
        f"tier minutes:     {tiers}",
        f"tier transitions: {summary.tier_transitions}",
        f"unserved energy:  {summary.unserved_kwh:.6g} kWh",
        f"curtailed energy: {summary.curtailed_kwh:.6g} kWh",
        f"sustainable:      {'yes' if summary.sustainable else 'no'}",
    )
    return "\n".join(lines)
