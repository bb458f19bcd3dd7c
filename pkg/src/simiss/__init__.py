"""Discrete-time simulator of the ISS U.S.-segment electrical power system.

Solar generation over orbit phases, a four-channel switched load bank,
battery storage, and a tiered state-of-charge load controller, driven
through scripted generation-failure scenarios.
"""

from ._core import available_backends, default_backend
from .battery import BatteryConfig, BatteryState, charge, discharge
from .controller import (ControllerConfig, Tier, control, default_tier_masks,
                         tier_of)
from .engine import (SimConfig, SimState, Summary, Trace, TraceRow, run, step,
                     summarize)
from .loadbank import (LoadSpec, LoadTable, Masks, builtin_iss_table,
                       channel_power, decode_mask, encode_mask,
                       essential_power, load_table_from_csv, total_power)
from .powerplant import (GenerationConfig, GenerationSchedule, OrbitConfig,
                         Phase, PvElectricals, available_power,
                         builtin_schedule, builtin_schedules, orbit_phase,
                         pv_electricals, scenario_scale, schedule_from_csv)

__version__ = "0.1.0"

__all__ = [
    "BatteryConfig", "BatteryState", "ControllerConfig", "GenerationConfig",
    "GenerationSchedule", "LoadSpec", "LoadTable", "Masks", "OrbitConfig",
    "Phase", "PvElectricals", "SimConfig", "SimState", "Summary", "Tier",
    "Trace", "TraceRow", "available_backends", "available_power",
    "builtin_iss_table", "builtin_schedule", "builtin_schedules",
    "channel_power", "charge", "control", "decode_mask", "default_backend",
    "default_tier_masks", "discharge", "encode_mask", "essential_power",
    "load_table_from_csv", "orbit_phase", "pv_electricals", "run",
    "scenario_scale", "schedule_from_csv", "step", "summarize", "tier_of",
    "total_power",
]
