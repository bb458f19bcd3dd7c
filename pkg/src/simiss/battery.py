"""Battery state-of-charge integration.

SoC is tracked as a percentage of a fixed usable capacity and updated with
explicit Euler steps.  Charging cuts off exactly at 100% (overcharge
protection) and discharging stops exactly at 0%, reporting the shortfall
to the caller.  Round-trip efficiency is 1.0: the model accounts for load
power only.

The arithmetic here is mirrored statement for statement by the simulation
loop backends; keep any change in sync with ``_core_py``/``_core_cy``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

# Default sizing: 116 kWh of headroom above the initial charge, which makes
# the base case (full plateau generation, controller off) first touch a
# full battery late in the ninth orbit's sunlit phase, around minute 795.
DEFAULT_CAPACITY_KWH = 400.0
DEFAULT_INITIAL_SOC = 71.0


@dataclass(frozen=True)
class BatteryConfig:
    capacity_kwh: float = DEFAULT_CAPACITY_KWH
    initial_soc: float = DEFAULT_INITIAL_SOC
    max_charge_kw: Optional[float] = None
    max_discharge_kw: Optional[float] = None

    def __post_init__(self):
        if not self.capacity_kwh > 0:
            raise ValueError(f"capacity_kwh must be > 0, got {self.capacity_kwh}")
        if not 0.0 <= self.initial_soc <= 100.0:
            raise ValueError(f"initial_soc must be in 0..100, got {self.initial_soc}")
        if self.max_charge_kw is not None and not self.max_charge_kw > 0:
            raise ValueError(f"max_charge_kw must be > 0, got {self.max_charge_kw}")
        if self.max_discharge_kw is not None and not self.max_discharge_kw > 0:
            raise ValueError(
                f"max_discharge_kw must be > 0, got {self.max_discharge_kw}")


@dataclass(frozen=True)
class BatteryState:
    soc: float

    def __post_init__(self):
        if not 0.0 <= self.soc <= 100.0:
            raise ValueError(f"soc must be in 0..100, got {self.soc}")


def charge(state: BatteryState, offered_kw: float, dt_min: float,
           cfg: BatteryConfig) -> tuple[BatteryState, float]:
    """Accept up to ``offered_kw`` for ``dt_min`` minutes.

    Acceptance is limited by the charge-power limit and by the headroom
    left below 100%; a full battery accepts nothing.  Returns the new
    state and the power actually accepted.
    """
    if offered_kw < 0:
        raise ValueError(f"offered_kw must be >= 0, got {offered_kw}")
    if dt_min <= 0:
        raise ValueError(f"dt_min must be > 0, got {dt_min}")
    hours = dt_min / 60.0
    soc = state.soc
    accepted = float(offered_kw)
    if cfg.max_charge_kw is not None and accepted > cfg.max_charge_kw:
        accepted = cfg.max_charge_kw
    headroom_kw = (100.0 - soc) / 100.0 * cfg.capacity_kwh / hours
    if accepted >= headroom_kw:
        accepted = headroom_kw
        soc = 100.0
    else:
        soc = soc + accepted * hours / cfg.capacity_kwh * 100.0
        if soc > 100.0:
            soc = 100.0
    return BatteryState(soc), accepted


def discharge(state: BatteryState, requested_kw: float, dt_min: float,
              cfg: BatteryConfig) -> tuple[BatteryState, float]:
    """Deliver up to ``requested_kw`` for ``dt_min`` minutes.

    Delivery is limited by the discharge-power limit and by the stored
    energy; the shortfall is ``requested_kw`` minus the returned power.
    """
    if requested_kw < 0:
        raise ValueError(f"requested_kw must be >= 0, got {requested_kw}")
    if dt_min <= 0:
        raise ValueError(f"dt_min must be > 0, got {dt_min}")
    hours = dt_min / 60.0
    soc = state.soc
    delivered = float(requested_kw)
    if cfg.max_discharge_kw is not None and delivered > cfg.max_discharge_kw:
        delivered = cfg.max_discharge_kw
    stored_kw = soc / 100.0 * cfg.capacity_kwh / hours
    if delivered >= stored_kw:
        delivered = stored_kw
        soc = 0.0
    else:
        soc = soc - delivered * hours / cfg.capacity_kwh * 100.0
        if soc < 0.0:
            soc = 0.0
    return BatteryState(soc), delivered
