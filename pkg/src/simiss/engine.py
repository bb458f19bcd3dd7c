"""Closed-loop discrete-time simulation engine.

Each step, in order: the controller samples the SoC left by the previous
step and picks tier and masks; the load bank evaluates the masked demand;
generation is integrated over the step; surplus goes to the battery
(capped by the overcharge cutoff, the rest is curtailed) or the deficit is
drawn from it (the remainder is recorded as unserved load).  The battery
never charges and discharges within one step.

``run`` executes the whole recurrence through a selected backend (compiled
or pure Python; see :mod:`simiss._core`) and returns a column-oriented
:class:`Trace` plus a :class:`Summary`.  ``step`` is the single-step form
built from the public module operations; driving it in a loop reproduces
``run`` exactly, which the tests rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

import numpy as np

from . import _core, battery, controller, loadbank, powerplant
from .battery import BatteryConfig, BatteryState
from .controller import ControllerConfig, Tier
from .loadbank import LoadTable, Masks
from .powerplant import GenerationConfig, GenerationSchedule, OrbitConfig, Phase

#: tier codes used by the loop backends, index = code
TIER_BY_CODE: tuple[Tier, Tier, Tier] = (Tier.FULL, Tier.MID, Tier.LOW)
CODE_BY_TIER: dict[Tier, int] = {tier: code for code, tier in enumerate(TIER_BY_CODE)}

#: tolerance (SoC percentage points) when comparing orbit-mean SoC levels
#: for the sustainability verdict; absorbs limit-cycle convergence residue
SOC_TREND_TOLERANCE = 0.1


@dataclass(frozen=True)
class SimConfig:
    orbit: OrbitConfig = OrbitConfig()
    gen: GenerationConfig = GenerationConfig()
    battery: BatteryConfig = BatteryConfig()
    controller: ControllerConfig = ControllerConfig()
    table: LoadTable = field(default_factory=loadbank.builtin_iss_table)
    schedule: GenerationSchedule = field(
        default_factory=lambda: powerplant.builtin_schedule("ideal"))
    duration_min: float = 2000.0
    dt_min: float = 1.0

    def __post_init__(self):
        if not self.duration_min > 0:
            raise ValueError(f"duration_min must be > 0, got {self.duration_min}")
        if not 0 < self.dt_min <= self.duration_min:
            raise ValueError("dt_min must satisfy 0 < dt_min <= duration_min, "
                             f"got {self.dt_min}")

    @property
    def n_steps(self) -> int:
        return max(1, int(math.floor(self.duration_min / self.dt_min + 1e-9)))


@dataclass(frozen=True)
class SimState:
    t_min: float
    battery: BatteryState


@dataclass(frozen=True)
class TraceRow:
    t_min: float
    phase: Phase
    scale: float
    available_kw: float
    delivered_kw: float
    curtailed_kw: float
    pv_voltage_v: float
    pv_current_a: float
    tier: Tier
    masks: Masks
    load_kw: float
    channel_kw: tuple[float, float, float, float]
    batt_flow_kw: float
    soc_percent: float
    unserved_kw: float


@dataclass(frozen=True)
class Trace:
    """Column-oriented run telemetry; one entry per step.

    ``soc_percent`` is the SoC at the end of each step; the controller
    decisions recorded in a row were taken on the previous row's SoC
    (the configured initial SoC for row 0).
    """

    t_min: np.ndarray
    phase: np.ndarray          # uint8, 1 = insolation
    scale: np.ndarray
    available_kw: np.ndarray
    delivered_kw: np.ndarray
    curtailed_kw: np.ndarray
    pv_voltage_v: np.ndarray
    pv_current_a: np.ndarray
    tier: np.ndarray           # uint8 codes, see TIER_BY_CODE
    masks: np.ndarray          # (n, 4) int64
    load_kw: np.ndarray
    channel_kw: np.ndarray     # (n, 4) float64
    batt_flow_kw: np.ndarray   # signed, positive = charging
    soc_percent: np.ndarray
    unserved_kw: np.ndarray
    dt_min: float
    orbit_period_min: float
    initial_soc: float
    backend: str

    def __len__(self) -> int:
        return len(self.t_min)

    def row(self, i: int) -> TraceRow:
        phase = Phase.INSOLATION if self.phase[i] else Phase.ECLIPSE
        return TraceRow(
            t_min=float(self.t_min[i]),
            phase=phase,
            scale=float(self.scale[i]),
            available_kw=float(self.available_kw[i]),
            delivered_kw=float(self.delivered_kw[i]),
            curtailed_kw=float(self.curtailed_kw[i]),
            pv_voltage_v=float(self.pv_voltage_v[i]),
            pv_current_a=float(self.pv_current_a[i]),
            tier=TIER_BY_CODE[self.tier[i]],
            masks=tuple(int(m) for m in self.masks[i]),
            load_kw=float(self.load_kw[i]),
            channel_kw=tuple(float(p) for p in self.channel_kw[i]),
            batt_flow_kw=float(self.batt_flow_kw[i]),
            soc_percent=float(self.soc_percent[i]),
            unserved_kw=float(self.unserved_kw[i]),
        )

    def __iter__(self) -> Iterator[TraceRow]:
        return (self.row(i) for i in range(len(self)))

    def start_soc(self) -> np.ndarray:
        """SoC seen by the controller at the start of each step."""
        return np.concatenate(([self.initial_soc], self.soc_percent[:-1]))


@dataclass(frozen=True)
class Summary:
    """End-of-run metrics.

    ``sustainable`` is true when no load went unserved and the SoC level
    is holding: either the battery ended full, or the mean SoC over the
    final orbit is no lower (within ``SOC_TREND_TOLERANCE``) than over the
    orbit before it.
    """

    time_to_full_min: Optional[float]
    min_soc: float
    final_soc: float
    tier_minutes: Mapping[Tier, float]
    tier_transitions: int
    unserved_kwh: float
    curtailed_kwh: float
    sustainable: bool

    def as_dict(self) -> dict:
        return {
            "time_to_full_min": self.time_to_full_min,
            "min_soc": self.min_soc,
            "final_soc": self.final_soc,
            "tier_minutes": {tier.value: minutes
                             for tier, minutes in self.tier_minutes.items()},
            "tier_transitions": self.tier_transitions,
            "unserved_kwh": self.unserved_kwh,
            "curtailed_kwh": self.curtailed_kwh,
            "sustainable": self.sustainable,
        }


def _masks_by_tier(cfg: SimConfig) -> tuple[Masks, Masks, Masks]:
    if not cfg.controller.enabled:
        return (controller.FULL_MASKS,) * 3
    tm = cfg.controller.tier_masks
    return tuple(tm[tier] for tier in TIER_BY_CODE)


def step(state: SimState, cfg: SimConfig) -> tuple[SimState, TraceRow]:
    """Advance one step; the row records end-of-step SoC at the start time."""
    t = state.t_min
    soc_start = state.battery.soc
    tier, masks = controller.control(soc_start, cfg.controller)
    load = loadbank.total_power(cfg.table, masks)
    scale = powerplant.scenario_scale(t, cfg.schedule)
    frac = powerplant.sunlit_fraction(t, cfg.dt_min, cfg.orbit)
    avail = cfg.gen.insolation_power_kw * scale * frac

    if avail >= load:
        offered = avail - load
        batt, accepted = battery.charge(state.battery, offered, cfg.dt_min,
                                        cfg.battery)
        curtailed = offered - accepted
        delivered = load + accepted
        flow = accepted
        unserved = 0.0
    else:
        request = load - avail
        batt, drawn = battery.discharge(state.battery, request, cfg.dt_min,
                                        cfg.battery)
        delivered = avail
        curtailed = 0.0
        flow = 0.0 if drawn == 0.0 else -drawn
        unserved = request - drawn

    phase = powerplant.orbit_phase(t, cfg.orbit)
    pv = powerplant.pv_electricals(delivered if phase is Phase.INSOLATION else 0.0,
                                   phase, cfg.gen)
    row = TraceRow(
        t_min=t,
        phase=phase,
        scale=scale,
        available_kw=avail,
        delivered_kw=delivered,
        curtailed_kw=curtailed,
        pv_voltage_v=pv.voltage_v,
        pv_current_a=pv.current_a,
        tier=tier,
        masks=masks,
        load_kw=load,
        channel_kw=tuple(loadbank.channel_power(ch, m)
                         for ch, m in zip(cfg.table.channels, masks)),
        batt_flow_kw=flow,
        soc_percent=batt.soc,
        unserved_kw=unserved,
    )
    return SimState(t + cfg.dt_min, batt), row


def initial_state(cfg: SimConfig) -> SimState:
    return SimState(0.0, BatteryState(cfg.battery.initial_soc))


def run(cfg: SimConfig, backend: str | None = None) -> tuple[Trace, Summary]:
    """Run the full recurrence; deterministic for a given config."""
    backend_name, impl = _core.resolve_backend(backend)
    n = cfg.n_steps

    masks_by_tier = _masks_by_tier(cfg)
    loads_by_tier = [loadbank.total_power(cfg.table, m) for m in masks_by_tier]
    channel_by_tier = np.array(
        [[loadbank.channel_power(ch, m) for ch, m in zip(cfg.table.channels, masks)]
         for masks in masks_by_tier], dtype=np.float64)

    sched_start = np.asarray(cfg.schedule.starts, dtype=np.float64)
    sched_scale = np.asarray(cfg.schedule.scales, dtype=np.float64)

    out_phase = np.empty(n, dtype=np.uint8)
    out_scale = np.empty(n, dtype=np.float64)
    out_available = np.empty(n, dtype=np.float64)
    out_tier = np.empty(n, dtype=np.uint8)
    out_load = np.empty(n, dtype=np.float64)
    out_delivered = np.empty(n, dtype=np.float64)
    out_curtailed = np.empty(n, dtype=np.float64)
    out_flow = np.empty(n, dtype=np.float64)
    out_soc = np.empty(n, dtype=np.float64)
    out_unserved = np.empty(n, dtype=np.float64)

    impl.simulate(
        n, cfg.dt_min, cfg.orbit.period_min, cfg.orbit.sunlit_min,
        cfg.gen.insolation_power_kw, sched_start, sched_scale,
        1 if cfg.controller.enabled else 0,
        cfg.controller.low_threshold, cfg.controller.high_threshold,
        loads_by_tier[0], loads_by_tier[1], loads_by_tier[2],
        cfg.battery.initial_soc, cfg.battery.capacity_kwh,
        math.inf if cfg.battery.max_charge_kw is None else cfg.battery.max_charge_kw,
        math.inf if cfg.battery.max_discharge_kw is None
        else cfg.battery.max_discharge_kw,
        out_phase, out_scale, out_available, out_tier, out_load,
        out_delivered, out_curtailed, out_flow, out_soc, out_unserved)

    t = np.arange(n, dtype=np.float64) * cfg.dt_min
    voltage = np.where(out_phase == 1, cfg.gen.bus_voltage_v, 0.0)
    current = np.zeros(n, dtype=np.float64)
    lit = voltage > 0.0
    current[lit] = out_delivered[lit] * 1000.0 / voltage[lit]

    masks_arr = np.array(masks_by_tier, dtype=np.int64)[out_tier]
    channel_arr = channel_by_tier[out_tier]

    trace = Trace(
        t_min=t, phase=out_phase, scale=out_scale, available_kw=out_available,
        delivered_kw=out_delivered, curtailed_kw=out_curtailed,
        pv_voltage_v=voltage, pv_current_a=current, tier=out_tier,
        masks=masks_arr, load_kw=out_load, channel_kw=channel_arr,
        batt_flow_kw=out_flow, soc_percent=out_soc, unserved_kw=out_unserved,
        dt_min=cfg.dt_min, orbit_period_min=cfg.orbit.period_min,
        initial_soc=cfg.battery.initial_soc, backend=backend_name)
    return trace, summarize(trace)


def summarize(trace: Trace) -> Summary:
    """Summary metrics over a completed trace."""
    if len(trace) == 0:
        raise ValueError("cannot summarize an empty trace")
    soc = trace.soc_percent
    dt = trace.dt_min

    full_rows = np.nonzero(soc == 100.0)[0]
    time_to_full = float(trace.t_min[full_rows[0]]) if len(full_rows) else None

    tier_minutes = {
        tier: float(np.count_nonzero(trace.tier == code) * dt)
        for code, tier in enumerate(TIER_BY_CODE)
    }
    transitions = int(np.count_nonzero(trace.tier[1:] != trace.tier[:-1]))
    unserved_kwh = float(trace.unserved_kw.sum() * dt / 60.0)
    curtailed_kwh = float(trace.curtailed_kw.sum() * dt / 60.0)
    final_soc = float(soc[-1])

    window = int(round(trace.orbit_period_min / dt))
    if window >= 1 and len(soc) >= 2 * window:
        last_mean = float(soc[-window:].mean())
        prev_mean = float(soc[-2 * window:-window].mean())
        holding = last_mean >= prev_mean - SOC_TREND_TOLERANCE
    else:
        # run shorter than two orbits: compare endpoints instead
        holding = final_soc >= float(soc[0]) - SOC_TREND_TOLERANCE
    sustainable = unserved_kwh == 0.0 and (final_soc == 100.0 or holding)

    return Summary(
        time_to_full_min=time_to_full,
        min_soc=float(soc.min()),
        final_soc=final_soc,
        tier_minutes=tier_minutes,
        tier_transitions=transitions,
        unserved_kwh=unserved_kwh,
        curtailed_kwh=curtailed_kwh,
        sustainable=sustainable,
    )


def per_orbit_means(trace: Trace) -> np.ndarray:
    """Mean SoC over each complete orbit window, from t = 0."""
    window = int(round(trace.orbit_period_min / trace.dt_min))
    if window < 1:
        raise ValueError("orbit period shorter than one step")
    n_orbits = len(trace) // window
    if n_orbits == 0:
        return np.empty(0, dtype=np.float64)
    soc = trace.soc_percent[:n_orbits * window]
    return soc.reshape(n_orbits, window).mean(axis=1)
