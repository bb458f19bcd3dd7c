"""Solar generation over orbit phases with scenario-driven degradation.

An orbit alternates between an insolation phase (arrays at full output)
and an eclipse phase (zero output).  A generation schedule scales the
insolation plateau as a step function of time; the builtin schedules
reproduce the standard failure scenarios:

* ``ideal``: full output forever.
* ``catastrophic``: output drops 10 percentage points every 200 minutes,
  holding at 50% from minute 1000 on.
* ``breaking-point``: as catastrophic, then a drop to 30% at minute 1200.

The PV bus is modeled as a constant nominal voltage while illuminated;
delivered power varies through the array current only.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class Phase(Enum):
    INSOLATION = "insolation"
    ECLIPSE = "eclipse"


@dataclass(frozen=True)
class OrbitConfig:
    period_min: float = 92.0
    insolation_fraction: float = 0.70

    def __post_init__(self):
        if not self.period_min > 0:
            raise ValueError(f"period_min must be > 0, got {self.period_min}")
        if not 0.0 < self.insolation_fraction < 1.0:
            raise ValueError("insolation_fraction must be strictly between 0 "
                             f"and 1, got {self.insolation_fraction}")

    @property
    def sunlit_min(self) -> float:
        """Sunlit minutes per orbit."""
        return self.insolation_fraction * self.period_min


@dataclass(frozen=True)
class GenerationConfig:
    insolation_power_kw: float = 120.0
    bus_voltage_v: float = 160.0

    def __post_init__(self):
        if not self.insolation_power_kw > 0:
            raise ValueError("insolation_power_kw must be > 0, got "
                             f"{self.insolation_power_kw}")
        if not self.bus_voltage_v > 0:
            raise ValueError(f"bus_voltage_v must be > 0, got {self.bus_voltage_v}")


@dataclass(frozen=True)
class GenerationSchedule:
    """Step function time -> generation scale factor; the last step holds."""

    steps: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("schedule needs at least one step")
        if self.steps[0][0] != 0.0:
            raise ValueError(f"first step must start at 0, got {self.steps[0][0]}")
        prev = None
        for start, scale in self.steps:
            if prev is not None and start <= prev:
                raise ValueError("step start times must be strictly increasing "
                                 f"({start} after {prev})")
            if not 0.0 <= scale <= 1.0:
                raise ValueError(f"scale must be in [0, 1], got {scale}")
            prev = start

    @property
    def starts(self) -> tuple[float, ...]:
        return tuple(s for s, _ in self.steps)

    @property
    def scales(self) -> tuple[float, ...]:
        return tuple(sc for _, sc in self.steps)


@dataclass(frozen=True)
class PvElectricals:
    """Array telemetry; power_kw equals voltage_v * current_a / 1000."""

    power_kw: float
    voltage_v: float
    current_a: float


def orbit_phase(t_min: float, orbit: OrbitConfig) -> Phase:
    """Phase at an instant; the orbit starts sunlit at t = 0."""
    if t_min < 0:
        raise ValueError(f"t_min must be >= 0, got {t_min}")
    pos = math.fmod(t_min, orbit.period_min)
    return Phase.INSOLATION if pos < orbit.sunlit_min else Phase.ECLIPSE


def cumulative_sunlit_min(t_min: float, period_min: float,
                          sunlit_min: float) -> float:
    """Total sunlit minutes in [0, t)."""
    r = math.fmod(t_min, period_min)
    n = float(round((t_min - r) / period_min))
    s = r if r < sunlit_min else sunlit_min
    return n * sunlit_min + s


def sunlit_fraction(t_min: float, dt_min: float, orbit: OrbitConfig) -> float:
    """Fraction of the interval [t, t + dt) that is sunlit.

    This is the exact integral of the insolation square wave over the
    step, so step-averaged generation is independent of the step size.
    """
    if t_min < 0 or dt_min <= 0:
        raise ValueError("need t_min >= 0 and dt_min > 0")
    sunlit = orbit.sunlit_min
    frac = (cumulative_sunlit_min(t_min + dt_min, orbit.period_min, sunlit)
            - cumulative_sunlit_min(t_min, orbit.period_min, sunlit)) / dt_min
    if frac < 0.0:
        return 0.0
    if frac > 1.0:
        return 1.0
    return frac


def scenario_scale(t_min: float, schedule: GenerationSchedule) -> float:
    """Scale of the latest schedule step that has started by t."""
    if t_min < 0:
        raise ValueError(f"t_min must be >= 0, got {t_min}")
    idx = bisect_right(schedule.starts, t_min) - 1
    return schedule.steps[idx][1]


def available_power(t_min: float, orbit: OrbitConfig, gen: GenerationConfig,
                    schedule: GenerationSchedule) -> float:
    """Instantaneous array output: scaled plateau in sunlight, 0 in eclipse."""
    if orbit_phase(t_min, orbit) is Phase.ECLIPSE:
        return 0.0
    return gen.insolation_power_kw * scenario_scale(t_min, schedule)


def pv_electricals(delivered_kw: float, phase: Phase,
                   gen: GenerationConfig) -> PvElectricals:
    """Bus telemetry for a delivered array power.

    The bus holds its nominal voltage while illuminated and reads zero in
    eclipse, where delivered power is zero by definition; only the current
    tracks the delivered power.
    """
    if delivered_kw < 0:
        raise ValueError(f"delivered_kw must be >= 0, got {delivered_kw}")
    if phase is Phase.ECLIPSE:
        return PvElectricals(0.0, 0.0, 0.0)
    voltage = gen.bus_voltage_v
    current = delivered_kw * 1000.0 / voltage
    return PvElectricals(delivered_kw, voltage, current)


_BUILTIN_SCHEDULES: dict[str, tuple[tuple[float, float], ...]] = {
    "ideal": ((0.0, 1.0),),
    "catastrophic": ((0.0, 1.0), (200.0, 0.9), (400.0, 0.8), (600.0, 0.7),
                     (800.0, 0.6), (1000.0, 0.5)),
    "breaking-point": ((0.0, 1.0), (200.0, 0.9), (400.0, 0.8), (600.0, 0.7),
                       (800.0, 0.6), (1000.0, 0.5), (1200.0, 0.3)),
}


def builtin_schedules() -> dict[str, GenerationSchedule]:
    """Named builtin generation scenarios."""
    return {name: GenerationSchedule(steps)
            for name, steps in _BUILTIN_SCHEDULES.items()}


def builtin_schedule(name: str) -> GenerationSchedule:
    try:
        return GenerationSchedule(_BUILTIN_SCHEDULES[name])
    except KeyError:
        known = ", ".join(sorted(_BUILTIN_SCHEDULES))
        raise KeyError(f"unknown scenario {name!r} (builtin: {known})") from None


def schedule_from_csv(path: str | Path) -> GenerationSchedule:
    """Read a schedule from CSV with header ``start_min,scale``."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty scenario file") from None
        if [h.strip().lower() for h in header] != ["start_min", "scale"]:
            raise ValueError(f"{path}: expected header 'start_min,scale', "
                             f"got {','.join(header)!r}")
        steps: list[tuple[float, float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                steps.append((float(row[0]), float(row[1])))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    try:
        return GenerationSchedule(tuple(steps))
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
