"""Key=value configuration files.

Line-oriented ``key = value`` text with ``#`` comments.  Keys are dotted
by subsystem and every key is optional; anything unset takes the package
default.  Unknown keys are rejected rather than ignored.

Recognized keys::

    orbit.period_min            minutes per orbit              (> 0)
    orbit.insolation_fraction   sunlit share of the orbit      (0 < f < 1)
    gen.insolation_power_kw     array plateau output           (> 0)
    gen.bus_voltage_v           nominal bus voltage            (> 0)
    battery.capacity_kwh        usable energy                  (> 0)
    battery.initial_soc         starting charge, percent       (0..100)
    battery.max_charge_kw       optional charge power limit    (> 0)
    battery.max_discharge_kw    optional discharge power limit (> 0)
    controller.low_threshold    LOW/MID boundary, percent
    controller.high_threshold   MID/FULL boundary, percent
    controller.enabled          on/off (also true/false/1/0)
    controller.mid_masks        four masks, e.g. 12,12,100,72
    sim.duration_min            simulated horizon              (> 0)
    sim.dt_min                  step size                      (0 < dt <= duration)
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from .battery import BatteryConfig
from .controller import ControllerConfig
from .engine import SimConfig
from .powerplant import GenerationConfig, OrbitConfig


class ConfigError(ValueError):
    """Bad configuration text: syntax, unknown key, or out-of-range value."""


def _parse_float(raw: str, key: str, lineno: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(
            f"line {lineno}: {key}: expected a number, got {raw!r}") from None


def _parse_bool(raw: str, key: str, lineno: int) -> bool:
    value = raw.strip().lower()
    if value in ("on", "true", "1", "yes"):
        return True
    if value in ("off", "false", "0", "no"):
        return False
    raise ConfigError(f"line {lineno}: {key}: expected on/off, got {raw!r}")


def _parse_masks(raw: str, key: str, lineno: int) -> tuple[int, int, int, int]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 4:
        raise ConfigError(
            f"line {lineno}: {key}: expected 4 comma-separated masks, got {raw!r}")
    masks = []
    for p in parts:
        try:
            masks.append(int(p))
        except ValueError:
            raise ConfigError(
                f"line {lineno}: {key}: expected an integer, got {p!r}") from None
    return tuple(masks)


_FLOAT_KEYS = {
    "orbit.period_min", "orbit.insolation_fraction",
    "gen.insolation_power_kw", "gen.bus_voltage_v",
    "battery.capacity_kwh", "battery.initial_soc",
    "battery.max_charge_kw", "battery.max_discharge_kw",
    "controller.low_threshold", "controller.high_threshold",
    "sim.duration_min", "sim.dt_min",
}
KNOWN_KEYS = _FLOAT_KEYS | {"controller.enabled", "controller.mid_masks"}


def parse_config(text: str) -> SimConfig:
    """Parse configuration text into a validated :class:`SimConfig`.

    Empty text yields the full default configuration.  Raises
    :class:`ConfigError` with the offending line number or key name.
    """
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', "
                              f"got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key == "controller.enabled":
            values[key] = _parse_bool(raw, key, lineno)
        elif key == "controller.mid_masks":
            values[key] = _parse_masks(raw, key, lineno)
        else:
            values[key] = _parse_float(raw, key, lineno)
    return build_config(values)


def load_config(path: str | Path) -> SimConfig:
    return parse_config(Path(path).read_text())


def _section(values: dict[str, object], prefix: str) -> dict[str, object]:
    plen = len(prefix) + 1
    return {key[plen:]: val for key, val in values.items()
            if key.startswith(prefix + ".")}


def build_config(values: dict[str, object]) -> SimConfig:
    """Assemble a SimConfig from dotted key/value pairs."""
    unknown = set(values) - KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    try:
        orbit = OrbitConfig(**_section(values, "orbit"))
        gen = GenerationConfig(**_section(values, "gen"))
        battery = BatteryConfig(**_section(values, "battery"))
        ctrl = ControllerConfig(**_section(values, "controller"))
        sim = _section(values, "sim")
        cfg = SimConfig(orbit=orbit, gen=gen, battery=battery, controller=ctrl)
        if "duration_min" in sim:
            cfg = replace(cfg, duration_min=sim["duration_min"])
        if "dt_min" in sim:
            cfg = replace(cfg, dt_min=sim["dt_min"])
        return cfg
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
