"""Tiered state-of-charge load controller.

Maps the battery SoC to one of three operating tiers and the tier to a
mask set for the load bank:

* ``FULL`` (SoC at or above the high threshold): every load on.
* ``MID`` (between the thresholds): the heaviest experiment and robotics
  loads are shed.
* ``LOW`` (below the low threshold): all nonessential loads are shed.

The mapping is a pure threshold function re-evaluated at every sample;
there is deliberately no hysteresis band, so a SoC hovering at a
threshold alternates tiers on consecutive samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Mapping

from .loadbank import ALL_OFF, ALL_ON, ChannelSpec, LoadTable, Masks, _check_mask


class Tier(Enum):
    FULL = "FULL"
    MID = "MID"
    LOW = "LOW"


FULL_MASKS: Masks = (ALL_ON,) * 4
LOW_MASKS: Masks = (ALL_OFF,) * 4

#: mid-tier masks for the builtin ISS table (robotic workstation and arm on
#: channels 1-2; the three heaviest experiments on channel 3; two on channel 4)
DEFAULT_MID_MASKS: Masks = (12, 12, 100, 72)

_MID_SHED_NAMES: dict[int, tuple[str, ...]] = {
    1: ("Robotic Workstation", "Robotic Arm"),
    2: ("Robotic Workstation", "Robotic Arm"),
    3: ("Experiment U.S. 1", "Experiment Russian 3", "Experiment Japan 1"),
    4: ("Experiment U.S. 4", "Experiment Japan 3"),
}


@dataclass(frozen=True)
class ControllerConfig:
    """Thresholds and per-tier masks; ``enabled=False`` disables shedding."""

    low_threshold: float = 40.0
    high_threshold: float = 80.0
    mid_masks: Masks = DEFAULT_MID_MASKS
    enabled: bool = True

    def __post_init__(self):
        if not 0.0 < self.low_threshold < self.high_threshold <= 100.0:
            raise ValueError(
                "thresholds must satisfy 0 < low_threshold < high_threshold "
                f"<= 100, got low={self.low_threshold} high={self.high_threshold}")
        if len(self.mid_masks) != 4:
            raise ValueError(f"mid_masks needs 4 values, got {len(self.mid_masks)}")
        for m in self.mid_masks:
            _check_mask(m)

    @property
    def tier_masks(self) -> Mapping[Tier, Masks]:
        return MappingProxyType({
            Tier.FULL: FULL_MASKS,
            Tier.MID: tuple(self.mid_masks),
            Tier.LOW: LOW_MASKS,
        })


def tier_of(soc: float, cfg: ControllerConfig) -> Tier:
    """Tier for a SoC sample.

    Bands are closed at the lower edge: SoC exactly at the low threshold is
    MID, exactly at the high threshold is FULL.
    """
    if not 0.0 <= soc <= 100.0:
        raise ValueError(f"soc must be in 0..100, got {soc}")
    if soc < cfg.low_threshold:
        return Tier.LOW
    if soc < cfg.high_threshold:
        return Tier.MID
    return Tier.FULL


def control(soc: float, cfg: ControllerConfig) -> tuple[Tier, Masks]:
    """Controller output for a SoC sample.

    A disabled controller never sheds: it reports FULL with all-on masks
    regardless of SoC.
    """
    if not cfg.enabled:
        if not 0.0 <= soc <= 100.0:
            raise ValueError(f"soc must be in 0..100, got {soc}")
        return Tier.FULL, FULL_MASKS
    tier = tier_of(soc, cfg)
    return tier, cfg.tier_masks[tier]


def mask_for_loads(channel: ChannelSpec, names: tuple[str, ...]) -> int:
    """Mask that switches off exactly the named loads of a channel."""
    index = {ld.name: i for i, ld in enumerate(channel.nonessential)}
    mask = 0
    for name in names:
        if name not in index:
            raise ValueError(
                f"channel {channel.id} has no switchable load named {name!r}")
        mask |= 1 << index[name]
    return mask


def default_tier_masks(table: LoadTable) -> dict[Tier, Masks]:
    """Derive the standard tier masks from a table by load name.

    Raises ``ValueError`` when the table lacks one of the loads the mid
    tier sheds.
    """
    mid = tuple(mask_for_loads(table.channel(cid), _MID_SHED_NAMES[cid])
                for cid in (1, 2, 3, 4))
    return {Tier.FULL: FULL_MASKS, Tier.MID: mid, Tier.LOW: LOW_MASKS}
