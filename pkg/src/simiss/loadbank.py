"""Four-channel ISS load bank and switch-mask power accounting.

The U.S. segment groups its loads into four distribution channels.  Every
nonessential load on a channel is behind a relay switch; an 8-bit mask per
channel drives those switches (bit ``i`` controls the ``i``-th nonessential
load in table order, bit value 1 = switched off).  Essential loads have no
switch and always draw power.

All power values are kilowatts.  Tables and masks are immutable values and
every function here is pure, so they are safe to share between threads.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

MASK_BITS = 8
ALL_ON = 0
ALL_OFF = 255

#: masks for the four channels, in channel-id order
Masks = tuple[int, int, int, int]


@dataclass(frozen=True)
class LoadSpec:
    """A single constant-power load."""

    name: str
    power_kw: float
    essential: bool = False

    def __post_init__(self):
        if not self.name:
            raise ValueError("load name must be non-empty")
        if not self.power_kw > 0:
            raise ValueError(f"load {self.name!r}: power_kw must be > 0, "
                             f"got {self.power_kw}")


@dataclass(frozen=True)
class ChannelSpec:
    """One distribution channel; row order defines the mask bit order."""

    id: int
    loads: tuple[LoadSpec, ...]

    def __post_init__(self):
        if self.id not in (1, 2, 3, 4):
            raise ValueError(f"channel id must be 1-4, got {self.id}")
        names = [ld.name for ld in self.loads]
        if len(set(names)) != len(names):
            raise ValueError(f"channel {self.id}: duplicate load names")
        if len(self.nonessential) > MASK_BITS:
            raise ValueError(
                f"channel {self.id}: more than {MASK_BITS} nonessential loads")

    @property
    def nonessential(self) -> tuple[LoadSpec, ...]:
        """Nonessential loads in table order (mask bit 0 first)."""
        return tuple(ld for ld in self.loads if not ld.essential)

    @property
    def total_kw(self) -> float:
        total = 0.0
        for ld in self.loads:
            total += ld.power_kw
        return total

    @property
    def essential_kw(self) -> float:
        total = 0.0
        for ld in self.loads:
            if ld.essential:
                total += ld.power_kw
        return total


@dataclass(frozen=True)
class LoadTable:
    """The four channels of the load bank."""

    channels: tuple[ChannelSpec, ChannelSpec, ChannelSpec, ChannelSpec]

    def __post_init__(self):
        if len(self.channels) != 4:
            raise ValueError("a load table has exactly 4 channels")
        ids = [ch.id for ch in self.channels]
        if ids != [1, 2, 3, 4]:
            raise ValueError(f"channels must be ordered 1-4, got ids {ids}")

    def channel(self, cid: int) -> ChannelSpec:
        return self.channels[cid - 1]

    @property
    def total_kw(self) -> float:
        return total_power(self, (ALL_ON,) * 4)

    @property
    def essential_kw(self) -> float:
        return essential_power(self)


# Builtin load bank of the ISS U.S. segment.  Channels 1 and 2 are
# identical; per-channel totals are 18.035 / 18.035 / 20.97 / 20.92 kW.
_CH12_ROWS = (
    ("Battery Unit", 6.645, True),
    ("Fan", 1.605, False),
    ("Atmosphere Controller", 1.2, True),
    ("Crew System", 0.575, True),
    ("Control System", 0.82, True),
    ("Communications", 0.47, True),
    ("Lighting Bank", 1.08, False),
    ("Main Computer", 0.385, True),
    ("Robotic Workstation", 0.895, False),
    ("Robotic Arm", 3.21, False),
    ("Air Pump", 1.15, True),
)
_CH3_ROWS = (
    ("Battery Unit", 6.645, True),
    ("Fan", 0.535, False),
    ("Lighting Bank", 0.72, False),
    ("Experiment U.S. 1", 4.25, False),
    ("Experiment U.S. 3", 2.275, False),
    ("Experiment Russian 1", 2.715, False),
    ("Experiment Russian 3", 1.845, False),
    ("Experiment Japan 1", 1.985, False),
)
_CH4_ROWS = (
    ("Battery Unit", 6.645, True),
    ("Fan", 1.07, False),
    ("Lighting Bank", 0.36, False),
    ("Experiment U.S. 2", 3.005, False),
    ("Experiment U.S. 4", 2.26, False),
    ("Experiment Russian 2", 3.2, False),
    ("Experiment Japan 2", 0.92, False),
    ("Experiment Japan 3", 3.46, False),
)


def _channel(cid: int, rows) -> ChannelSpec:
    return ChannelSpec(cid, tuple(LoadSpec(n, p, e) for n, p, e in rows))


def builtin_iss_table() -> LoadTable:
    """The builtin ISS U.S.-segment load bank (38 loads, 77.96 kW total)."""
    return LoadTable((
        _channel(1, _CH12_ROWS),
        _channel(2, _CH12_ROWS),
        _channel(3, _CH3_ROWS),
        _channel(4, _CH4_ROWS),
    ))


def _check_mask(mask: int) -> None:
    if not isinstance(mask, int) or isinstance(mask, bool):
        raise ValueError(f"mask must be an integer, got {mask!r}")
    if not 0 <= mask <= 255:
        raise ValueError(f"mask must be in 0..255, got {mask}")


def decode_mask(mask: int) -> tuple[bool, ...]:
    """Expand a channel mask into 8 switch states, bit 0 first.

    ``True`` means the switch is closed (load powered); a set bit opens
    the switch, so 255 turns every switched load off.
    """
    _check_mask(mask)
    return tuple(not (mask >> i) & 1 for i in range(MASK_BITS))


def encode_mask(states: Iterable[bool]) -> int:
    """Inverse of :func:`decode_mask`: 8 switch states back to a mask."""
    states = tuple(states)
    if len(states) != MASK_BITS:
        raise ValueError(f"expected {MASK_BITS} switch states, got {len(states)}")
    mask = 0
    for i, on in enumerate(states):
        if not on:
            mask |= 1 << i
    return mask


def channel_power(channel: ChannelSpec, mask: int) -> float:
    """Power drawn by one channel under a switch mask.

    Essential loads always count; nonessential load ``i`` counts when mask
    bit ``i`` is clear.  Mask bits beyond the channel's nonessential count
    are ignored, so 255 works uniformly on every channel.
    """
    states = decode_mask(mask)
    total = 0.0
    bit = 0
    for ld in channel.loads:
        if ld.essential:
            total += ld.power_kw
        else:
            if states[bit]:
                total += ld.power_kw
            bit += 1
    return total


def total_power(table: LoadTable, masks: Sequence[int]) -> float:
    """Total power over all four channels under a mask set."""
    if len(masks) != 4:
        raise ValueError(f"expected 4 channel masks, got {len(masks)}")
    total = 0.0
    for ch, mask in zip(table.channels, masks):
        total += channel_power(ch, mask)
    return total


def essential_power(table: LoadTable) -> float:
    """Power that must be served under all conditions (all switches open)."""
    return total_power(table, (ALL_OFF,) * 4)


def load_table_from_csv(path: str | Path) -> LoadTable:
    """Read a load table from CSV.

    Expected header: ``channel,name,power_kw,essential``.  Rows must be
    grouped by channel; row order within a channel defines the mask bit
    order.  ``essential`` is ``true`` or ``false``.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty load-table file") from None
        if [h.strip().lower() for h in header] != ["channel", "name",
                                                   "power_kw", "essential"]:
            raise ValueError(
                f"{path}: expected header 'channel,name,power_kw,essential', "
                f"got {','.join(header)!r}")
        rows_by_channel: dict[int, list[LoadSpec]] = {}
        seen_order: list[int] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                cid = int(row[0])
                power = float(row[2])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            flag = row[3].strip().lower()
            if flag not in ("true", "false"):
                raise ValueError(
                    f"{path}:{lineno}: essential must be 'true' or 'false', "
                    f"got {row[3]!r}")
            if cid not in rows_by_channel:
                rows_by_channel[cid] = []
                seen_order.append(cid)
            elif seen_order[-1] != cid:
                raise ValueError(f"{path}:{lineno}: rows for channel {cid} "
                                 "are not contiguous")
            rows_by_channel[cid].append(
                LoadSpec(row[1].strip(), power, flag == "true"))
    if sorted(rows_by_channel) != [1, 2, 3, 4]:
        raise ValueError(f"{path}: expected channels 1-4, got "
                         f"{sorted(rows_by_channel)}")
    return LoadTable(tuple(ChannelSpec(cid, tuple(rows_by_channel[cid]))
                           for cid in (1, 2, 3, 4)))
