"""Simulation-loop backend selection.

The compiled loop (``_core_cy``) is preferred when the extension built;
the pure-Python loop is the fallback.  Both produce bit-identical traces.
Set ``SIMISS_BACKEND=python`` or ``=cython`` to force one.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _core_py

try:
    from . import _core_cy
except ImportError:  # extension not built on this install
    _core_cy = None

_BACKENDS: dict[str, ModuleType | None] = {
    "python": _core_py,
    "cython": _core_cy,
}


def available_backends() -> tuple[str, ...]:
    return tuple(name for name, mod in _BACKENDS.items() if mod is not None)


def default_backend() -> str:
    forced = os.environ.get("SIMISS_BACKEND")
    if forced:
        if forced not in _BACKENDS:
            raise ValueError(f"SIMISS_BACKEND must be one of {sorted(_BACKENDS)}, "
                             f"got {forced!r}")
        if _BACKENDS[forced] is None:
            raise ValueError(f"backend {forced!r} requested via SIMISS_BACKEND "
                             "but the extension is not built")
        return forced
    return "cython" if _core_cy is not None else "python"


def get_backend(name: str | None = None) -> ModuleType:
    """Resolve a backend module by name (default: best available)."""
    return resolve_backend(name)[1]


def resolve_backend(name: str | None = None) -> tuple[str, ModuleType]:
    """Resolve a backend to its (name, module) pair."""
    if name is None:
        name = default_backend()
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; known: {sorted(_BACKENDS)}")
    mod = _BACKENDS[name]
    if mod is None:
        raise ValueError(f"backend {name!r} is not available on this install")
    return name, mod
