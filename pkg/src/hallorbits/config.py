"""Resource caps shared by every module.

Caps are plain module-level state so a run can override them once from a
JSON file (``load_config``) without threading a config object everywhere.
Exceeding a cap always raises :class:`CapExceeded`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path


class CapExceeded(RuntimeError):
    """A computation would exceed a configured resource cap."""


@dataclass(frozen=True)
class Caps:
    field_size: int = 3**12
    degree: int = 4096
    enumeration: int = 10**6
    orbit_points: int = 10**7
    dixon_order: int = 10**5
    dixon_classes: int = 40
    hall_budget: int = 10**5


_caps = Caps()


def caps() -> Caps:
    return _caps


def set_caps(**overrides) -> Caps:
    global _caps
    known = {f.name for f in fields(Caps)}
    bad = set(overrides) - known
    if bad:
        raise ValueError(f"unknown cap(s): {sorted(bad)}")
    _caps = replace(_caps, **overrides)
    return _caps


def reset_caps() -> Caps:
    global _caps
    _caps = Caps()
    return _caps


def load_config(path: str | Path) -> Caps:
    """Read a JSON object of cap overrides, e.g. ``{"degree": 8192}``."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return set_caps(**{k: int(v) for k, v in data.get("caps", data).items()})


def check_cap(name: str, value: int) -> None:
    limit = getattr(_caps, name)
    if value > limit:
        raise CapExceeded(f"{name} cap exceeded: {value} > {limit}")
