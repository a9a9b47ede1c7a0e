"""Named, versioned radio parameter profiles shipped with the package."""

from __future__ import annotations

import json
from importlib import resources

from ..netsim import RadioConfig

__all__ = ["available_profiles", "load_profile", "profile_info"]


def _read(name: str) -> dict:
    fname = name.replace("-", "_") + ".json"
    try:
        text = resources.files(__package__).joinpath(fname).read_text()
    except FileNotFoundError:
        raise KeyError(f"unknown radio profile {name!r}") from None
    return json.loads(text)


def available_profiles() -> list[str]:
    names = []
    for entry in resources.files(__package__).iterdir():
        if entry.name.endswith(".json"):
            names.append(entry.name[: -len(".json")].replace("_", "-"))
    return sorted(names)


def profile_info(name: str) -> dict:
    return _read(name)


def load_profile(name: str, **overrides) -> RadioConfig:
    """Build a RadioConfig from a named profile, with field overrides."""
    data = _read(name)["radio"]
    data.update(overrides)
    return RadioConfig(**data)
