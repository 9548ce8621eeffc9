"""Tiled hardware model and its JSON configuration file."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .device import CrossbarGeometry, DevicePhysicsParams, ProfileGrid, profile_grid

# JSON key -> (section, attribute)
_HW_KEYS = {
    "rows": ("geometry", "rows"),
    "cols": ("geometry", "cols"),
    "r_wire_ohm": ("geometry", "r_wire"),
    "r_cell_ohm": ("geometry", "r_cell"),
    "v_spike_v": ("geometry", "v_spike"),
    "alpha_per_s": ("physics", "alpha"),
    "t_melt_k": ("physics", "t_melt"),
    "t_ambient_k": ("physics", "t_ambient"),
    "k_heat_k_per_a2": ("physics", "k_heat"),
    "gamma_k": ("physics", "gamma"),
    "vc_target": ("physics", "vc_target"),
    "energy_per_spike_pj": ("model", "energy_per_spike_pj"),
    "energy_per_route_pj": ("model", "energy_per_route_pj"),
    "switch_bandwidth_events_per_s": ("model", "switch_bandwidth"),
    "tiles": ("model", "tiles"),
}


@dataclass(frozen=True)
class HardwareModel:
    """DYNAP-SE-like tiled array: identical PCM crossbars joined by a routing mesh."""

    tiles: int = 4
    geometry: CrossbarGeometry = field(default_factory=CrossbarGeometry)
    physics: DevicePhysicsParams = field(default_factory=DevicePhysicsParams)
    energy_per_spike_pj: float = 50.0
    energy_per_route_pj: float = 147.0
    switch_bandwidth: float = 1.8e9  # events/s

    def __post_init__(self):
        if self.tiles < 1:
            raise ValueError("tiles must be >= 1")
        if self.energy_per_spike_pj < 0 or self.energy_per_route_pj < 0:
            raise ValueError("energies must be non-negative")
        if not self.switch_bandwidth > 0:
            raise ValueError("switch bandwidth must be positive")

    def energy(self, spikes, routed) -> float:
        """Joules for ``spikes`` synaptic events plus ``routed`` inter-tile events."""
        # sum in pJ first so integer counts give the exact decimal result
        return (spikes * self.energy_per_spike_pj + routed * self.energy_per_route_pj) / 1e12

    @cached_property
    def profiles(self) -> ProfileGrid:
        return profile_grid(self.geometry, self.physics)

    @classmethod
    def from_dict(cls, cfg: dict) -> "HardwareModel":
        """Build from the flat JSON schema; unknown keys (e.g. a ``pso`` block) are ignored."""
        parts: dict[str, dict] = {"geometry": {}, "physics": {}, "model": {}}
        for key, (section, attr) in _HW_KEYS.items():
            if key in cfg:
                parts[section][attr] = cfg[key]
        for k in ("rows", "cols", "tiles"):
            sec = "model" if k == "tiles" else "geometry"
            if k in parts[sec]:
                parts[sec][k] = int(parts[sec][k])
        return cls(
            geometry=CrossbarGeometry(**parts["geometry"]),
            physics=DevicePhysicsParams(**parts["physics"]),
            **parts["model"],
        )

    def to_dict(self) -> dict:
        out = {}
        for key, (section, attr) in _HW_KEYS.items():
            src = self if section == "model" else getattr(self, section)
            out[key] = getattr(src, attr)
        return out


def load_config(path) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError(f"{path}: top-level JSON must be an object")
    return cfg


def load_hardware(path) -> HardwareModel:
    return HardwareModel.from_dict(load_config(path))


def save_hardware(hw: HardwareModel, path) -> None:
    Path(path).write_text(json.dumps(hw.to_dict(), indent=2) + "\n")
