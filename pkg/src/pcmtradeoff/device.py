"""PCM cell physics and the lumped parasitic current model of a crossbar.

Coordinates: row 0 is the top wordline, column 0 the leftmost bitline.
Drivers enter wordlines at the west edge and column currents leave at the
south edge, so the bottom-left cell sits on the shortest current path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class UnprogrammableCellError(ValueError):
    """Raised when a cell's current cannot heat it above ambient."""


@dataclass(frozen=True)
class DevicePhysicsParams:
    alpha: float = 1e7  # 1/s
    t_melt: float = 888.0  # K
    t_ambient: float = 300.0  # K
    k_heat: float = 9e10  # K/A^2
    gamma: float = 1.45e4  # K
    vc_target: float = 0.1

    def __post_init__(self):
        for name in ("alpha", "t_melt", "t_ambient", "k_heat", "gamma", "vc_target"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)}")
        if not self.t_melt > self.t_ambient:
            raise ValueError("t_melt must exceed t_ambient")
        if not self.vc_target < 1:
            raise ValueError("vc_target must lie in (0, 1)")


@dataclass(frozen=True)
class CrossbarGeometry:
    rows: int = 128
    cols: int = 128
    r_wire: float = 25.0  # ohm per wire segment
    r_cell: float = 1e4  # ohm
    v_spike: float = 1.0  # V

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"crossbar must be at least 1x1, got {self.rows}x{self.cols}")
        if self.r_wire < 0:
            raise ValueError("r_wire must be non-negative")
        if not self.r_cell > 0 or not self.v_spike > 0:
            raise ValueError("r_cell and v_spike must be strictly positive")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)


@dataclass(frozen=True)
class CellCoordinate:
    row: int
    col: int


@dataclass(frozen=True)
class CellProfile:
    i_prog: float
    t_sh: float
    prog_latency: float
    endurance: float


def _check_cell(geom: CrossbarGeometry, cell: CellCoordinate) -> None:
    if not (0 <= cell.row < geom.rows and 0 <= cell.col < geom.cols):
        raise IndexError(f"cell ({cell.row}, {cell.col}) outside {geom.rows}x{geom.cols} crossbar")


def path_length(geom: CrossbarGeometry, cell: CellCoordinate) -> int:
    """Number of parasitic wire segments between driver and sink for ``cell``."""
    _check_cell(geom, cell)
    return cell.col + (geom.rows - 1 - cell.row)


def path_length_grid(geom: CrossbarGeometry) -> np.ndarray:
    r, c = np.indices(geom.shape)
    return c + (geom.rows - 1 - r)


def current_for_path(geom: CrossbarGeometry, length):
    return geom.v_spike / (geom.r_cell + length * geom.r_wire)


def programming_current(geom: CrossbarGeometry, cell: CellCoordinate) -> float:
    return current_for_path(geom, path_length(geom, cell))


def self_heating_temperature(i_prog, phys: DevicePhysicsParams):
    """Joule self-heating, quadratic in the programming current."""
    if np.any(np.asarray(i_prog) < 0):
        raise ValueError("programming current must be non-negative")
    out = phys.k_heat * np.square(i_prog)
    return float(out) if np.ndim(out) == 0 else out


def crystalline_fraction(t_sh: float, elapsed: float, phys: DevicePhysicsParams) -> float:
    """JMA crystalline fraction remaining after ``elapsed`` seconds at ``t_sh``.

    Below or at ambient there is no amorphization and the fraction stays 1.
    """
    if elapsed < 0:
        raise ValueError("elapsed time must be non-negative")
    if t_sh <= phys.t_ambient:
        return 1.0
    return math.exp(-phys.alpha * (t_sh - phys.t_ambient) / phys.t_melt * elapsed)


def programming_latency(t_sh, phys: DevicePhysicsParams):
    """Time for the crystalline fraction to fall to ``phys.vc_target``."""
    t = np.asarray(t_sh, dtype=float)
    if np.any(t <= phys.t_ambient):
        raise UnprogrammableCellError(
            f"self-heating temperature {float(np.min(t)):.6g} K does not exceed ambient {phys.t_ambient} K"
        )
    out = -math.log(phys.vc_target) * phys.t_melt / (phys.alpha * (t - phys.t_ambient))
    return float(out) if out.ndim == 0 else out


def cell_endurance(t_sh, phys: DevicePhysicsParams):
    t = np.asarray(t_sh, dtype=float)
    if np.any(t <= 0):
        raise ValueError("self-heating temperature must be positive")
    out = np.exp(phys.gamma / t)
    return float(out) if out.ndim == 0 else out


def cell_profile(geom: CrossbarGeometry, phys: DevicePhysicsParams, cell: CellCoordinate) -> CellProfile:
    i = programming_current(geom, cell)
    t = self_heating_temperature(i, phys)
    return CellProfile(
        i_prog=i,
        t_sh=t,
        prog_latency=programming_latency(t, phys),
        endurance=cell_endurance(t, phys),
    )


def current_map(geom: CrossbarGeometry, phys: DevicePhysicsParams | None = None) -> np.ndarray:
    """Programming current of every cell, shape ``(rows, cols)``.

    ``phys`` is accepted for interface symmetry; the lumped model does not
    depend on it.
    """
    return current_for_path(geom, path_length_grid(geom).astype(float))


@dataclass(frozen=True, eq=False)
class ProfileGrid:
    """Per-cell profile arrays for one crossbar, each of shape ``(rows, cols)``."""

    i_prog: np.ndarray
    t_sh: np.ndarray
    prog_latency: np.ndarray
    endurance: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.endurance.shape

    def __getitem__(self, cell: CellCoordinate) -> CellProfile:
        idx = (cell.row, cell.col)
        return CellProfile(
            float(self.i_prog[idx]),
            float(self.t_sh[idx]),
            float(self.prog_latency[idx]),
            float(self.endurance[idx]),
        )

    @classmethod
    def from_arrays(cls, prog_latency, endurance) -> "ProfileGrid":
        """Grid with only the fields placement and metrics use; mostly for tests."""
        lat = np.asarray(prog_latency, dtype=float)
        end = np.asarray(endurance, dtype=float)
        if lat.shape != end.shape or lat.ndim != 2:
            raise ValueError("latency and endurance must be equal-shape 2-D arrays")
        nan = np.full(lat.shape, np.nan)
        return cls(nan, nan, lat, end)


def profile_grid(geom: CrossbarGeometry, phys: DevicePhysicsParams) -> ProfileGrid:
    """Vectorized :func:`cell_profile` over the whole crossbar."""
    i = current_map(geom)
    t = self_heating_temperature(i, phys)
    if np.any(t <= phys.t_ambient):
        r, c = np.argwhere(t <= phys.t_ambient)[0]
        raise UnprogrammableCellError(
            f"cell ({r}, {c}) heats only to {t[r, c]:.6g} K, not above ambient {phys.t_ambient} K"
        )
    return ProfileGrid(i, t, programming_latency(t, phys), cell_endurance(t, phys))
