"""Within-crossbar synapse-to-cell placement and the Mapping container.

All synapses from one pre-synaptic neuron share a wordline, so placement
picks a row per pre-synaptic group and then cells inside that row.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .device import CellCoordinate, ProfileGrid
from .partition import Cluster

POLICIES = ("row_major", "performance_first", "lifetime_first")


class CapacityError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CellAssignment:
    """Cells for ``cluster.synapses``, in the same order."""

    cluster_id: int
    rows: np.ndarray
    cols: np.ndarray
    spikes: np.ndarray

    def __len__(self):
        return len(self.rows)

    def cell(self, k: int) -> CellCoordinate:
        return CellCoordinate(int(self.rows[k]), int(self.cols[k]))

    def validate(self, shape: tuple[int, int]) -> None:
        r, c = shape
        if len(self.rows) and (self.rows.min() < 0 or self.rows.max() >= r or self.cols.min() < 0 or self.cols.max() >= c):
            raise CapacityError(f"cluster {self.cluster_id}: placement outside {r}x{c} crossbar")
        flat = self.rows * c + self.cols
        if len(np.unique(flat)) != len(flat):
            raise CapacityError(f"cluster {self.cluster_id}: a cell is used twice")


@dataclass(frozen=True, eq=False)
class Mapping:
    assignment: tuple[int, ...]
    placements: tuple[CellAssignment, ...]
    policy: str

    def validate(self, tiles: int, shape: tuple[int, int]) -> None:
        if len(self.assignment) != len(self.placements):
            raise ValueError("assignment and placements disagree on cluster count")
        if any(not 0 <= t < tiles for t in self.assignment):
            raise ValueError(f"assignment {self.assignment} references a tile outside [0, {tiles})")
        for p in self.placements:
            p.validate(shape)


def _groups(cluster: Cluster) -> dict[int, list[int]]:
    g: dict[int, list[int]] = defaultdict(list)
    for k, s in enumerate(cluster.synapses):
        g[s.pre].append(k)
    return g


def place_synapses(cluster: Cluster, profiles: ProfileGrid, policy: str) -> CellAssignment:
    """Assign every synapse resident on ``cluster``'s crossbar to a distinct cell.

    ``row_major`` gives pre-synaptic groups consecutive rows from the top and
    fills each row from column 0. ``performance_first`` and
    ``lifetime_first`` serve the most active group first, giving it the free
    row whose best cells suit it most: lowest total spike-weighted latency,
    or highest worst-case endurance/spikes. Inside a row the busiest synapse
    gets the fastest (or most durable) cell.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown placement policy {policy!r}; choose from {POLICIES}")
    nrows, ncols = profiles.shape
    syn = cluster.synapses
    spikes = np.array([s.spikes for s in syn], dtype=float)
    groups = _groups(cluster)
    if len(groups) > nrows:
        raise CapacityError(f"cluster {cluster.id}: {len(groups)} input neurons exceed {nrows} rows")
    if any(len(m) > ncols for m in groups.values()):
        raise CapacityError(f"cluster {cluster.id}: fan-out exceeds {ncols} columns")
    rows = np.zeros(len(syn), dtype=int)
    cols = np.zeros(len(syn), dtype=int)

    if policy == "row_major":
        for r, pre in enumerate(sorted(groups)):
            members = sorted(groups[pre], key=lambda k: syn[k].post)
            rows[members] = r
            cols[members] = np.arange(len(members))
        return CellAssignment(cluster.id, rows, cols, spikes)

    if policy == "performance_first":
        goodness = -profiles.prog_latency
    else:
        goodness = profiles.endurance
    # per row, column indices from best to worst cell (stable: lowest column on ties)
    col_order = np.argsort(-goodness, axis=1, kind="stable")
    sorted_good = np.take_along_axis(goodness, col_order, axis=1)

    def group_key(pre):
        a = spikes[groups[pre]]
        return (-a.max(), -a.sum(), pre)

    free = np.ones(nrows, dtype=bool)
    for pre in sorted(groups, key=group_key):
        members = sorted(groups[pre], key=lambda k: (-spikes[k], syn[k].post))
        a = spikes[members]
        k = len(members)
        best = sorted_good[:, :k]
        if policy == "performance_first":
            score = (a * best).sum(axis=1)  # = -(sum a * latency)
        else:
            with np.errstate(divide="ignore"):
                score = (best / a).min(axis=1)
        score = np.where(free, score, -np.inf)
        r = int(np.argmax(score))  # first maximum = lowest row index
        free[r] = False
        rows[members] = r
        cols[members] = col_order[r, :k]
    return CellAssignment(cluster.id, rows, cols, spikes)
