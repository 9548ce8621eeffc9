"""Effective lifetime, execution time and energy of a mapping."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hardware import HardwareModel
from .partition import ClusterSet
from .placement import Mapping, place_synapses


@dataclass(frozen=True)
class MappingMetrics:
    min_effective_lifetime: float  # workload executions until the first cell wears out
    execution_time: float  # s
    energy: float  # J
    interconnect_spikes: int
    # per-tile minimum lifetime; search-only detail, not serialized
    tile_lifetimes: tuple[float, ...] | None = field(default=None, compare=False, repr=False)


def routed_spikes(assignment, cluster_set: ClusterSet) -> int:
    """Spikes on cut synapses whose endpoint clusters sit on different tiles."""
    lab = cluster_set.neuron_cluster
    return sum(s.spikes for s in cluster_set.cut if assignment[lab[s.pre]] != assignment[lab[s.post]])


def _activity(mapping: Mapping, hw: HardwareModel) -> np.ndarray:
    """Accumulated spike count per cell, shape ``(tiles, rows, cols)``."""
    acc = np.zeros((hw.tiles, *hw.geometry.shape))
    for tile, place in zip(mapping.assignment, mapping.placements):
        for k in range(len(place)):
            acc[tile, place.rows[k], place.cols[k]] += place.spikes[k]
    return acc


def effective_lifetime(mapping: Mapping, cluster_set: ClusterSet, hw: HardwareModel):
    """Per-cell endurance/activity for every tile, and its minimum.

    Cells that never see a spike are reported as ``inf`` and do not bound
    the minimum; with no active cell at all the minimum is ``inf``.
    """
    acc = _activity(mapping, hw)
    endurance = np.broadcast_to(hw.profiles.endurance, acc.shape)
    life = np.full(acc.shape, np.inf)
    np.divide(endurance, acc, out=life, where=acc > 0)
    return life, float(life.min()) if life.size else np.inf


def execution_time(mapping: Mapping, cluster_set: ClusterSet, hw: HardwareModel) -> float:
    """Slowest tile's sequential programming time plus interconnect transfer time."""
    lat = hw.profiles.prog_latency
    per_tile = np.zeros(hw.tiles)
    for tile, place in zip(mapping.assignment, mapping.placements):
        for k in range(len(place)):
            per_tile[tile] += place.spikes[k] * lat[place.rows[k], place.cols[k]]
    compute = float(per_tile.max()) if len(mapping.assignment) else 0.0
    return compute + routed_spikes(mapping.assignment, cluster_set) / hw.switch_bandwidth


def energy(mapping: Mapping, cluster_set: ClusterSet, hw: HardwareModel) -> float:
    spikes = sum(float(p.spikes.sum()) for p in mapping.placements)
    return hw.energy(spikes, routed_spikes(mapping.assignment, cluster_set))


def evaluate_mapping(mapping: Mapping, cluster_set: ClusterSet, hw: HardwareModel) -> MappingMetrics:
    life, lo = effective_lifetime(mapping, cluster_set, hw)
    return MappingMetrics(
        min_effective_lifetime=lo,
        execution_time=execution_time(mapping, cluster_set, hw),
        energy=energy(mapping, cluster_set, hw),
        interconnect_spikes=routed_spikes(mapping.assignment, cluster_set),
        tile_lifetimes=tuple(float(x) for x in life.reshape(hw.tiles, -1).min(axis=1)),
    )


class MappingEvaluator:
    """Vectorized metrics for many assignment vectors under one placement policy.

    Placement does not depend on the tile, so it is computed once per
    cluster; evaluating an assignment is then a few bincounts.
    """

    def __init__(self, cluster_set: ClusterSet, hw: HardwareModel, policy: str):
        if (cluster_set.rows, cluster_set.cols) != hw.geometry.shape:
            raise ValueError("cluster set was partitioned for a different crossbar size")
        self.cluster_set, self.hw, self.policy = cluster_set, hw, policy
        prof = hw.profiles
        self.placements = tuple(place_synapses(c, prof, policy) for c in cluster_set.clusters)
        ncells = hw.geometry.rows * hw.geometry.cols
        self._ncells = ncells
        self._owner = np.concatenate(
            [np.full(len(p), i, dtype=np.int64) for i, p in enumerate(self.placements)] + [np.zeros(0, np.int64)]
        )
        self._cell = np.concatenate(
            [p.rows * hw.geometry.cols + p.cols for p in self.placements] + [np.zeros(0, np.int64)]
        ).astype(np.int64)
        self._spikes = np.concatenate([p.spikes for p in self.placements] + [np.zeros(0)])
        lat = prof.prog_latency.ravel()
        self._load = np.array([float((p.spikes * lat[p.rows * hw.geometry.cols + p.cols]).sum()) for p in self.placements])
        self._endurance = np.tile(prof.endurance.ravel(), hw.tiles)
        lab = np.asarray(cluster_set.neuron_cluster, dtype=np.int64)
        self._cut_src = np.array([lab[s.pre] for s in cluster_set.cut], dtype=np.int64)
        self._cut_dst = np.array([lab[s.post] for s in cluster_set.cut], dtype=np.int64)
        self._cut_spikes = np.array([s.spikes for s in cluster_set.cut], dtype=np.int64)
        self._total_spikes = float(self._spikes.sum())

    def mapping(self, assignment) -> Mapping:
        return Mapping(tuple(int(t) for t in assignment), self.placements, self.policy)

    def __call__(self, assignment) -> MappingMetrics:
        a = np.asarray(assignment, dtype=np.int64)
        hw = self.hw
        routed = int(self._cut_spikes[a[self._cut_src] != a[self._cut_dst]].sum())
        acc = np.bincount(a[self._owner] * self._ncells + self._cell, weights=self._spikes, minlength=hw.tiles * self._ncells)
        life = np.full(acc.shape, np.inf)
        np.divide(self._endurance, acc, out=life, where=acc > 0)
        per_tile = life.reshape(hw.tiles, -1).min(axis=1)
        compute = float(np.bincount(a, weights=self._load, minlength=hw.tiles).max()) if len(a) else 0.0
        return MappingMetrics(
            min_effective_lifetime=float(per_tile.min()),
            execution_time=compute + routed / hw.switch_bandwidth,
            energy=hw.energy(self._total_spikes, routed),
            interconnect_spikes=routed,
            tile_lifetimes=tuple(per_tile.tolist()),
        )
