"""Cluster-to-tile mapping search with the multi-swarm optimizer."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .archive import SolutionArchive
from .hardware import HardwareModel
from .metrics import MappingEvaluator, MappingMetrics
from .partition import ClusterSet
from .placement import Mapping
from .pso import PsoConfig, decode, init_swarm, pso_step, regroup

log = logging.getLogger(__name__)

FITNESS_KINDS = ("spikes", "time", "lifetime")

# weight of the per-tile tie-breaker in the lifetime fitness
LIFETIME_TIE_WEIGHT = 1e-9


def fitness_value(metrics: MappingMetrics, kind: str) -> float:
    """Scalar to minimize: routed spikes, execution time, or inverse lifetime.

    Inverse min lifetime is flat whenever the worst cell is untouched, so
    the lifetime fitness adds the mean per-tile inverse lifetime scaled by
    ``LIFETIME_TIE_WEIGHT``. That only reorders mappings whose min
    lifetimes agree to about nine digits.
    """
    if kind == "spikes":
        return float(metrics.interconnect_spikes)
    if kind == "time":
        return metrics.execution_time
    if kind == "lifetime":
        f = 1.0 / metrics.min_effective_lifetime
        if metrics.tile_lifetimes:
            f += LIFETIME_TIE_WEIGHT * sum(1.0 / x for x in metrics.tile_lifetimes) / len(metrics.tile_lifetimes)
        return f
    raise ValueError(f"unknown fitness kind {kind!r}; choose from {FITNESS_KINDS}")


def objective_key(metrics: MappingMetrics, kind: str) -> float:
    """The raw quantity a fitness kind targets, oriented so smaller is better."""
    if kind == "spikes":
        return float(metrics.interconnect_spikes)
    if kind == "time":
        return metrics.execution_time
    if kind == "lifetime":
        return -metrics.min_effective_lifetime
    raise ValueError(f"unknown fitness kind {kind!r}; choose from {FITNESS_KINDS}")


@dataclass
class PsoResult:
    mapping: Mapping
    metrics: MappingMetrics
    fitness: float
    archive: SolutionArchive
    history: list[float]  # g_best fitness after initialisation and every step

    def __iter__(self):
        yield self.mapping
        yield self.archive


def _stalled(trace: list[np.ndarray], window: int, eps: float) -> bool:
    if window < 1 or len(trace) <= window:
        return False
    old, new = trace[-window - 1], trace[-1]
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(np.isfinite(old), (old - new) / np.maximum(np.abs(old), 1e-300), np.inf)
    return bool(np.all(rel < eps))


def run_pso(
    cluster_set: ClusterSet,
    hw: HardwareModel,
    config: PsoConfig,
    fitness_kind: str,
    policy: str,
    evaluator: MappingEvaluator | None = None,
) -> PsoResult:
    """Search cluster-to-tile assignments minimizing ``fitness_kind``.

    Runs ``epochs`` epochs of up to ``iterations_per_epoch`` steps,
    regrouping sub-swarms between epochs. An epoch ends early once no
    sub-swarm best has improved by ``convergence_epsilon`` (relative) over
    ``convergence_window`` steps. Every evaluated candidate is archived.
    """
    if len(cluster_set) == 0:
        raise ValueError("nothing to map: the cluster set is empty")
    fitness_value(MappingMetrics(1.0, 0.0, 0.0, 0), fitness_kind)  # validates kind
    cfg = config.resolved(len(cluster_set), hw.tiles)
    if evaluator is None:
        evaluator = MappingEvaluator(cluster_set, hw, policy)
    elif evaluator.policy != policy:
        raise ValueError("evaluator policy does not match")
    archive = SolutionArchive()
    cache: dict[tuple, MappingMetrics] = {}
    clock = {"t": 0}

    def fitness(x):
        key = tuple(decode(x, hw.tiles).tolist())
        m = cache.get(key)
        if m is None:
            m = cache[key] = evaluator(key)
        archive.append(fitness_kind, policy, clock["t"], cfg.seed, key, m)
        return fitness_value(m, fitness_kind)

    state = init_swarm(cfg, fitness, 0.0, float(hw.tiles))
    for epoch in range(cfg.epochs):
        if epoch:
            regroup(state, cfg)
        trace = [state.l_best_fit.copy()]
        for _ in range(cfg.iterations_per_epoch):
            clock["t"] = state.t + 1
            prev = state.g_best_fit
            pso_step(state, cfg, fitness)
            if state.g_best_fit > prev:
                raise AssertionError("global best fitness increased")
            trace.append(state.l_best_fit.copy())
            if _stalled(trace, cfg.convergence_window, cfg.convergence_epsilon):
                log.debug("epoch %d converged after %d steps", epoch, len(trace) - 1)
                break
    if not np.isfinite(state.g_best_fit):
        raise ValueError("no candidate produced a finite fitness")
    best = tuple(decode(state.g_best_pos, hw.tiles).tolist())
    return PsoResult(evaluator.mapping(best), cache[best], state.g_best_fit, archive, list(state.history))
