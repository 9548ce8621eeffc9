"""End-to-end exploration: partition, search under each fitness/policy, report."""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .archive import ArchiveEntry, SolutionArchive, pareto_front, write_archive_csv
from .device import current_map
from .hardware import HardwareModel
from .mapper import FITNESS_KINDS, PsoResult, objective_key, run_pso
from .metrics import MappingEvaluator
from .partition import ClusterSet, partition
from .placement import POLICIES
from .pso import PsoConfig
from .workload import SnnNetwork

log = logging.getLogger(__name__)

# tool emulations: (fitness kind, placement policy)
EMULATIONS = {
    "dfsynthesizer_style": ("time", "performance_first"),
    "spinemap_style": ("spikes", "row_major"),
}


@dataclass
class Exploration:
    cluster_set: ClusterSet
    archive: SolutionArchive
    runs: dict[tuple[str, str], PsoResult] = field(default_factory=dict)


def explore(
    net: SnnNetwork,
    hw: HardwareModel,
    pso_config: PsoConfig,
    fitness_kinds=FITNESS_KINDS,
    policies=POLICIES,
    partition_seed: int | None = None,
) -> Exploration:
    """Partition once, then run the optimizer for every (fitness, policy) pair.

    All runs share the PSO seed, so they start from the same swarm.
    """
    for k in fitness_kinds:
        if k not in FITNESS_KINDS:
            raise ValueError(f"unknown fitness kind {k!r}; choose from {FITNESS_KINDS}")
    for p in policies:
        if p not in POLICIES:
            raise ValueError(f"unknown placement policy {p!r}; choose from {POLICIES}")
    rows, cols = hw.geometry.shape
    seed = pso_config.seed if partition_seed is None else partition_seed
    cs = partition(net, rows, cols, seed=seed)
    log.info("partitioned %d neurons into %d clusters", net.neuron_count, len(cs))
    result = Exploration(cs, SolutionArchive())
    for policy in policies:
        evaluator = MappingEvaluator(cs, hw, policy)
        for kind in fitness_kinds:
            try:
                run = run_pso(cs, hw, pso_config, kind, policy, evaluator=evaluator)
            except Exception as exc:
                raise RuntimeError(f"run fitness={kind} policy={policy} failed: {exc}") from exc
            result.runs[(kind, policy)] = run
            result.archive.extend(run.archive)
    return result


def best_entry(entries, fitness_kind: str) -> ArchiveEntry:
    """Best raw objective for ``fitness_kind``; lowest mapping id on ties."""
    return min(entries, key=lambda e: (objective_key(e.metrics, fitness_kind), e.mapping_id))


def _describe(e: ArchiveEntry, max_life: float, min_time: float) -> dict:
    m = e.metrics
    if math.isinf(max_life):
        norm_life = 1.0 if math.isinf(m.min_effective_lifetime) else None
    else:
        norm_life = m.min_effective_lifetime / max_life
    return {
        "mapping_id": e.mapping_id,
        "fitness_kind": e.fitness_kind,
        "policy": e.policy,
        "assignment": list(e.assignment),
        "exec_time_s": m.execution_time,
        "min_lifetime": m.min_effective_lifetime,
        "energy_j": m.energy,
        "interconnect_spikes": m.interconnect_spikes,
        "normalized_lifetime": norm_life,
        "normalized_exec_time": m.execution_time / min_time if min_time > 0 else None,
    }


def summarize(archive) -> dict:
    """Best entry per fitness (and per run), normalized to the archive's extremes.

    Lifetimes are divided by the longest lifetime in the archive and times
    by the shortest execution time.
    """
    entries = list(archive)
    if not entries:
        raise ValueError("cannot summarize an empty archive")
    longest = best_entry(entries, "lifetime")
    fastest = best_entry(entries, "time")
    max_life, min_time = longest.lifetime, fastest.exec_time
    kinds = sorted({e.fitness_kind for e in entries}, key=lambda k: (FITNESS_KINDS + (k,)).index(k))
    policies = sorted({e.policy for e in entries}, key=lambda p: (POLICIES + (p,)).index(p))
    out = {
        "entries": len(entries),
        "pareto_size": len(pareto_front(entries)),
        "max_lifetime": _describe(longest, max_life, min_time),
        "max_performance": _describe(fastest, max_life, min_time),
        "best_per_fitness": {},
        "best_per_run": [],
        "emulations": {},
    }
    for k in kinds:
        sel = [e for e in entries if e.fitness_kind == k]
        out["best_per_fitness"][k] = _describe(best_entry(sel, k), max_life, min_time)
        for p in policies:
            run = [e for e in sel if e.policy == p]
            if run:
                out["best_per_run"].append(_describe(best_entry(run, k), max_life, min_time))
    for name, (k, p) in EMULATIONS.items():
        run = [e for e in entries if e.fitness_kind == k and e.policy == p]
        if run:
            out["emulations"][name] = _describe(best_entry(run, k), max_life, min_time)
    return out


def write_current_map(hw: HardwareModel, path) -> np.ndarray:
    cmap = current_map(hw.geometry, hw.physics)
    np.savetxt(path, cmap, delimiter=",", fmt="%.10e")
    return cmap


def report(archive, out_dir, hw: HardwareModel | None = None, figures: bool = True) -> dict[str, Path]:
    """Write archive.csv, pareto.csv, summary.json, currentmap.csv and, optionally, PNG figures."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create report directory {out}: {exc}") from exc
    hw = hw or HardwareModel()
    entries = list(archive)
    front = pareto_front(entries)
    summary = summarize(entries)
    paths = {
        "archive": out / "archive.csv",
        "pareto": out / "pareto.csv",
        "summary": out / "summary.json",
        "currentmap": out / "currentmap.csv",
    }
    try:
        write_archive_csv(entries, paths["archive"])
        write_archive_csv(front, paths["pareto"], stamp=False)
        paths["summary"].write_text(json.dumps(summary, indent=2) + "\n")
        cmap = write_current_map(hw, paths["currentmap"])
        if figures:
            from . import plotting

            paths["tradeoff_png"] = plotting.plot_tradeoff(entries, front, out / "tradeoff.png")
            paths["currentmap_png"] = plotting.plot_current_map(cmap, out / "currentmap.png")
            paths["normalized_png"] = plotting.plot_normalized(summary, out / "normalized.png")
    except OSError as exc:
        raise OSError(f"writing report into {out} failed: {exc}") from exc
    return paths
