"""Multi-swarm particle swarm optimizer over a continuous relaxation of tile indices.

Updates follow the plain constant-coefficient rule

    v <- v + phi1 * (p_best - x) + phi2 * (l_best - x)
    x <- x + v

where ``l_best`` is the best position seen by the particle's sub-swarm.
There is no inertia weight and no random scaling; velocities are clamped
component-wise. Sub-swarms are reshuffled at every epoch boundary.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

log = logging.getLogger(__name__)

DECODE_EPS = 1e-9


@dataclass(frozen=True)
class PsoConfig:
    n_particles: int = 30
    phi1: float = 0.4
    phi2: float = 0.4
    sub_swarms: int = 3
    iterations_per_epoch: int = 50
    epochs: int = 10
    velocity_clamp: float | None = None  # None: half the tile count
    convergence_epsilon: float = 1e-9
    convergence_window: int = 10
    seed: int = 0
    dims: int | None = None

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError("n_particles must be >= 1")
        if self.phi1 < 0 or self.phi2 < 0:
            raise ValueError("phi1 and phi2 must be non-negative")
        if self.sub_swarms < 1:
            raise ValueError("sub_swarms must be >= 1")
        if self.dims is not None and self.dims < 1:
            raise ValueError("dims must be >= 1")
        if self.iterations_per_epoch < 0 or self.epochs < 1:
            raise ValueError("need epochs >= 1 and iterations_per_epoch >= 0")
        if self.velocity_clamp is not None and not self.velocity_clamp > 0:
            raise ValueError("velocity_clamp must be positive")

    def resolved(self, dims: int, tiles: int) -> "PsoConfig":
        clamp = self.velocity_clamp if self.velocity_clamp is not None else tiles / 2
        return replace(self, dims=dims, velocity_clamp=clamp, sub_swarms=min(self.sub_swarms, self.n_particles))


def decode(position, tiles: int) -> np.ndarray:
    """Map a real position vector to tile indices by clamping then flooring."""
    x = np.clip(np.asarray(position, dtype=float), 0.0, tiles - DECODE_EPS)
    return np.floor(x).astype(np.int64)


def encode(assignment) -> np.ndarray:
    """Centre of each tile's decode interval."""
    return np.asarray(assignment, dtype=float) + 0.5


@dataclass(eq=False)
class SwarmState:
    position: np.ndarray  # (n, D)
    velocity: np.ndarray  # (n, D)
    p_best_pos: np.ndarray
    p_best_fit: np.ndarray  # (n,)
    membership: np.ndarray  # (n,) sub-swarm id
    l_best_pos: np.ndarray  # (S, D)
    l_best_fit: np.ndarray  # (S,)
    g_best_pos: np.ndarray
    g_best_fit: float
    rng: np.random.Generator
    t: int = 0
    history: list[float] = field(default_factory=list)

    @property
    def n_particles(self) -> int:
        return self.position.shape[0]

    def recompute_local_bests(self) -> None:
        for s in range(len(self.l_best_fit)):
            idx = np.flatnonzero(self.membership == s)
            self.l_best_fit[s] = np.inf
            if len(idx):
                j = idx[np.argmin(self.p_best_fit[idx])]
                if self.p_best_fit[j] < np.inf:
                    self.l_best_fit[s] = self.p_best_fit[j]
                    self.l_best_pos[s] = self.p_best_pos[j]


def _contiguous_membership(n: int, groups: int) -> np.ndarray:
    m = np.empty(n, dtype=np.int64)
    for s, chunk in enumerate(np.array_split(np.arange(n), groups)):
        m[chunk] = s
    return m


def _evaluate(fitness_fn, x) -> float:
    f = float(fitness_fn(x))
    if not math.isfinite(f):
        log.warning("discarding candidate with non-finite fitness %r", f)
        return math.inf
    return f


def init_swarm(config: PsoConfig, fitness_fn: Callable, low: float, high: float) -> SwarmState:
    """Seeded uniform positions in ``[low, high)`` and velocities within the clamp."""
    if config.dims is None or config.velocity_clamp is None:
        raise ValueError("config must be resolved (dims and velocity_clamp set)")
    rng = np.random.default_rng(config.seed)
    n, d, s = config.n_particles, config.dims, config.sub_swarms
    pos = rng.uniform(low, high, size=(n, d))
    vel = rng.uniform(-config.velocity_clamp, config.velocity_clamp, size=(n, d))
    fit = np.array([_evaluate(fitness_fn, x) for x in pos])
    state = SwarmState(
        position=pos,
        velocity=vel,
        p_best_pos=pos.copy(),
        p_best_fit=fit,
        membership=_contiguous_membership(n, s),
        l_best_pos=np.zeros((s, d)),
        l_best_fit=np.full(s, np.inf),
        g_best_pos=pos[int(np.argmin(fit))].copy(),
        g_best_fit=float(fit.min()),
        rng=rng,
    )
    state.recompute_local_bests()
    state.history.append(state.g_best_fit)
    return state


def pso_step(state: SwarmState, config: PsoConfig, fitness_fn: Callable) -> SwarmState:
    """One synchronous update of every particle; mutates and returns ``state``.

    Bests are only replaced on strict improvement.
    """
    lb = state.l_best_pos[state.membership]
    # a sub-swarm with no finite best yet pulls towards the particle's own best
    missing = ~np.isfinite(state.l_best_fit[state.membership])
    lb[missing] = state.p_best_pos[missing]
    v = state.velocity + config.phi1 * (state.p_best_pos - state.position) + config.phi2 * (lb - state.position)
    clamp = config.velocity_clamp
    if clamp is not None:
        np.clip(v, -clamp, clamp, out=v)
    state.velocity = v
    state.position = state.position + v
    for i, x in enumerate(state.position):
        f = _evaluate(fitness_fn, x)
        if f < state.p_best_fit[i]:
            state.p_best_fit[i] = f
            state.p_best_pos[i] = x
            s = state.membership[i]
            if f < state.l_best_fit[s]:
                state.l_best_fit[s] = f
                state.l_best_pos[s] = x
            if f < state.g_best_fit:
                state.g_best_fit = f
                state.g_best_pos = x.copy()
    state.t += 1
    state.history.append(state.g_best_fit)
    return state


def regroup(state: SwarmState, config: PsoConfig) -> SwarmState:
    """Reshuffle sub-swarm membership with the state's generator; bests are kept."""
    groups = len(state.l_best_fit)
    if groups == 1:
        return state
    perm = state.rng.permutation(state.n_particles)
    for s, chunk in enumerate(np.array_split(perm, groups)):
        state.membership[chunk] = s
    state.recompute_local_bests()
    return state
