"""SNN workloads as spike-annotated synapse graphs, plus a synthetic generator."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

TOPOLOGY_KINDS = ("feedforward", "recurrent-reservoir", "convolutional-like")
_KIND_ALIASES = {
    "ff": "feedforward",
    "feedforward": "feedforward",
    "mlp": "feedforward",
    "reservoir": "recurrent-reservoir",
    "recurrent": "recurrent-reservoir",
    "recurrent-reservoir": "recurrent-reservoir",
    "rnn": "recurrent-reservoir",
    "conv": "convolutional-like",
    "cnn": "convolutional-like",
    "convolutional-like": "convolutional-like",
}


class WorkloadError(ValueError):
    pass


@dataclass(frozen=True)
class Synapse:
    pre: int
    post: int
    weight: float = 1.0
    spikes: int = 0


@dataclass(frozen=True)
class SnnNetwork:
    neuron_count: int
    synapses: tuple[Synapse, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "synapses", tuple(self.synapses))
        if self.neuron_count < 0:
            raise WorkloadError("neuron_count must be non-negative")
        seen = set()
        for idx, s in enumerate(self.synapses):
            where = f"synapse #{idx} ({s.pre}->{s.post})"
            if not (0 <= s.pre < self.neuron_count and 0 <= s.post < self.neuron_count):
                raise WorkloadError(f"{where}: endpoint outside [0, {self.neuron_count})")
            if s.pre == s.post:
                raise WorkloadError(f"{where}: self-loop synapses are not allowed")
            if s.spikes < 0:
                raise WorkloadError(f"{where}: negative spike count {s.spikes}")
            if (s.pre, s.post) in seen:
                raise WorkloadError(f"{where}: duplicate synapse for this (pre, post) pair")
            seen.add((s.pre, s.post))

    def fan_in(self) -> np.ndarray:
        out = np.zeros(self.neuron_count, dtype=int)
        for s in self.synapses:
            out[s.post] += 1
        return out


def total_spikes(net: SnnNetwork) -> int:
    return sum(s.spikes for s in net.synapses)


def network_to_dict(net: SnnNetwork) -> dict:
    return {
        "neurons": net.neuron_count,
        "synapses": [
            {"pre": s.pre, "post": s.post, "weight": s.weight, "spikes": s.spikes} for s in net.synapses
        ],
    }


def network_from_dict(data: dict) -> SnnNetwork:
    try:
        n = int(data["neurons"])
        syns = [
            Synapse(int(d["pre"]), int(d["post"]), float(d.get("weight", 1.0)), int(d.get("spikes", 0)))
            for d in data.get("synapses", [])
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise WorkloadError(f"malformed workload: {exc!r}") from exc
    return SnnNetwork(n, tuple(syns))


def load_workload(path) -> SnnNetwork:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise WorkloadError(f"{path}: not valid JSON ({exc})") from exc
    return network_from_dict(data)


def save_workload(net: SnnNetwork, path) -> None:
    Path(path).write_text(json.dumps(network_to_dict(net)) + "\n")


@dataclass(frozen=True)
class TopologySpec:
    """Recipe for a synthetic workload.

    ``sizes`` holds layer sizes for feedforward and convolutional-like
    networks, or a single reservoir size. For convolutional-like networks
    each post neuron takes a window of ``kernel`` neighbours from the
    previous layer and ``density`` is unused. Spike counts are drawn
    log-uniformly from ``[spikes_min, spikes_max]``.
    """

    kind: str
    sizes: tuple[int, ...]
    density: float = 1.0
    spikes_min: float = 1.0
    spikes_max: float = 1e3
    kernel: int = 3
    seed: int = 0

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind)
        if kind is None:
            raise WorkloadError(f"unknown topology kind {self.kind!r}; choose from {TOPOLOGY_KINDS}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "sizes", tuple(int(x) for x in self.sizes))
        if not self.sizes or any(x < 1 for x in self.sizes):
            raise WorkloadError("all sizes must be >= 1")
        if kind == "recurrent-reservoir" and len(self.sizes) != 1:
            raise WorkloadError("a reservoir takes exactly one size")
        if kind != "recurrent-reservoir" and len(self.sizes) < 2:
            raise WorkloadError("layered topologies need at least two layers")
        if not 0 < self.density <= 1:
            raise WorkloadError("density must lie in (0, 1]")
        if not 0 < self.spikes_min <= self.spikes_max:
            raise WorkloadError("need 0 < spikes_min <= spikes_max")
        if self.kernel < 1:
            raise WorkloadError("kernel must be >= 1")

    @classmethod
    def parse(cls, text: str, **kw) -> "TopologySpec":
        """Parse ``kind:sizes`` such as ``feedforward:16,8,4`` or ``reservoir:50``."""
        kind, _, sizes = text.partition(":")
        if not sizes:
            raise WorkloadError(f"topology {text!r} must look like kind:size[,size...]")
        try:
            parsed = tuple(int(x) for x in sizes.split(","))
        except ValueError as exc:
            raise WorkloadError(f"bad layer sizes in {text!r}") from exc
        return cls(kind.strip(), parsed, **kw)


def _pick_pairs(rng, n_candidates: int, density: float) -> np.ndarray:
    k = int(round(density * n_candidates))
    return np.sort(rng.choice(n_candidates, size=k, replace=False))


def _conv_window(p: int, n_prev: int, n_post: int, kernel: int) -> range:
    centre = (p * n_prev) // n_post + (n_prev // n_post) // 2
    lo = max(0, centre - kernel // 2)
    hi = min(n_prev, lo + kernel)
    lo = max(0, hi - kernel)
    return range(lo, hi)


def expected_synapse_count(spec: TopologySpec) -> int:
    """Closed-form synapse count the generator produces for ``spec``."""
    if spec.kind == "recurrent-reservoir":
        n = spec.sizes[0]
        return int(round(spec.density * n * (n - 1)))
    if spec.kind == "feedforward":
        return sum(int(round(spec.density * a * b)) for a, b in zip(spec.sizes, spec.sizes[1:]))
    return sum(
        len(_conv_window(p, a, b, spec.kernel)) for a, b in zip(spec.sizes, spec.sizes[1:]) for p in range(b)
    )


def generate_synthetic(spec: TopologySpec) -> SnnNetwork:
    rng = np.random.default_rng(spec.seed)
    pairs: list[tuple[int, int]] = []
    if spec.kind == "recurrent-reservoir":
        n = spec.sizes[0]
        # candidate k enumerates ordered pairs (i, j), i != j
        for k in _pick_pairs(rng, n * (n - 1), spec.density):
            i, r = divmod(int(k), n - 1)
            pairs.append((i, r + (r >= i)))
        neurons = n
    else:
        offset = 0
        for a, b in zip(spec.sizes, spec.sizes[1:]):
            nxt = offset + a
            if spec.kind == "feedforward":
                for k in _pick_pairs(rng, a * b, spec.density):
                    i, j = divmod(int(k), b)
                    pairs.append((offset + i, nxt + j))
            else:
                for p in range(b):
                    pairs.extend((offset + i, nxt + p) for i in _conv_window(p, a, b, spec.kernel))
            offset = nxt
        neurons = offset + spec.sizes[-1]
    lo, hi = np.log(spec.spikes_min), np.log(spec.spikes_max)
    spikes = np.rint(np.exp(rng.uniform(lo, hi, size=len(pairs)))).astype(int)
    weights = rng.uniform(0.0, 1.0, size=len(pairs))
    syns = tuple(
        Synapse(i, j, float(w), int(a)) for (i, j), w, a in zip(pairs, weights, spikes)
    )
    return SnnNetwork(neurons, syns)
