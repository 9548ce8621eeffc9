"""Capacity-bounded clustering of an SNN, one cluster per crossbar.

A neuron's incoming synapses live on its cluster's crossbar: each distinct
pre-synaptic neuron needs a wordline (row) and each neuron with fan-in
needs a bitline (column). Clusters are grown greedily along the heaviest
spike connections and then refined with Kernighan-Lin style moves and
pairwise swaps that lower the spike-weighted cut.
"""
from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .workload import SnnNetwork, Synapse, total_spikes


class UnsplittableNeuronError(ValueError):
    """A neuron's fan-in exceeds the crossbar's row count."""


@dataclass(frozen=True)
class Footprint:
    inputs: int
    outputs: int
    synapses: int


@dataclass(frozen=True)
class Cluster:
    id: int
    neurons: tuple[int, ...]
    synapses: tuple[Synapse, ...]  # every synapse whose post neuron is in this cluster

    @property
    def internal_synapses(self) -> tuple[Synapse, ...]:
        members = set(self.neurons)
        return tuple(s for s in self.synapses if s.pre in members)

    @property
    def footprint(self) -> Footprint:
        return Footprint(
            inputs=len({s.pre for s in self.synapses}),
            outputs=len({s.post for s in self.synapses}),
            synapses=len(self.synapses),
        )


@dataclass(frozen=True)
class ClusterSet:
    clusters: tuple[Cluster, ...]
    cut: tuple[Synapse, ...]
    neuron_cluster: tuple[int, ...]
    rows: int
    cols: int

    def __len__(self):
        return len(self.clusters)

    def validate(self, net: SnnNetwork) -> None:
        seen: set[int] = set()
        for c in self.clusters:
            fp = c.footprint
            if fp.inputs > self.rows or fp.outputs > self.cols or fp.synapses > self.rows * self.cols:
                raise AssertionError(f"cluster {c.id} footprint {fp} exceeds {self.rows}x{self.cols}")
            if seen & set(c.neurons):
                raise AssertionError(f"cluster {c.id} overlaps another cluster")
            seen |= set(c.neurons)
        if seen != set(range(net.neuron_count)):
            raise AssertionError("clusters do not cover every neuron")
        internal = sum(len(c.internal_synapses) for c in self.clusters)
        if internal + len(self.cut) != len(net.synapses):
            raise AssertionError("synapses are not split exactly into internal and cut")

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "clusters": [{"id": c.id, "neurons": list(c.neurons)} for c in self.clusters],
            "cut_synapses": [{"pre": s.pre, "post": s.post, "spikes": s.spikes} for s in self.cut],
        }


def cut_spikes(cs: ClusterSet) -> int:
    return sum(s.spikes for s in cs.cut)


def save_cluster_set(cs: ClusterSet, path) -> None:
    Path(path).write_text(json.dumps(cs.to_dict(), indent=1) + "\n")


class _Labels:
    """Mutable cluster labelling with incremental capacity bookkeeping."""

    def __init__(self, net: SnnNetwork, rows: int, cols: int):
        self.rows, self.cols = rows, cols
        self.n = net.neuron_count
        self.fanin: list[list[int]] = [[] for _ in range(self.n)]
        self.adj: list[dict[int, int]] = [defaultdict(int) for _ in range(self.n)]
        for s in net.synapses:
            self.fanin[s.post].append(s.pre)
            self.adj[s.pre][s.post] += s.spikes
            self.adj[s.post][s.pre] += s.spikes
        self.label = [-1] * self.n
        self.pre_count: list[Counter] = []
        self.outputs: list[int] = []
        self.nsyn: list[int] = []
        self.members: list[set[int]] = []

    def new_cluster(self) -> int:
        self.members.append(set())
        self.pre_count.append(Counter())
        self.outputs.append(0)
        self.nsyn.append(0)
        return len(self.pre_count) - 1

    def fits(self, u: int, c: int, leaving: int | None = None) -> bool:
        """Would ``c`` stay within capacity after gaining ``u`` (and losing ``leaving``)?"""
        pres = self.pre_count[c]
        fin = self.fanin[u]
        outputs = self.outputs[c] + (1 if fin else 0)
        nsyn = self.nsyn[c] + len(fin)
        drop = Counter()
        if leaving is not None:
            lv = self.fanin[leaving]
            outputs -= 1 if lv else 0
            nsyn -= len(lv)
            drop.update(lv)
        if outputs > self.cols or nsyn > self.rows * self.cols:
            return False
        gained = Counter(fin)
        inputs = sum(1 for p, k in pres.items() if k - drop[p] + gained[p] > 0)
        inputs += sum(1 for p in gained if p not in pres)
        return inputs <= self.rows

    def assign(self, u: int, c: int) -> None:
        old = self.label[u]
        fin = self.fanin[u]
        if old >= 0:
            self.pre_count[old].subtract(fin)
            self.pre_count[old] += Counter()  # drop non-positive entries
            self.outputs[old] -= 1 if fin else 0
            self.nsyn[old] -= len(fin)
            self.members[old].discard(u)
        self.members[c].add(u)
        self.pre_count[c].update(fin)
        self.outputs[c] += 1 if fin else 0
        self.nsyn[c] += len(fin)
        self.label[u] = c

    def weight_to(self, u: int, c: int) -> int:
        lab = self.label
        return sum(w for v, w in self.adj[u].items() if lab[v] == c)

    def cut_weight(self) -> int:
        lab = self.label
        return sum(w for u in range(self.n) for v, w in self.adj[u].items() if lab[u] != lab[v]) // 2


def _greedy_growth(lab: _Labels, order: list[int]) -> None:
    """Grow clusters from seeds in ``order``, absorbing the heaviest-connected neighbour.

    Neurons without any synapse take no crossbar resources and join cluster 0.
    """
    isolated = [u for u in range(lab.n) if not lab.adj[u]]
    for seed in order:
        if lab.label[seed] >= 0 or not lab.adj[seed]:
            continue
        c = lab.new_cluster()
        lab.assign(seed, c)
        gain: dict[int, int] = defaultdict(int)
        for v, w in lab.adj[seed].items():
            if lab.label[v] < 0:
                gain[v] += w
        while gain:
            # heaviest connection first, lowest neuron id on ties
            for v in sorted(gain, key=lambda x: (-gain[x], x)):
                if lab.fits(v, c):
                    break
            else:
                break
            del gain[v]
            lab.assign(v, c)
            for x, w in lab.adj[v].items():
                if lab.label[x] < 0:
                    gain[x] += w
    if isolated and not lab.members:
        lab.new_cluster()
    for u in isolated:
        lab.assign(u, 0)


def _sequential(lab: _Labels) -> None:
    c = lab.new_cluster()
    for u in range(lab.n):
        if not lab.fits(u, c):
            c = lab.new_cluster()
        lab.assign(u, c)


def _refine(lab: _Labels, max_passes: int = 20, swap_candidates: int = 8) -> None:
    """Best-first passes of single moves and pairwise swaps with positive cut gain.

    Each pass ranks every feasible move and swap by gain, then applies them
    in that order, re-checking gain and capacity against the current
    labelling; a neuron moves at most once per pass.
    """
    for _ in range(max_passes):
        cands = []
        for u in range(lab.n):
            cu = lab.label[u]
            own = lab.weight_to(u, cu)
            for c in sorted({lab.label[v] for v in lab.adj[u]} - {cu}):
                g = lab.weight_to(u, c) - own
                if g <= 0:
                    continue
                if lab.fits(u, c):
                    cands.append((-g, u, -1, c))
                    continue
                scored = sorted(
                    ((lab.weight_to(v, cu) - lab.weight_to(v, c), v) for v in lab.members[c]),
                    key=lambda t: (-t[0], t[1]),
                )[:swap_candidates]
                for gv, v in scored:
                    total = g + gv - 2 * lab.adj[u].get(v, 0)
                    if total > 0 and lab.fits(u, c, leaving=v) and lab.fits(v, cu, leaving=u):
                        cands.append((-total, u, v, c))
        cands.sort()
        moved: set[int] = set()
        improved = False
        for _, u, v, c in cands:
            if u in moved or v in moved:
                continue
            cu = lab.label[u]
            if cu == c:
                continue
            g = lab.weight_to(u, c) - lab.weight_to(u, cu)
            if v < 0:
                if g > 0 and lab.fits(u, c):
                    lab.assign(u, c)
                    moved.add(u)
                    improved = True
                continue
            if lab.label[v] != c:
                continue
            total = g + lab.weight_to(v, cu) - lab.weight_to(v, c) - 2 * lab.adj[u].get(v, 0)
            if total > 0 and lab.fits(u, c, leaving=v) and lab.fits(v, cu, leaving=u):
                lab.assign(u, c)
                lab.assign(v, cu)
                moved.update((u, v))
                improved = True
        if not improved:
            break


def _build(net: SnnNetwork, lab: _Labels) -> ClusterSet:
    # renumber non-empty clusters by their lowest neuron id
    first: dict[int, int] = {}
    for u in range(lab.n):
        first.setdefault(lab.label[u], u)
    order = sorted(first, key=first.get)
    remap = {old: new for new, old in enumerate(order)}
    labels = tuple(remap[lab.label[u]] for u in range(lab.n))
    members: list[list[int]] = [[] for _ in order]
    resident: list[list[Synapse]] = [[] for _ in order]
    for u in range(lab.n):
        members[labels[u]].append(u)
    cut = []
    for s in net.synapses:
        resident[labels[s.post]].append(s)
        if labels[s.pre] != labels[s.post]:
            cut.append(s)
    clusters = tuple(Cluster(i, tuple(m), tuple(r)) for i, (m, r) in enumerate(zip(members, resident)))
    return ClusterSet(clusters, tuple(cut), labels, lab.rows, lab.cols)


def _check_neurons(net: SnnNetwork, rows: int, cols: int) -> None:
    if rows < 1 or cols < 1:
        raise ValueError("crossbar dimensions must be >= 1")
    fan = net.fan_in()
    if len(fan) and fan.max() > rows:
        u = int(np.argmax(fan))
        raise UnsplittableNeuronError(
            f"neuron {u} has fan-in {fan[u]} > {rows} crossbar rows; neuron splitting is not supported"
        )


def naive_partition(net: SnnNetwork, rows: int, cols: int) -> ClusterSet:
    """Fill crossbars in neuron-id order until each is full."""
    _check_neurons(net, rows, cols)
    lab = _Labels(net, rows, cols)
    _sequential(lab)
    return _build(net, lab)


def partition(net: SnnNetwork, rows: int, cols: int, seed: int = 0, restarts: int = 2) -> ClusterSet:
    """Split ``net`` into crossbar-sized clusters with a low spike-weighted cut.

    Candidates: greedy growth from the lowest neuron id, the sequential
    split, and ``restarts`` growths from seeded random orders. Each is
    refined and the lowest cut wins (earliest candidate on ties).
    """
    _check_neurons(net, rows, cols)
    rng = np.random.default_rng(seed)
    starts: list[list[int] | None] = [list(range(net.neuron_count)), None]
    starts += [list(map(int, rng.permutation(net.neuron_count))) for _ in range(restarts)]
    best: _Labels | None = None
    best_cut = None
    for order in starts:
        lab = _Labels(net, rows, cols)
        if order is None:
            _sequential(lab)
        else:
            _greedy_growth(lab, order)
        _refine(lab)
        cut = lab.cut_weight()
        if best_cut is None or cut < best_cut:
            best, best_cut = lab, cut
    if net.neuron_count == 0:
        return ClusterSet((), (), (), rows, cols)
    return _build(net, best)


__all__ = [
    "Cluster",
    "ClusterSet",
    "Footprint",
    "UnsplittableNeuronError",
    "cut_spikes",
    "naive_partition",
    "partition",
    "save_cluster_set",
    "total_spikes",
]
