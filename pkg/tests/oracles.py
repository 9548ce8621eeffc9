"""Brute-force references, deliberately independent of the package internals."""
import itertools

import numpy as np


def fits(neurons, synapses, rows, cols):
    incoming = [s for s in synapses if s.post in neurons]
    pres = {s.pre for s in incoming}
    posts = {s.post for s in incoming}
    return len(pres) <= rows and len(posts) <= cols and len(incoming) <= rows * cols


def min_cut_two_way(net, rows, cols):
    """Minimum spike cut over every capacity-feasible split into at most two clusters."""
    n = net.neuron_count
    best = None
    for mask in range(2 ** (n - 1)):
        a = {u for u in range(n) if mask >> u & 1}
        b = set(range(n)) - a
        if not (fits(a, net.synapses, rows, cols) and fits(b, net.synapses, rows, cols)):
            continue
        cut = sum(s.spikes for s in net.synapses if (s.pre in a) != (s.post in a))
        best = cut if best is None else min(best, cut)
    return best


def best_assignment(evaluate, n_clusters, tiles):
    """Exhaustive minimum of ``evaluate`` over all cluster-to-tile vectors."""
    vals = [evaluate(a) for a in itertools.product(range(tiles), repeat=n_clusters)]
    return min(vals)


def row_distinct_injections(shape, n):
    """All injective synapse->cell maps in which every synapse gets its own row."""
    rows, cols = shape
    cells = np.array(list(itertools.permutations(range(rows * cols), n)), dtype=int).reshape(-1, n)
    r = cells // cols
    ok = np.array([len(set(x)) == n for x in r]) if n else np.ones(len(cells), bool)
    return cells[ok]


def max_min_lifetime(endurance, spikes):
    perms = row_distinct_injections(endurance.shape, len(spikes))
    e = endurance.ravel()[perms]
    return float((e / np.asarray(spikes, float)).min(axis=1).max())


def min_weighted_latency(latency, spikes):
    perms = row_distinct_injections(latency.shape, len(spikes))
    l = latency.ravel()[perms]
    return float((l * np.asarray(spikes, float)).sum(axis=1).min())
