import numpy as np
import pytest

from pcmtradeoff.device import CrossbarGeometry
from pcmtradeoff.hardware import HardwareModel
from pcmtradeoff.workload import SnnNetwork, Synapse


@pytest.fixture
def fig1a():
    """Two inputs driving one output neuron."""
    return SnnNetwork(3, (Synapse(0, 2, 0.5, 5), Synapse(1, 2, 0.8, 3)))


@pytest.fixture
def small_hw():
    return HardwareModel(tiles=4, geometry=CrossbarGeometry(rows=4, cols=4))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def two_cliques(size=4, spikes=7):
    syns = []
    for base in (0, size):
        for i in range(size):
            for j in range(size):
                if i != j:
                    syns.append(Synapse(base + i, base + j, 1.0, spikes))
    return SnnNetwork(2 * size, tuple(syns))


def small_cluster_set(seed, rows=4, cols=4, max_clusters=4):
    """First seeded reservoir/feedforward net that partitions into 2..max_clusters clusters."""
    from pcmtradeoff.partition import partition
    from pcmtradeoff.workload import TopologySpec, generate_synthetic

    k = 0
    while True:
        s = seed * 1000 + k
        kind = ("feedforward", (4, 4, 4)) if s % 2 else ("recurrent-reservoir", (8,))
        net = generate_synthetic(TopologySpec(kind[0], kind[1], density=0.35, seed=s))
        k += 1
        if len(net.synapses) == 0 or net.fan_in().max() > rows:
            continue
        cs = partition(net, rows, cols, seed=s)
        if 2 <= len(cs) <= max_clusters:
            return net, cs


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
