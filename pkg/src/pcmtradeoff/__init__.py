"""Performance/endurance trade-offs of PCM crossbars under SNN mapping."""
from .archive import SolutionArchive, pareto_front
from .device import (
    CellCoordinate,
    CellProfile,
    CrossbarGeometry,
    DevicePhysicsParams,
    UnprogrammableCellError,
    cell_endurance,
    cell_profile,
    crystalline_fraction,
    current_map,
    path_length,
    profile_grid,
    programming_current,
    programming_latency,
    self_heating_temperature,
)
from .explorer import explore, report
from .hardware import HardwareModel, load_hardware
from .mapper import run_pso
from .metrics import MappingMetrics, effective_lifetime, energy, execution_time
from .partition import ClusterSet, cut_spikes, partition
from .placement import Mapping, place_synapses
from .pso import PsoConfig, decode, pso_step, regroup
from .workload import SnnNetwork, Synapse, TopologySpec, generate_synthetic, load_workload, total_spikes

__version__ = "0.1.0"
