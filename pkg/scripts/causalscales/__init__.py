"""
causalscales: causal apportioning across the scales of Markov systems.

Usage:
    import sys; sys.path.insert(0, "scripts")
    from causalscales import validate_tpm, analyze, complexity
"""

from .config import (
    AnalysisConfig,
    GreedyConfig,
    GrowthConfig,
    MetricsConfig,
    PinpointSpec,
    SweepConfig,
    TOOL_VERSION,
)
from .errors import CausalScalesError, CapExceeded, PartialSweepFailure
from .tpm import (
    Tpm,
    causal_profile,
    coarse_grain,
    cp,
    degeneracy,
    determinism,
    determinism_of_cause,
    merge_blocks,
    validate_tpm,
)
from .lattice import (
    HasseDiagram,
    Partition,
    ancestors,
    bell,
    build_hasse,
    enumerate_partitions,
    paths_between,
    refines,
)
from .apportion import AnalysisResult, EmergentHierarchy, analyze, compute_cp_all, delta_cp, emergent_set
from .greedy import branching_greedy, greedy_completion
from .metrics import MetricsReport, complexity, path_entropy, row_negentropy, s_path
from .generators import designed_partition, garden_examples, grow_pa_tpm, pinpoint_tpm

__version__ = TOOL_VERSION
