"""
Configuration for the causal scales toolkit.

Defaults live in the CONFIGURATION block below; the dataclasses bundle them
per stage and validate on construction. Every dataclass is frozen so a
config can be shared across worker processes and dumped into run manifests.

Usage:
    from causalscales.config import AnalysisConfig, GreedyConfig
"""

import os
from dataclasses import dataclass, field, asdict

from .errors import InvalidConfig, InvalidSpec

# ============================================================================
# CONFIGURATION
# ============================================================================

EPSILON = 1e-9            # threshold for a "positive" delta CP
ROW_SUM_TOL = 1e-9        # accepted deviation of an input row sum from 1
EQ_TOL = 1e-12            # internal equality checks
ZERO_PROB = 1e-15         # probabilities below this count as exact zeros

ENUMERATION_CAP = 12      # Bell(12) ~ 4.2M partitions
ANALYZE_MAX_STATES = 10   # default --max-states of the analyze command
BELL_EXACT_MAX = 25

DEFAULT_N_PATHS = 3
DEFAULT_SAMPLE_SIZE = 100

ALPHA_GRID = (0.5, 1.0, 1.5, 2.0, 2.5)
SWEEP_REPLICATES = 5
SWEEP_N_NODES = 40
SWEEP_M = 1

PINPOINT_STAY = 0.2
PINPOINT_STEP = 0.8

DOT_MIN_WIDTH = 0.2       # inches, node with the smallest delta CP
DOT_MAX_WIDTH = 1.5       # inches, node with the largest delta CP

SCHEMA_ID = "causalscales/bundle/v1"
TOOL_VERSION = "1.0.0"

THREADS_ENV = "CAUSALSCALES_THREADS"
LOG_LEVEL_ENV = "CAUSALSCALES_LOG_LEVEL"


def threads_from_env(default=1):
    """
    Worker count for parallel stages.

    Reads CAUSALSCALES_THREADS; values below 1 or unparsable values are
    rejected rather than silently ignored.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return default
    try:
        threads = int(raw)
    except ValueError:
        raise InvalidConfig(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if threads < 1:
        raise InvalidConfig(f"{THREADS_ENV} must be >= 1, got {threads}")
    return threads


# ============================================================================
# STAGE CONFIGS
# ============================================================================

@dataclass(frozen=True)
class AnalysisConfig:
    epsilon: float = EPSILON
    max_states: int = ENUMERATION_CAP
    # uniform intervention prior at every scale, entropies in bits
    intervention_prior: str = field(default="uniform", init=False)
    log_base: int = field(default=2, init=False)

    def __post_init__(self):
        if not (0 < self.epsilon < 1e-3):
            raise InvalidConfig(f"epsilon must lie in (0, 1e-3), got {self.epsilon}")
        if self.max_states < 1:
            raise InvalidConfig(f"max_states must be >= 1, got {self.max_states}")


@dataclass(frozen=True)
class GreedyConfig:
    n_paths: int = DEFAULT_N_PATHS
    seed: int = 0
    tie_break: str = "canonical"   # or "random"

    def __post_init__(self):
        if self.n_paths < 1:
            raise InvalidConfig(f"n_paths must be >= 1, got {self.n_paths}")
        if self.tie_break not in ("canonical", "random"):
            raise InvalidConfig(f"unknown tie_break {self.tie_break!r}")


@dataclass(frozen=True)
class MetricsConfig:
    sample_size: int = DEFAULT_SAMPLE_SIZE
    seed: int = 0
    path_aggregate: str = "mean"   # or "sum"
    zero_paths: str = "count"      # or "skip"

    def __post_init__(self):
        if self.sample_size < 1:
            raise InvalidConfig(f"sample_size must be >= 1, got {self.sample_size}")
        if self.path_aggregate not in ("mean", "sum"):
            raise InvalidConfig(f"unknown path_aggregate {self.path_aggregate!r}")
        if self.zero_paths not in ("count", "skip"):
            raise InvalidConfig(f"unknown zero_paths {self.zero_paths!r}")


@dataclass(frozen=True)
class GrowthConfig:
    n_nodes: int
    m: int = SWEEP_M
    alpha: float = 1.0
    seed: int = 0
    orientation: str = "new_to_old"   # or "bidirectional"

    def __post_init__(self):
        if self.n_nodes < 2:
            raise InvalidConfig(f"n_nodes must be >= 2, got {self.n_nodes}")
        if not (1 <= self.m < self.n_nodes):
            raise InvalidConfig(f"m must satisfy 1 <= m < n_nodes, got m={self.m}, n_nodes={self.n_nodes}")
        if self.alpha < 0:
            raise InvalidConfig(f"alpha must be >= 0, got {self.alpha}")
        if self.orientation not in ("bidirectional", "new_to_old"):
            raise InvalidConfig(f"unknown orientation {self.orientation!r}")


@dataclass(frozen=True)
class PinpointSpec:
    """
    Disjoint diffusion cycles plus deterministic singleton states.

    A cycle of length 1 is a fixed point. Singletons are fixed points, or
    swapped in consecutive pairs when permute_singletons is set. The designed
    macroscale has one block per cycle and per singleton.
    """
    cycle_sizes: tuple
    n_singletons: int = 0
    stay_prob: float = PINPOINT_STAY
    step_prob: float = PINPOINT_STEP
    permute_singletons: bool = False

    def __post_init__(self):
        object.__setattr__(self, "cycle_sizes", tuple(int(c) for c in self.cycle_sizes))
        if not self.cycle_sizes and self.n_singletons == 0:
            raise InvalidSpec("pinpoint system needs at least one cycle or singleton")
        if any(c < 1 for c in self.cycle_sizes):
            raise InvalidSpec(f"cycle sizes must be >= 1, got {self.cycle_sizes}")
        if self.n_singletons < 0:
            raise InvalidSpec(f"n_singletons must be >= 0, got {self.n_singletons}")
        if self.stay_prob < 0 or self.step_prob < 0:
            raise InvalidSpec("stay and step probabilities must be non-negative")
        if abs(self.stay_prob + self.step_prob - 1.0) > ROW_SUM_TOL:
            raise InvalidSpec(
                f"stay_prob + step_prob must equal 1, got {self.stay_prob} + {self.step_prob}"
            )
        if self.permute_singletons and self.n_singletons % 2:
            raise InvalidSpec("permuted singletons are swapped in pairs; n_singletons must be even")

    @classmethod
    def single_cycle(cls, n_states, target_level, **kwargs):
        """One diffusion cycle holding n_states - (target_level - 1) states."""
        if not (1 <= target_level <= n_states):
            raise InvalidSpec(f"target_level must lie in [1, {n_states}], got {target_level}")
        return cls(cycle_sizes=(n_states - target_level + 1,), n_singletons=target_level - 1, **kwargs)

    @property
    def n_states(self):
        return sum(self.cycle_sizes) + self.n_singletons

    @property
    def target_level(self):
        return len(self.cycle_sizes) + self.n_singletons

    def designed_assignment(self):
        assignment = []
        for block, size in enumerate(self.cycle_sizes):
            assignment.extend([block] * size)
        assignment.extend(range(len(self.cycle_sizes), self.target_level))
        return assignment


@dataclass(frozen=True)
class SweepConfig:
    alpha_grid: tuple = ALPHA_GRID
    replicates: int = SWEEP_REPLICATES
    n_nodes: int = SWEEP_N_NODES
    m: int = SWEEP_M
    seed: int = 0
    n_paths: int = DEFAULT_N_PATHS
    sample_size: int = DEFAULT_SAMPLE_SIZE
    seeding: str = "paired"   # same replicate seeds at every alpha, or "independent"
    orientation: str = "new_to_old"
    epsilon: float = EPSILON

    def __post_init__(self):
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        if not self.alpha_grid:
            raise InvalidConfig("alpha grid is empty")
        if self.replicates < 1:
            raise InvalidConfig(f"replicates must be >= 1, got {self.replicates}")
        if self.seeding not in ("paired", "independent"):
            raise InvalidConfig(f"unknown seeding {self.seeding!r}")

    def as_dict(self):
        return asdict(self)
