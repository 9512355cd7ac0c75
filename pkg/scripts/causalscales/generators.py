"""
TPM families with engineered emergence profiles.

- grow_pa_tpm: preferential-attachment growth with attachment ~ degree**alpha,
  turned into transitions by row-normalizing the adjacency matrix
- pinpoint_tpm: diffusion cycles and deterministic states, block-diagonal, so
  that one designed macroscale carries the causal workings
- garden_examples: small named systems with distinct hierarchy shapes
"""

import logging

import networkx as nx
import numpy as np

from .config import GrowthConfig, PinpointSpec
from .lattice import Partition
from .tpm import validate_tpm

log = logging.getLogger(__name__)


# ============================================================================
# PREFERENTIAL ATTACHMENT
# ============================================================================

def grow_pa_graph(cfg):
    """
    Grow a network node by node from two linked seed nodes.

    Each new node attaches min(m, existing) edges to distinct existing nodes,
    chosen with probability proportional to total degree ** alpha.

    With orientation "new_to_old" (the default) a new node's edges point at
    the older nodes it joined, so transitions run into the existing network;
    "bidirectional" makes every edge traversable both ways.
    """
    rng = np.random.default_rng(cfg.seed)
    directed = cfg.orientation == "new_to_old"
    graph = nx.DiGraph() if directed else nx.Graph()
    graph.add_nodes_from(range(cfg.n_nodes))
    graph.add_edge(0, 1)
    if directed:
        graph.add_edge(1, 0)

    degree = np.zeros(cfg.n_nodes)
    degree[[0, 1]] = 1
    for new in range(2, cfg.n_nodes):
        weights = degree[:new] ** cfg.alpha
        targets = rng.choice(new, size=min(cfg.m, new), replace=False, p=weights / weights.sum())
        for target in targets:
            graph.add_edge(new, int(target))
        degree[targets] += 1
        degree[new] += len(targets)
    return graph


def grow_pa_tpm(cfg):
    """
    Args:
        cfg: GrowthConfig

    Returns:
        Tpm: every node splits its transitions uniformly over its out-neighbors.
        The linked seed pair and m >= 1 leave no node without one.
    """
    graph = grow_pa_graph(cfg)
    adjacency = nx.to_numpy_array(graph, nodelist=range(cfg.n_nodes), weight=None)
    log.debug("grown %d-node network with %d edges", cfg.n_nodes, graph.number_of_edges())
    return validate_tpm(adjacency / adjacency.sum(axis=1, keepdims=True))


# ============================================================================
# PINPOINT EMERGENCE
# ============================================================================

def pinpoint_tpm(spec):
    """Block-diagonal diffusion cycles followed by deterministic singletons."""
    rows = np.zeros((spec.n_states, spec.n_states))
    offset = 0
    for size in spec.cycle_sizes:
        for s in range(size):
            state = offset + s
            rows[state, state] += spec.stay_prob
            rows[state, offset + (s + 1) % size] += spec.step_prob
        offset += size

    for s in range(spec.n_singletons):
        state = offset + s
        if spec.permute_singletons:
            partner = state + 1 if s % 2 == 0 else state - 1
            rows[state, partner] = 1.0
        else:
            rows[state, state] = 1.0
    return validate_tpm(rows)


def designed_partition(spec):
    """The engineered macroscale: one block per cycle and per singleton."""
    return Partition(tuple(spec.designed_assignment()))


# ============================================================================
# GARDEN
# ============================================================================

def _deterministic(successors):
    rows = np.zeros((len(successors), len(successors)))
    rows[np.arange(len(successors)), successors] = 1.0
    return rows


def _equivalence_classes():
    rows = np.zeros((8, 8))
    rows[:4, :4] = 0.25
    rows[4:, 4:] = 0.25
    return rows


def _mesoscale():
    # four pairs, each pair sends uniformly into the next pair
    rows = np.zeros((8, 8))
    for pair in range(4):
        nxt = (pair + 1) % 4
        rows[2 * pair:2 * pair + 2, 2 * nxt:2 * nxt + 2] = 0.5
    return rows


def _modules():
    rows = np.zeros((8, 8))
    rows[0, 3] = rows[1, 4] = rows[2, 5] = 1.0
    for s, nxt in ((3, 4), (4, 5), (5, 3)):
        rows[s, s] = 0.1
        rows[s, nxt] = 0.6
        rows[s, 6] = 0.3
    rows[6, 7] = rows[7, 6] = 1.0
    return rows


def _source_cycle_sinks():
    return np.array([
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.2, 0.3, 0.0, 0.5],
        [0.0, 0.5, 0.0, 0.2, 0.3],
        [0.0, 0.0, 0.0, 0.3, 0.7],
        [0.0, 0.0, 0.0, 0.3, 0.7],
    ])


def _noisy_pairs():
    rows = np.zeros((6, 6))
    for pair in range(3):
        nxt = (pair + 1) % 3
        other = (pair + 2) % 3
        for k, state in enumerate((2 * pair, 2 * pair + 1)):
            rows[state, 2 * nxt + k] = 0.6
            rows[state, 2 * nxt + 1 - k] = 0.3
            rows[state, 2 * other:2 * other + 2] = 0.05
    return rows


GARDEN = {
    "equivalence": (
        _equivalence_classes,
        "two classes of four states; every state jumps uniformly within its class",
    ),
    "two-cycles": (
        lambda: pinpoint_tpm(PinpointSpec(cycle_sizes=(4, 4))).rows,
        "two diffusion 4-cycles, stay 0.2 / step 0.8",
    ),
    "mesoscale": (
        _mesoscale,
        "four state pairs in a 4-cycle of pairs; each pair sends uniformly into the next",
    ),
    "degenerate": (
        lambda: _deterministic([1, 2, 3, 3, 3, 6, 7, 7]),
        "deterministic successors 1,2,3,3,3,6,7,7 (two absorbing chains)",
    ),
    "modules": (
        _modules,
        "three sources feed a noisy 3-cycle (stay 0.1 / step 0.6) leaking 0.3 into two alternating sinks",
    ),
    "fig3": (
        _source_cycle_sinks,
        "source 0 enters a leaky 2-state cycle {1,2} that drains into two sinks {3,4}",
    ),
    "noisy-pairs": (
        _noisy_pairs,
        "three state pairs mapped cyclically: 0.6 to the matching partner, 0.3 to the other, 0.05 to each state of the remaining pair",
    ),
    "uniform-4": (
        lambda: np.full((4, 4), 0.25),
        "four states, every transition 0.25",
    ),
    "pinpoint-7": (
        lambda: pinpoint_tpm(PinpointSpec.single_cycle(7, 3)).rows,
        "diffusion 5-cycle (stay 0.2 / step 0.8) plus two fixed points; designed scale at level 3",
    ),
}

GARDEN_LABELS = {
    "fig3": ["source", "cycle_a", "cycle_b", "sink_a", "sink_b"],
}


def garden_examples():
    """
    Named example systems, in a stable order.

    Returns:
        dict: name -> Tpm
    """
    return {
        name: validate_tpm(build(), labels=GARDEN_LABELS.get(name))
        for name, (build, _) in GARDEN.items()
    }


def garden_notes():
    return {name: note for name, (_, note) in GARDEN.items()}
