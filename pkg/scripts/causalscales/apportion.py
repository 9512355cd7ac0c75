"""
Causal apportioning over the partition lattice.

Every scale gets its CP; its delta CP is what it adds beyond the best strictly
finer scale. Scales with delta CP above epsilon form the emergent hierarchy,
which always keeps the microscale as the anchor its paths start from.

Usage:
    from causalscales.apportion import analyze
    result = analyze(t, AnalysisConfig())
    result.hierarchy.members
"""

import logging
import time
from dataclasses import dataclass, field
from multiprocessing import Pool

import numpy as np

from .config import AnalysisConfig
from .errors import CapExceeded, InvalidPartition, MissingCp
from .lattice import Partition, build_hasse, enumerate_partitions
from .tpm import coarse_grain, cp

log = logging.getLogger(__name__)

TOP_HEAVY_AT = 0.6
BOTTOM_HEAVY_AT = 0.4


@dataclass
class EmergentHierarchy:
    """Scales with positive delta CP, plus the microscale anchor."""
    diagram: object
    delta: dict
    micro_dim: int
    anchor: Partition
    members: list = field(default_factory=list)

    @property
    def per_level(self):
        levels = {}
        for p in sorted(self.delta):
            levels.setdefault(p.n_blocks, []).append((p, self.delta[p]))
        return levels

    @property
    def tops(self):
        """Maximal nodes; every anchor-to-top path ends at one of them."""
        graph = self.diagram.graph
        return sorted(p for p in graph.nodes if graph.out_degree(p) == 0)

    def level_profile(self):
        """Mean member delta CP for levels 1..L (0 where a level is empty)."""
        profile = np.zeros(self.micro_dim)
        for level, entries in self.per_level.items():
            values = [d for p, d in entries if p != self.anchor]
            if values:
                profile[level - 1] = float(np.mean(values))
        return profile

    def centroid(self):
        profile = self.level_profile()
        if profile.sum() <= 0:
            return float(self.micro_dim)
        levels = np.arange(1, self.micro_dim + 1)
        return float(np.dot(levels, profile) / profile.sum())

    def shape(self):
        if not self.members:
            return "flat"
        if len(self.members) == 1:
            return "balloon"
        if self.micro_dim < 2:
            return "distributed"
        height = (self.micro_dim - self.centroid()) / (self.micro_dim - 1)
        if height >= TOP_HEAVY_AT:
            return "top-heavy"
        if height <= BOTTOM_HEAVY_AT:
            return "bottom-heavy"
        return "distributed"


@dataclass
class AnalysisResult:
    diagram: object
    cps: dict
    delta: dict
    hierarchy: EmergentHierarchy
    method: str = "exact"


# ============================================================================
# CP ON EVERY SCALE
# ============================================================================

def _cp_of(args):
    t, p = args
    return cp(coarse_grain(t, p))


def compute_cp_all(t, nodes, threads=1):
    """
    CP of the coarse-grained TPM for every partition in nodes.

    Args:
        t: microscale Tpm
        nodes: partitions of t's states
        threads: worker processes; results do not depend on it

    Returns:
        dict: Partition -> CP
    """
    nodes = sorted(set(nodes))
    if threads > 1 and len(nodes) > 1:
        with Pool(threads) as pool:
            values = pool.map(_cp_of, [(t, p) for p in nodes], chunksize=max(1, len(nodes) // (4 * threads)))
    else:
        values = [_cp_of((t, p)) for p in nodes]
    return dict(zip(nodes, values))


# ============================================================================
# DELTA CP
# ============================================================================

def delta_cp(h, cps):
    """
    CP minus the best CP among strictly finer nodes of the diagram.

    The finest nodes have no ancestors and keep their CP (baseline 0).
    Negative values are kept.
    """
    for p in h.graph.nodes:
        if p not in cps:
            raise MissingCp(p)

    best_below = {}
    # finer nodes first, so each baseline is final before it is propagated
    for p in sorted(h.graph.nodes, key=lambda q: -q.n_blocks):
        below = best_below.get(p)
        reach = cps[p] if below is None else max(cps[p], below)
        for q in h.graph.successors(p):
            if q not in best_below or reach > best_below[q]:
                best_below[q] = reach

    return {p: cps[p] - best_below.get(p, 0.0) for p in h.graph.nodes}


def emergent_set(delta, cfg, micro_dim=None):
    """
    Members are the scales with delta CP above epsilon; the microscale is
    always kept as anchor.
    """
    if not delta and micro_dim is None:
        raise InvalidPartition("cannot place an anchor without any scales")
    micro_dim = micro_dim or next(iter(delta)).n
    anchor = Partition.finest(micro_dim)
    members = sorted(p for p, d in delta.items() if d > cfg.epsilon and p != anchor)
    kept = members + [anchor]
    sub = {p: delta.get(p, 0.0) for p in kept}
    return EmergentHierarchy(
        diagram=build_hasse(kept),
        delta=sub,
        micro_dim=micro_dim,
        anchor=anchor,
        members=members,
    )


def analyze(t, cfg=None, threads=1):
    """Exhaustive apportioning over the full lattice of t."""
    cfg = cfg or AnalysisConfig()
    if t.n > cfg.max_states:
        raise CapExceeded(t.n, cfg.max_states)

    started = time.time()
    nodes = list(enumerate_partitions(t.n, cap=cfg.max_states))
    h = build_hasse(nodes)
    cps = compute_cp_all(t, nodes, threads=threads)
    delta = delta_cp(h, cps)
    hierarchy = emergent_set(delta, cfg, micro_dim=t.n)
    log.info(
        "exact analysis: %d scales, %d emergent, %.2fs",
        len(nodes), len(hierarchy.members), time.time() - started,
    )
    return AnalysisResult(diagram=h, cps=cps, delta=delta, hierarchy=hierarchy, method="exact")
