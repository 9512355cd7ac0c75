"""
Complexity measures of an emergent hierarchy.

- path entropy: spread of delta CP along anchor-to-top paths of the hierarchy
- row negentropy: how differentiated the scales within each level are
- emergent complexity: the product of both

Usage:
    from causalscales.metrics import complexity
    report = complexity(result.hierarchy, MetricsConfig(sample_size=100, seed=7))
"""

import logging
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.stats import entropy

from .config import MetricsConfig
from .errors import NoPath, UndefinedDistribution
from .lattice import paths_between

log = logging.getLogger(__name__)


@dataclass
class PathDistribution:
    levels: list
    raw: list
    p: list = None

    @property
    def defined(self):
        return self.p is not None


@dataclass
class MetricsReport:
    s_path: float
    n_paths_used: int
    s_row: float
    row_negentropy: float
    complexity: float
    micro_dim: int
    n_emergent_nodes: int = 0
    s_path_stderr: float = 0.0
    centroid: float = 0.0
    shape: str = "flat"
    level_profile: list = field(default_factory=list)

    def as_dict(self):
        return asdict(self)


# ============================================================================
# PATH ENTROPY
# ============================================================================

def path_distribution(h, path):
    """
    Normalized delta CP along one anchor-to-top path.

    The anchor starts every path but carries no mass; only scales with a
    finer scale below them contribute.
    """
    raw = [0.0 if node == h.anchor else max(0.0, float(h.delta[node])) for node in path]
    total = sum(raw)
    p = [x / total for x in raw] if total > 0 else None
    return PathDistribution(levels=[node.n_blocks for node in path], raw=raw, p=p)


def path_entropy(d):
    """Shannon entropy (bits) of the normalized delta CP along one path."""
    if not d.defined:
        raise UndefinedDistribution("path carries no positive delta CP")
    return float(entropy(np.asarray(d.p), base=2))


def _path_counters(h):
    counters = [paths_between(h.diagram, h.anchor, top) for top in h.tops]
    counters = [c for c in counters if c.count > 0]
    if not counters:
        raise NoPath("hierarchy has no anchor-to-top path")
    return counters


def hierarchy_paths(h, sample_size, seed=None):
    """
    Every anchor-to-top path when there are at most sample_size of them,
    otherwise sample_size paths drawn uniformly.
    """
    counters = _path_counters(h)
    total = sum(c.count for c in counters)
    if total <= sample_size:
        return [path for c in counters for path in c.enumerate()], True

    rng = np.random.default_rng(seed)
    weights = np.array([c.count for c in counters], dtype=float)
    weights /= weights.sum()
    picks = rng.choice(len(counters), size=sample_size, p=weights)
    return [counters[k].sample(1, rng)[0] for k in picks], False


def _path_entropies(h, sample_size, seed, zero_paths):
    paths, exhaustive = hierarchy_paths(h, sample_size, seed)
    values = []
    for path in paths:
        d = path_distribution(h, path)
        if d.defined:
            values.append(path_entropy(d))
        elif zero_paths == "count":
            values.append(0.0)
    log.debug("path entropies over %d paths (%s)", len(paths), "exhaustive" if exhaustive else "sampled")
    return values


def s_path(h, sample_size=100, seed=None, aggregate="mean", zero_paths="count"):
    values = _path_entropies(h, sample_size, seed, zero_paths)
    if not values:
        return 0.0
    return float(np.sum(values) if aggregate == "sum" else np.mean(values))


# ============================================================================
# ROW ENTROPY
# ============================================================================

def row_entropies(h):
    """Within-level entropy of normalized delta CP for levels 1..L."""
    out = np.zeros(h.micro_dim)
    for level, entries in h.per_level.items():
        values = np.array([d for _, d in entries if d > 0])
        if len(values) > 1:
            out[level - 1] = entropy(values / values.sum(), base=2)
    return out


def row_negentropy(h):
    """
    Returns:
        tuple: (S_row, max(0, log2 L - S_row)); empty levels count as zero entropy

    A level can hold more than L members, so S_row can exceed log2 L on dense
    hierarchies; the negentropy is floored at 0 there.
    """
    s_row = float(row_entropies(h).sum() / h.micro_dim)
    return s_row, max(0.0, float(np.log2(h.micro_dim)) - s_row)


# ============================================================================
# REPORT
# ============================================================================

def complexity(h, cfg=None):
    cfg = cfg or MetricsConfig()
    values = _path_entropies(h, cfg.sample_size, cfg.seed, cfg.zero_paths)
    if values:
        path_score = float(np.sum(values) if cfg.path_aggregate == "sum" else np.mean(values))
        stderr = float(np.std(values, ddof=1) / np.sqrt(len(values))) if len(values) > 1 else 0.0
    else:
        path_score, stderr = 0.0, 0.0
    s_row, negentropy = row_negentropy(h)
    return MetricsReport(
        s_path=path_score,
        n_paths_used=len(values),
        s_row=s_row,
        row_negentropy=negentropy,
        complexity=path_score * negentropy,
        micro_dim=h.micro_dim,
        n_emergent_nodes=len(h.members),
        s_path_stderr=stderr,
        centroid=h.centroid(),
        shape=h.shape(),
        level_profile=[float(x) for x in h.level_profile()],
    )
