"""
Set partitions of system states and the refinement lattice over them.

Partitions are stored as restricted growth strings: assignment[i] is the block
of state i and block ids appear in increasing order of first occurrence, so
every partition has exactly one representation. Diagrams are networkx DiGraphs
with edges pointing from the finer partition to the coarser one, which makes
networkx "ancestors" the strictly finer scales and "descendants" the strictly
coarser ones.

Usage:
    from causalscales.lattice import Partition, enumerate_partitions, build_hasse

    h = build_hasse(enumerate_partitions(4))
    ancestors(h, Partition.parse("(0 1)(2 3)"))
"""

import logging
import re
import string
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import networkx as nx
import numpy as np

from .config import ENUMERATION_CAP
from .errors import (
    CapExceeded,
    IndexOutOfRange,
    InvalidConfig,
    InvalidPartition,
    NodeNotFound,
    NoPath,
    SizeMismatch,
)

log = logging.getLogger(__name__)

RGS_DIGITS = string.digits + string.ascii_lowercase
BLOCK_RE = re.compile(r"\(([^()]*)\)")


# ============================================================================
# PARTITIONS
# ============================================================================

def _canonical(labels):
    relabel = {}
    out = []
    for label in labels:
        if label not in relabel:
            relabel[label] = len(relabel)
        out.append(relabel[label])
    return tuple(out)


@dataclass(frozen=True, order=True)
class Partition:
    """One scale of description: a set partition of states 0..n-1."""
    assignment: tuple

    def __post_init__(self):
        object.__setattr__(self, "assignment", _canonical(self.assignment))

    @classmethod
    def from_blocks(cls, blocks, n=None):
        blocks = [sorted(int(x) for x in block) for block in blocks]
        members = [x for block in blocks for x in block]
        n = len(members) if n is None else n
        if any(len(block) == 0 for block in blocks):
            raise InvalidPartition("blocks must be non-empty")
        if len(set(members)) != len(members):
            raise InvalidPartition(f"blocks overlap: {blocks}")
        if sorted(members) != list(range(n)):
            raise InvalidPartition(f"blocks do not cover states 0..{n - 1}: {blocks}")
        assignment = [0] * n
        for b, block in enumerate(sorted(blocks)):
            for x in block:
                assignment[x] = b
        return cls(tuple(assignment))

    @classmethod
    def finest(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def coarsest(cls, n):
        return cls((0,) * n)

    @classmethod
    def parse(cls, text):
        """Read "(0 1)(2)" block notation or a restricted growth string like "001"."""
        text = text.strip()
        if text.startswith("("):
            found = BLOCK_RE.findall(text)
            if BLOCK_RE.sub("", text).strip():
                raise InvalidPartition(f"unreadable block notation {text!r}")
            try:
                blocks = [[int(x) for x in re.split(r"[\s,]+", body.strip()) if x] for body in found]
            except ValueError:
                raise InvalidPartition(f"unreadable block notation {text!r}")
            return cls.from_blocks(blocks)
        if "." in text:
            labels = [int(x) for x in text.split(".")]
        else:
            if any(ch not in RGS_DIGITS for ch in text.lower()):
                raise InvalidPartition(f"unreadable restricted growth string {text!r}")
            labels = [RGS_DIGITS.index(ch) for ch in text.lower()]
        if not labels or _canonical(labels) != tuple(labels):
            raise InvalidPartition(f"{text!r} is not a restricted growth string")
        return cls(tuple(labels))

    @property
    def n(self):
        return len(self.assignment)

    @property
    def n_blocks(self):
        return max(self.assignment) + 1 if self.assignment else 0

    @property
    def blocks(self):
        blocks = [[] for _ in range(self.n_blocks)]
        for state, b in enumerate(self.assignment):
            blocks[b].append(state)
        return tuple(tuple(block) for block in blocks)

    def render_blocks(self):
        return "".join("(" + " ".join(str(x) for x in block) + ")" for block in self.blocks)

    def render_rgs(self):
        if self.n_blocks <= len(RGS_DIGITS):
            return "".join(RGS_DIGITS[b] for b in self.assignment)
        return ".".join(str(b) for b in self.assignment)

    def merge(self, i, j):
        """Merge blocks i and j (block indices, not states)."""
        k = self.n_blocks
        if i == j or not (0 <= i < k) or not (0 <= j < k):
            raise IndexOutOfRange(f"cannot merge blocks {i} and {j} of a {k}-block partition")
        keep, drop = min(i, j), max(i, j)
        return Partition(tuple(keep if b == drop else b for b in self.assignment))

    def coarser_neighbors(self):
        return [self.merge(i, j) for i, j in combinations(range(self.n_blocks), 2)]

    def relabel(self, perm):
        """Partition seen after state i moves to position perm[i]."""
        moved = [0] * self.n
        for old, new in enumerate(perm):
            moved[new] = self.assignment[old]
        return Partition(tuple(moved))

    def __str__(self):
        return self.render_blocks()


# ============================================================================
# COUNTING
# ============================================================================

@lru_cache(maxsize=None)
def stirling2(n, k):
    if n < 0 or k < 0:
        raise InvalidConfig(f"stirling2 needs non-negative arguments, got ({n}, {k})")
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def bell(n):
    if n < 0:
        raise InvalidConfig(f"bell needs n >= 0, got {n}")
    return sum(stirling2(n, k) for k in range(n + 1))


def enumerate_partitions(n, cap=ENUMERATION_CAP):
    """
    Yield every partition of n states once, in lexicographic RGS order.

    Args:
        n: number of states, 1 <= n <= cap
        cap: guard against Bell-number blow-ups

    Returns:
        generator of Partition
    """
    if n < 1:
        raise InvalidConfig(f"need at least one state, got n={n}")
    if n > cap:
        raise CapExceeded(n, cap)

    rgs = [0] * n
    prefix_max = [0] * n
    while True:
        yield Partition(tuple(rgs))
        # rightmost position that can still grow
        i = n - 1
        while i > 0 and rgs[i] > prefix_max[i - 1]:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        prefix_max[i] = max(prefix_max[i - 1], rgs[i])
        for j in range(i + 1, n):
            rgs[j] = 0
            prefix_max[j] = prefix_max[i]


# ============================================================================
# ORDER
# ============================================================================

def _same_size(a, b):
    if a.n != b.n:
        raise SizeMismatch(a.n, b.n)


def refines(a, b):
    """True when every block of a lies inside a block of b (a finer or equal)."""
    _same_size(a, b)
    image = {}
    for block_a, block_b in zip(a.assignment, b.assignment):
        if image.setdefault(block_a, block_b) != block_b:
            return False
    return True


def covers(a, b):
    """True when b merges exactly two blocks of a."""
    _same_size(a, b)
    return b.n_blocks == a.n_blocks - 1 and refines(a, b)


# ============================================================================
# HASSE DIAGRAMS
# ============================================================================

class HasseDiagram:
    """Covering relation of the refinement order over a set of partitions."""

    def __init__(self, graph):
        self.graph = graph
        self.level_index = {}
        for node in sorted(graph.nodes):
            self.level_index.setdefault(node.n_blocks, []).append(node)

    @property
    def nodes(self):
        return frozenset(self.graph.nodes)

    @property
    def covering_edges(self):
        return sorted(self.graph.edges)

    @property
    def levels(self):
        return sorted(self.level_index)

    @property
    def finest(self):
        """The unique minimal node, or None."""
        bottoms = [v for v in self.graph.nodes if self.graph.in_degree(v) == 0]
        return bottoms[0] if len(bottoms) == 1 else None

    @property
    def coarsest(self):
        tops = [v for v in self.graph.nodes if self.graph.out_degree(v) == 0]
        return tops[0] if len(tops) == 1 else None

    def finer_neighbors(self, p):
        return sorted(self.graph.predecessors(p))

    def coarser_neighbors(self, p):
        return sorted(self.graph.successors(p))

    def descendants(self, p):
        self._require(p)
        return set(nx.descendants(self.graph, p))

    def _require(self, p):
        if p not in self.graph:
            raise NodeNotFound(p)

    def __contains__(self, p):
        return p in self.graph

    def __len__(self):
        return self.graph.number_of_nodes()


def _coarser_sets(nodes):
    """Indices of strictly coarser nodes for each node (numpy over the whole set)."""
    table = np.array([p.assignment for p in nodes], dtype=np.int64)
    levels = np.array([p.n_blocks for p in nodes])
    coarser = []
    for idx, p in enumerate(nodes):
        ok = levels < p.n_blocks
        for block in p.blocks:
            if len(block) > 1:
                cols = table[:, list(block)]
                ok &= np.all(cols == cols[:, :1], axis=1)
        coarser.append(np.flatnonzero(ok))
    return coarser


def build_hasse(nodes):
    """
    Hasse diagram of the refinement order restricted to the given partitions.

    On the full lattice the covering edges are exactly the pairwise block
    merges. On a subset, a joins b when a < b and no node of the subset lies
    strictly between them.
    """
    nodes = sorted(set(nodes))
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    if not nodes:
        return HasseDiagram(graph)
    n = nodes[0].n
    for p in nodes:
        _same_size(nodes[0], p)

    if len(nodes) == bell(n):
        for p in nodes:
            graph.add_edges_from((p, q) for q in set(p.coarser_neighbors()))
        log.debug("full lattice diagram: %d nodes, %d edges", len(nodes), graph.number_of_edges())
        return HasseDiagram(graph)

    coarser = _coarser_sets(nodes)
    coarser_sets = [set(c.tolist()) for c in coarser]
    for idx, p in enumerate(nodes):
        blocked = set()
        for c in sorted(coarser[idx], key=lambda j: -nodes[j].n_blocks):
            if c in blocked:
                continue
            graph.add_edge(p, nodes[c])
            blocked |= coarser_sets[c]
    log.debug("subset diagram: %d nodes, %d edges", len(nodes), graph.number_of_edges())
    return HasseDiagram(graph)


def ancestors(h, p):
    """All strictly finer nodes of p in the diagram."""
    h._require(p)
    return set(nx.ancestors(h.graph, p))


# ============================================================================
# PATHS
# ============================================================================

class PathCounter:
    """Bottom-to-top covering paths: exact count plus a uniform sampler."""

    def __init__(self, h, bottom, top, counts):
        self.h = h
        self.bottom = bottom
        self.top = top
        self._counts = counts

    @property
    def count(self):
        return self._counts[self.bottom]

    def _steps(self, node):
        return [q for q in self.h.coarser_neighbors(node) if self._counts.get(q, 0) > 0]

    def sample(self, k, seed=None):
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        paths = []
        for _ in range(k):
            node, path = self.bottom, [self.bottom]
            while node != self.top:
                steps = self._steps(node)
                weights = np.array([self._counts[q] for q in steps], dtype=float)
                node = steps[rng.choice(len(steps), p=weights / weights.sum())]
                path.append(node)
            paths.append(path)
        return paths

    def enumerate(self):
        stack = [[self.bottom]]
        while stack:
            path = stack.pop()
            if path[-1] == self.top:
                yield path
                continue
            for q in reversed(self._steps(path[-1])):
                stack.append(path + [q])


def paths_between(h, bottom, top):
    h._require(bottom)
    h._require(top)
    if bottom != top and top not in nx.descendants(h.graph, bottom):
        raise NoPath(f"no covering path from {bottom} to {top}")

    between = (nx.descendants(h.graph, bottom) | {bottom}) & (nx.ancestors(h.graph, top) | {top})
    counts = {top: 1}
    for node in sorted(between, key=lambda p: p.n_blocks):
        if node == top:
            continue
        counts[node] = sum(counts.get(q, 0) for q in h.graph.successors(node) if q in between)
    return PathCounter(h, bottom, top, counts)
