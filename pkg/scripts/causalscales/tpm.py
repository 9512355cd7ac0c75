"""
Transition probability matrices as causal models.

A Tpm holds p(effect | cause) for one scale of a system: row index is the
cause, column index the effect. Interventions are uniform over the states of
the scale being examined, so every quantity here is computed with a uniform
cause distribution and entropies in bits.

Usage:
    from causalscales.tpm import validate_tpm, cp, coarse_grain

    t = validate_tpm(np.eye(4))
    cp(t)                     # 1.0
    cp(coarse_grain(t, p))    # CP of the scale described by partition p
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import entropy

from .config import ROW_SUM_TOL, EQ_TOL, ZERO_PROB
from .errors import (
    IndexOutOfRange,
    InvalidPartition,
    NegativeEntry,
    NonSquare,
    RowSumViolation,
    SingleStateScale,
    TpmError,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Tpm:
    """
    Row-stochastic matrix with the microstate count behind every state.

    block_weights[i] is the number of microstates state i aggregates, so a
    microscale Tpm has all weights equal to 1 and their sum is always the
    microscale state count.
    """
    rows: np.ndarray
    block_weights: tuple
    labels: tuple = None

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "block_weights", tuple(int(w) for w in self.block_weights))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @property
    def n(self):
        return self.rows.shape[0]

    @property
    def micro_n(self):
        return sum(self.block_weights)

    @property
    def is_microscale(self):
        return all(w == 1 for w in self.block_weights)

    def allclose(self, other, tol=EQ_TOL):
        return (
            self.rows.shape == other.rows.shape
            and self.block_weights == other.block_weights
            and bool(np.allclose(self.rows, other.rows, rtol=0.0, atol=tol))
        )

    def __repr__(self):
        return f"Tpm(n={self.n}, micro_n={self.micro_n})"


@dataclass(frozen=True)
class CausalProfile:
    determinism: float
    degeneracy: float
    specificity: float
    cp: float
    mutual_information_bits: float

    @property
    def effectiveness(self):
        return self.cp


# ============================================================================
# VALIDATION
# ============================================================================

def validate_tpm(matrix, labels=None):
    """
    Check the row-stochastic contract and wrap the matrix as a microscale Tpm.

    Rows within ROW_SUM_TOL of 1 are renormalized; anything further off is
    rejected. Deviations below EQ_TOL are float noise and left untouched, so
    a matrix read back from its own CSV is bit-identical.

    Args:
        matrix: n x n array-like of probabilities
        labels: optional state names

    Returns:
        Tpm: with unit block weights
    """
    rows = np.array(matrix, dtype=float)
    if rows.ndim != 2 or rows.shape[0] != rows.shape[1] or rows.shape[0] < 1:
        raise NonSquare(rows.shape)
    if not np.all(np.isfinite(rows)):
        raise TpmError("TPM contains non-finite entries")

    negative = np.argwhere(rows < 0)
    if len(negative):
        r, c = negative[0]
        raise NegativeEntry(int(r), int(c), float(rows[r, c]))

    sums = rows.sum(axis=1)
    deviation = np.abs(sums - 1.0)
    bad = np.flatnonzero(deviation > ROW_SUM_TOL)
    if len(bad):
        raise RowSumViolation(int(bad[0]), float(sums[bad[0]] - 1.0))
    drift = deviation > EQ_TOL
    if np.any(drift):
        log.debug("renormalizing %d rows within tolerance", int(np.count_nonzero(drift)))
        rows[drift] = rows[drift] / sums[drift, None]

    if labels is not None and len(labels) != rows.shape[0]:
        raise TpmError(f"expected {rows.shape[0]} labels, got {len(labels)}")
    return Tpm(rows=rows, block_weights=(1,) * rows.shape[0], labels=labels)


# ============================================================================
# CAUSAL PRIMITIVES
# ============================================================================

def _bits(distribution, axis=None):
    p = np.where(distribution < ZERO_PROB, 0.0, distribution)
    if axis is None:
        return float(entropy(p, base=2))
    return entropy(p, base=2, axis=axis)


def _require_multi_state(t, quantity):
    if t.n == 1:
        raise SingleStateScale(quantity)


def determinism_of_cause(t, c):
    _require_multi_state(t, "determinism")
    if not (0 <= c < t.n):
        raise IndexOutOfRange(f"cause {c} outside 0..{t.n - 1}")
    return 1.0 - _bits(t.rows[c]) / np.log2(t.n)


def determinism(t):
    """1 - H(E|C)/log2 n with every cause equally likely."""
    _require_multi_state(t, "determinism")
    row_bits = _bits(t.rows, axis=1)
    return float(1.0 - row_bits.mean() / np.log2(t.n))


def degeneracy(t):
    """1 - H(E)/log2 n where E is the effect distribution under uniform causes."""
    _require_multi_state(t, "degeneracy")
    return float(1.0 - _bits(t.rows.mean(axis=0)) / np.log2(t.n))


def specificity(t):
    return 1.0 - degeneracy(t)


def cp(t):
    """
    Causal primitives score: determinism + specificity - 1.

    Equals I(C;E)/log2 n for a uniform cause distribution. A single-state
    scale constrains nothing and scores 0.
    """
    return cp_of_rows(t.rows)


def cp_of_rows(rows):
    """CP straight from a row-stochastic array, without building a Tpm."""
    n = rows.shape[0]
    if n == 1:
        return 0.0
    score = (_bits(rows.mean(axis=0)) - float(_bits(rows, axis=1).mean())) / np.log2(n)
    return float(min(1.0, max(0.0, score)))


def causal_profile(t):
    if t.n == 1:
        return CausalProfile(0.0, 0.0, 0.0, 0.0, 0.0)
    det, deg = determinism(t), degeneracy(t)
    score = cp(t)
    return CausalProfile(
        determinism=det,
        degeneracy=deg,
        specificity=1.0 - deg,
        cp=score,
        mutual_information_bits=score * float(np.log2(t.n)),
    )


def mutual_information(t):
    """I(C;E) in bits from the joint distribution, independent of the primitives."""
    joint = t.rows / t.n
    p_cause = joint.sum(axis=1, keepdims=True)
    p_effect = joint.sum(axis=0, keepdims=True)
    mask = joint > ZERO_PROB
    ratio = joint[mask] / (p_cause @ p_effect)[mask]
    return float(np.sum(joint[mask] * np.log2(ratio)))


# ============================================================================
# COARSE-GRAINING
# ============================================================================

def _assignment_of(t, partition):
    assignment = getattr(partition, "assignment", partition)
    assignment = np.asarray(assignment, dtype=int)
    if assignment.ndim != 1 or len(assignment) != t.n:
        raise InvalidPartition(f"partition covers {len(assignment)} states, TPM has {t.n}")
    k = int(assignment.max()) + 1 if len(assignment) else 0
    if assignment.min() < 0 or len(np.unique(assignment)) != k:
        raise InvalidPartition(f"block ids {assignment.tolist()} are not contiguous from 0")
    return assignment, k


def coarse_grain(t, partition):
    """
    Macroscale Tpm of a partition of t's states.

    Macro rows average the member rows, weighted by the microstates each
    member carries; macro columns sum member columns. Block order follows the
    block ids of the partition.

    Args:
        t: Tpm at any scale
        partition: Partition or block-id sequence over t's states

    Returns:
        Tpm: one state per block, block weights summed
    """
    assignment, k = _assignment_of(t, partition)
    weights = np.asarray(t.block_weights, dtype=float)

    membership = np.zeros((t.n, k))
    membership[np.arange(t.n), assignment] = 1.0
    aggregate = membership.T * weights
    block_weight = aggregate.sum(axis=1)
    rows = (aggregate / block_weight[:, None]) @ t.rows @ membership

    labels = None
    if t.labels is not None:
        labels = ["+".join(t.labels[i] for i in np.flatnonzero(assignment == b)) for b in range(k)]
    return Tpm(rows=rows, block_weights=tuple(int(w) for w in block_weight), labels=labels)


def merged_rows(rows, weights, lo, hi):
    """Array form of merge_blocks for lo < hi; the merged state stays at lo."""
    w_lo, w_hi = weights[lo], weights[hi]
    out = np.array(rows)
    out[lo] = (w_lo * out[lo] + w_hi * out[hi]) / (w_lo + w_hi)
    out[:, lo] += out[:, hi]
    out = np.delete(np.delete(out, hi, axis=0), hi, axis=1)
    merged = list(weights)
    merged[lo] = w_lo + w_hi
    del merged[hi]
    return out, tuple(merged)


def merge_blocks(t, i, j):
    """Merge states i and j, keeping every other state on its own."""
    if i == j or not (0 <= i < t.n) or not (0 <= j < t.n):
        raise IndexOutOfRange(f"cannot merge states {i} and {j} of a {t.n}-state TPM")
    lo, hi = min(i, j), max(i, j)
    rows, weights = merged_rows(t.rows, t.block_weights, lo, hi)

    labels = None
    if t.labels is not None:
        labels = list(t.labels)
        labels[lo] = f"{labels[lo]}+{labels[hi]}"
        del labels[hi]
    return Tpm(rows=rows, block_weights=tuple(weights), labels=labels)


def relabel(t, perm):
    """Move state i to position perm[i]."""
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(t.n)):
        raise IndexOutOfRange(f"{perm.tolist()} is not a permutation of 0..{t.n - 1}")
    rows = np.empty_like(t.rows)
    rows[np.ix_(perm, perm)] = t.rows
    weights = [0] * t.n
    for old, new in enumerate(perm):
        weights[new] = t.block_weights[old]
    labels = None
    if t.labels is not None:
        labels = [None] * t.n
        for old, new in enumerate(perm):
            labels[new] = t.labels[old]
    return Tpm(rows=rows, block_weights=tuple(weights), labels=labels)
