"""
Exception hierarchy for the causal scales toolkit.

Every error carries the process exit code the command line front-end uses
when it surfaces the error to the user.

Usage:
    from causalscales.errors import RowSumViolation, CausalScalesError
"""

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_PARTIAL = 4


class CausalScalesError(Exception):
    """Base class for all toolkit errors."""

    exit_code = EXIT_VALIDATION


# ============================================================================
# TPM VALIDATION
# ============================================================================

class TpmError(CausalScalesError):
    pass


class NonSquare(TpmError):
    def __init__(self, shape):
        self.shape = tuple(shape)
        super().__init__(f"TPM must be a square matrix, got shape {self.shape}")


class NegativeEntry(TpmError):
    def __init__(self, row, col, value):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"negative probability {value!r} at row {row}, column {col}")


class RowSumViolation(TpmError):
    def __init__(self, row, deviation):
        self.row = row
        self.deviation = deviation
        super().__init__(f"row {row} does not sum to 1 (deviation {deviation:.3e})")


class SingleStateScale(CausalScalesError):
    def __init__(self, quantity):
        super().__init__(f"{quantity} is undefined for a single-state scale")


# ============================================================================
# PARTITIONS AND LATTICES
# ============================================================================

class InvalidPartition(CausalScalesError):
    pass


class IndexOutOfRange(CausalScalesError):
    pass


class SizeMismatch(CausalScalesError):
    def __init__(self, left, right):
        super().__init__(f"partitions are over different state counts ({left} vs {right})")


class NodeNotFound(CausalScalesError):
    def __init__(self, node):
        super().__init__(f"partition {node} is not a node of the diagram")


class NoPath(CausalScalesError):
    pass


class CapExceeded(CausalScalesError):
    exit_code = EXIT_CAP

    def __init__(self, n, cap):
        self.n, self.cap = n, cap
        super().__init__(
            f"{n} states exceeds the enumeration cap of {cap}; "
            f"use the greedy command for larger systems"
        )


# ============================================================================
# ANALYSIS AND METRICS
# ============================================================================

class MissingCp(CausalScalesError):
    def __init__(self, node):
        super().__init__(f"no CP value recorded for partition {node}")


class UndefinedDistribution(CausalScalesError):
    pass


# ============================================================================
# CONFIGURATION, GENERATORS, FILES
# ============================================================================

class InvalidConfig(CausalScalesError):
    pass


class InvalidSpec(CausalScalesError):
    pass


class ParseError(CausalScalesError):
    def __init__(self, path, message, line=None):
        self.path, self.line = path, line
        where = f"{path}:{line}" if line is not None else f"{path}"
        super().__init__(f"{where}: {message}")


class PartialSweepFailure(CausalScalesError):
    exit_code = EXIT_PARTIAL

    def __init__(self, failed, total):
        self.failed, self.total = failed, total
        super().__init__(f"{failed} of {total} sweep runs failed")
