"""Shared fixtures: scripts/ on sys.path, fixture systems, random TPMs."""

import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT / "scripts"))

FIXTURE_DIR = PROJECT_ROOT / "data" / "fixtures"

from causalscales.export import read_tpm_csv  # noqa: E402
from causalscales.tpm import validate_tpm  # noqa: E402


def random_tpm(rng, n, sparsity=0.0):
    """Dirichlet rows; with sparsity > 0 some entries are zeroed first."""
    rows = rng.dirichlet(np.ones(n), size=n)
    if sparsity > 0:
        mask = rng.random((n, n)) < sparsity
        mask[np.arange(n), rng.integers(0, n, size=n)] = False
        rows = np.where(mask, 0.0, rows)
        rows /= rows.sum(axis=1, keepdims=True)
    return validate_tpm(rows)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR


@pytest.fixture
def load_fixture():
    def _load(name):
        return read_tpm_csv(FIXTURE_DIR / f"{name}.csv")
    return _load
