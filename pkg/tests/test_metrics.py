"""
Unit tests for path entropy, row negentropy and emergent complexity.

Core claims:
    - path entropy lies in [0, log2(path length)]
    - a single dominating scale gives zero path entropy and zero complexity
    - scaling every delta CP by a constant leaves every metric unchanged
    - row negentropy lies in [0, log2 L], dense hierarchies included
    - the anchor starts every path without carrying mass
    - sampled path entropy agrees with the exhaustive value
"""

import numpy as np
import pytest
from pytest import approx

from causalscales.apportion import analyze, emergent_set
from causalscales.config import AnalysisConfig, MetricsConfig
from causalscales.errors import UndefinedDistribution
from causalscales.generators import garden_examples
from causalscales.lattice import Partition, enumerate_partitions
from causalscales.metrics import (
    PathDistribution,
    complexity,
    hierarchy_paths,
    path_distribution,
    path_entropy,
    row_entropies,
    row_negentropy,
    s_path,
)

P = Partition.parse


# -- Helpers -----------------------------------------------------------------

def _make_hierarchy(delta):
    return emergent_set(delta, AnalysisConfig())


def _make_random_lattice_hierarchy(rng, n=5):
    """Every partition of n states is a member, with random delta CP."""
    return _make_hierarchy({p: float(rng.uniform(0.1, 1.0)) for p in enumerate_partitions(n)})


# == 1. Path entropy =========================================================

class TestPathEntropy:
    def test_equal_split_is_one_bit(self):
        h = _make_hierarchy({P("0123"): 0.2, P("0012"): 0.5, P("0001"): 0.5})
        path = [P("0123"), P("0012"), P("0001")]
        assert path_entropy(path_distribution(h, path)) == approx(1.0)
        assert s_path(h) == approx(1.0)

    def test_anchor_carries_no_mass(self):
        h = _make_hierarchy({P("012"): 0.9, P("001"): 0.3})
        d = path_distribution(h, [P("012"), P("001")])
        assert d.raw == [0.0, 0.3]
        assert path_entropy(d) == 0.0
        assert s_path(h) == 0.0

    def test_balloon_with_silent_microscale(self):
        h = _make_hierarchy({P("0123"): 0.0, P("0011"): 0.3})
        assert h.shape() == "balloon"
        assert s_path(h) == approx(0.0)
        assert complexity(h).complexity == approx(0.0)

    def test_undefined_distribution(self):
        with pytest.raises(UndefinedDistribution):
            path_entropy(PathDistribution(levels=[3, 2], raw=[0.0, 0.0]))

    def test_bounds(self, rng):
        h = _make_random_lattice_hierarchy(rng)
        paths, _ = hierarchy_paths(h, sample_size=1000)
        for path in paths:
            value = path_entropy(path_distribution(h, path))
            assert -1e-12 <= value <= np.log2(len(path)) + 1e-12

    def test_zero_paths_count_or_skip(self):
        h = _make_hierarchy({P("0123"): 0.0})
        counted = complexity(h, MetricsConfig(zero_paths="count"))
        skipped = complexity(h, MetricsConfig(zero_paths="skip"))
        assert counted.n_paths_used == 1
        assert skipped.n_paths_used == 0
        assert counted.s_path == skipped.s_path == 0.0

    def test_sum_aggregate(self, rng):
        h = _make_random_lattice_hierarchy(rng, n=4)
        paths, exhaustive = hierarchy_paths(h, sample_size=100)
        assert exhaustive and len(paths) == 18
        assert s_path(h, aggregate="sum") == approx(18 * s_path(h, aggregate="mean"))


# == 2. Row negentropy =======================================================

class TestRowNegentropy:
    def test_equal_members_in_a_level(self):
        h = _make_hierarchy({P("012"): 0.5, P("001"): 0.2, P("011"): 0.2})
        entropies = row_entropies(h)
        assert entropies[1] == approx(1.0)
        s_row, negentropy = row_negentropy(h)
        assert s_row == approx(1.0 / 3)
        assert negentropy == approx(np.log2(3) - 1.0 / 3)

    def test_bounds_on_garden(self):
        for name, t in garden_examples().items():
            h = analyze(t).hierarchy
            _, negentropy = row_negentropy(h)
            assert -1e-12 <= negentropy <= np.log2(h.micro_dim) + 1e-12, name

    def test_dense_hierarchy_is_floored_at_zero(self, rng):
        # 15, 25 and 10 members on levels 2 to 4 push S_row past log2 5
        dense = _make_hierarchy({p: 0.1 for p in enumerate_partitions(5)})
        s_row, negentropy = row_negentropy(dense)
        assert s_row > np.log2(5)
        assert negentropy == 0.0
        assert complexity(dense).complexity == 0.0
        for _ in range(5):
            report = complexity(_make_random_lattice_hierarchy(rng))
            assert 0.0 <= report.row_negentropy <= np.log2(5)
            assert report.complexity >= 0.0

    def test_flat_hierarchy(self, load_fixture):
        report = complexity(analyze(load_fixture("uniform-4")).hierarchy)
        assert report.row_negentropy == approx(2.0)
        assert report.complexity == 0.0
        assert report.shape == "flat"


# == 3. Scaling invariance ===================================================

class TestScaling:
    @pytest.mark.parametrize("factor", [0.5, 2.5, 10.0])
    def test_metrics_are_scale_free(self, load_fixture, factor):
        result = analyze(load_fixture("fig3"))
        base = complexity(result.hierarchy)
        scaled = complexity(_make_hierarchy({p: d * factor for p, d in result.delta.items()}))
        assert scaled.s_path == approx(base.s_path, abs=1e-12)
        assert scaled.s_row == approx(base.s_row, abs=1e-12)
        assert scaled.row_negentropy == approx(base.row_negentropy, abs=1e-12)
        assert scaled.complexity == approx(base.complexity, abs=1e-12)
        assert scaled.centroid == approx(base.centroid, abs=1e-12)


# == 4. Sampling =============================================================

class TestSampling:
    def test_exhaustive_below_sample_size(self, rng):
        h = _make_random_lattice_hierarchy(rng)
        paths, exhaustive = hierarchy_paths(h, sample_size=180)
        assert exhaustive and len(paths) == 180
        paths, exhaustive = hierarchy_paths(h, sample_size=179, seed=1)
        assert not exhaustive and len(paths) == 179

    def test_sampled_matches_exhaustive(self, rng):
        h = _make_random_lattice_hierarchy(rng)
        exact = s_path(h, sample_size=1000)
        sampled = s_path(h, sample_size=150, seed=4)
        assert abs(sampled - exact) <= 0.05

    def test_sampling_is_reproducible(self, load_fixture):
        h = analyze(load_fixture("modules")).hierarchy
        a = complexity(h, MetricsConfig(sample_size=10, seed=5))
        b = complexity(h, MetricsConfig(sample_size=10, seed=5))
        assert a == b


# == 5. Report ===============================================================

class TestReport:
    def test_complexity_is_product(self, load_fixture):
        report = complexity(analyze(load_fixture("mesoscale")).hierarchy)
        assert report.complexity == approx(report.s_path * report.row_negentropy)
        assert report.n_emergent_nodes == 15
        assert report.micro_dim == 8
        assert len(report.level_profile) == 8

    def test_as_dict(self, load_fixture):
        report = complexity(analyze(load_fixture("fig3")).hierarchy)
        d = report.as_dict()
        assert d["n_emergent_nodes"] == 5
        assert set(d) >= {"s_path", "s_row", "row_negentropy", "complexity", "shape", "centroid"}
