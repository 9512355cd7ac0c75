"""
Unit tests for causal apportioning over the full lattice.

Core claims:
    - delta CP by dynamic programming equals the max-over-ancestors definition
    - the five-state source/cycle/sinks fixture reproduces its golden hierarchy
    - pinpoint systems with one diffusion cycle have exactly one emergent scale,
      at the designed level; several cycles add members below the designed peak
    - garden systems have the expected member counts and shapes
    - results are invariant under relabeling and worker count
"""

import json

import networkx as nx
import numpy as np
import pytest
from pytest import approx

from conftest import random_tpm
from causalscales.apportion import analyze, compute_cp_all, delta_cp, emergent_set
from causalscales.config import AnalysisConfig, PinpointSpec
from causalscales.errors import CapExceeded, MissingCp
from causalscales.generators import designed_partition, garden_examples, pinpoint_tpm
from causalscales.lattice import Partition, build_hasse, enumerate_partitions
from causalscales.tpm import coarse_grain, cp, relabel

P = Partition.parse


# -- Helpers -----------------------------------------------------------------

def _brute_force_delta(h, cps):
    out = {}
    for p in h.graph.nodes:
        finer = nx.ancestors(h.graph, p)
        out[p] = cps[p] - (max(cps[q] for q in finer) if finer else 0.0)
    return out


# == 1. Delta CP =============================================================

class TestDeltaCp:
    def test_dynamic_programming_matches_definition(self, rng):
        for n in (3, 4, 5):
            t = random_tpm(rng, n, sparsity=0.4)
            nodes = list(enumerate_partitions(n))
            h = build_hasse(nodes)
            cps = compute_cp_all(t, nodes)
            dp = delta_cp(h, cps)
            brute = _brute_force_delta(h, cps)
            assert all(dp[p] == approx(brute[p], abs=1e-12) for p in nodes)

    def test_on_a_subset_diagram(self, rng):
        t = random_tpm(rng, 5)
        nodes = [P("01234"), P("00123"), P("01123"), P("00012"), P("00000")]
        h = build_hasse(nodes)
        cps = compute_cp_all(t, nodes)
        assert delta_cp(h, cps) == approx(_brute_force_delta(h, cps))

    def test_finest_keeps_its_cp(self, rng):
        t = random_tpm(rng, 4)
        result = analyze(t)
        assert result.delta[Partition.finest(4)] == approx(cp(t))

    def test_missing_cp(self):
        h = build_hasse(enumerate_partitions(3))
        with pytest.raises(MissingCp):
            delta_cp(h, {Partition.finest(3): 0.5})

    def test_cp_map_covers_lattice(self, rng):
        t = random_tpm(rng, 4)
        cps = compute_cp_all(t, enumerate_partitions(4))
        assert len(cps) == 15
        assert cps[P("0011")] == approx(cp(coarse_grain(t, P("0011"))))


# == 2. Emergent set =========================================================

class TestEmergentSet:
    def test_threshold_and_anchor(self):
        delta = {P("012"): 0.4, P("001"): 0.2, P("011"): 1e-10, P("010"): -0.1, P("000"): 0.0}
        h = emergent_set(delta, AnalysisConfig())
        assert h.members == [P("001")]
        assert h.anchor == P("012")
        assert set(h.diagram.nodes) == {P("012"), P("001")}

    def test_anchor_kept_when_not_positive(self):
        delta = {P("012"): 0.0, P("011"): 0.3}
        h = emergent_set(delta, AnalysisConfig())
        assert h.anchor in h.diagram
        assert h.members == [P("011")]

    def test_epsilon_is_configurable(self):
        delta = {P("012"): 0.4, P("001"): 0.02}
        assert emergent_set(delta, AnalysisConfig(epsilon=1e-4)).members == [P("001")]
        assert emergent_set({P("012"): 0.4, P("001"): 5e-5}, AnalysisConfig(epsilon=1e-4)).members == []


# == 3. Source / cycle / sinks fixture =======================================

class TestFiveStateFixture:
    @pytest.fixture
    def golden(self, fixture_dir):
        return json.loads((fixture_dir / "fig3_golden.json").read_text())

    def test_golden_members(self, load_fixture, golden):
        result = analyze(load_fixture("fig3"))
        h = result.hierarchy
        assert len(result.cps) == golden["n_partitions"]
        assert {p.render_blocks() for p in h.members} == set(golden["emergent_members"])
        for p in h.members:
            assert h.delta[p] == approx(golden["emergent_members"][p.render_blocks()], abs=1e-9)
            assert result.cps[p] == approx(golden["cp"][p.render_blocks()], abs=1e-9)

    def test_maximum_delta_is_source_cycle_sinks(self, load_fixture, golden):
        result = analyze(load_fixture("fig3"))
        best = max(result.delta, key=lambda p: (result.delta[p] if p != result.hierarchy.anchor else -1))
        assert best.render_blocks() == golden["max_delta_cp_member"]
        assert result.cps[Partition.finest(5)] == approx(golden["micro_cp"], abs=1e-9)


# == 4. Pinpoint emergence ===================================================

class TestPinpoint:
    @pytest.mark.parametrize("spec", [
        PinpointSpec(cycle_sizes=(6, 1)),
        PinpointSpec(cycle_sizes=(5, 1, 1)),
        PinpointSpec.single_cycle(7, 3),
        PinpointSpec(cycle_sizes=(5,), n_singletons=2, permute_singletons=True),
    ])
    def test_exactly_one_member_at_designed_level(self, spec):
        result = analyze(pinpoint_tpm(spec))
        assert len(result.cps) == 877
        assert result.hierarchy.members == [designed_partition(spec)]
        assert result.hierarchy.members[0].n_blocks == spec.target_level
        assert result.cps[designed_partition(spec)] == approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("cycles, n_members", [((3, 2, 2), 7), ((4, 3), 2), ((5, 2), 2)])
    def test_disjoint_cycles_peak_at_designed_scale(self, cycles, n_members):
        spec = PinpointSpec(cycle_sizes=cycles)
        result = analyze(pinpoint_tpm(spec))
        assert len(result.hierarchy.members) == n_members
        designed = designed_partition(spec)
        assert result.cps[designed] == approx(1.0, abs=1e-12)
        assert max(result.hierarchy.members, key=lambda p: result.delta[p]) == designed

    def test_permutation_has_no_members(self):
        t = pinpoint_tpm(PinpointSpec(cycle_sizes=(3, 2), stay_prob=0.0, step_prob=1.0))
        result = analyze(t)
        assert cp(t) == approx(1.0, abs=1e-12)
        assert result.hierarchy.members == []


# == 5. Garden ===============================================================

class TestGarden:
    @pytest.fixture(scope="class")
    def garden_results(self):
        return {name: analyze(t) for name, t in garden_examples().items()}

    @pytest.mark.parametrize("name,n_members", [
        ("equivalence", 210), ("two-cycles", 1), ("mesoscale", 15), ("degenerate", 11),
        ("modules", 43), ("fig3", 5), ("noisy-pairs", 7), ("uniform-4", 0), ("pinpoint-7", 1),
    ])
    def test_member_counts(self, garden_results, name, n_members):
        assert len(garden_results[name].hierarchy.members) == n_members

    @pytest.mark.parametrize("name,shape", [
        ("uniform-4", "flat"), ("two-cycles", "balloon"), ("pinpoint-7", "balloon"),
        ("degenerate", "top-heavy"), ("equivalence", "top-heavy"), ("mesoscale", "distributed"),
    ])
    def test_shapes(self, garden_results, name, shape):
        assert garden_results[name].hierarchy.shape() == shape

    def test_two_cycles_split_at_level_two(self, garden_results):
        h = garden_results["two-cycles"].hierarchy
        assert h.members == [P("00001111")]
        assert h.delta[P("00001111")] == approx(0.240643, abs=1e-6)

    def test_mesoscale_peak(self, garden_results):
        result = garden_results["mesoscale"]
        assert result.cps[P("00112233")] == approx(1.0, abs=1e-12)
        assert result.delta[P("00112233")] == approx(0.172271, abs=1e-6)
        assert result.cps[Partition.finest(8)] == approx(2 / 3, abs=1e-12)

    def test_level_profile_and_centroid(self, garden_results):
        h = garden_results["degenerate"].hierarchy
        profile = h.level_profile()
        assert len(profile) == 8
        assert profile[1] == approx(0.172180, abs=1e-6)
        assert profile[0] == 0.0 and profile[7] == 0.0
        assert h.centroid() == approx(3.5586, abs=1e-4)

    def test_per_level_includes_anchor(self, garden_results):
        h = garden_results["uniform-4"].hierarchy
        assert list(h.per_level) == [4]
        [(node, value)] = h.per_level[4]
        assert node == Partition.finest(4)
        assert value == approx(0.0, abs=1e-12)
        assert h.tops == [Partition.finest(4)]


# == 6. Invariance and limits ================================================

class TestInvariance:
    def test_relabeling_maps_members(self, load_fixture):
        t = load_fixture("fig3")
        perm = [3, 0, 4, 2, 1]
        base = analyze(t).hierarchy
        moved = analyze(relabel(t, perm)).hierarchy
        assert sorted(p.relabel(perm) for p in base.members) == moved.members
        for p in base.members:
            assert moved.delta[p.relabel(perm)] == approx(base.delta[p], abs=1e-12)

    def test_worker_count_does_not_change_results(self, load_fixture):
        t = load_fixture("noisy-pairs")
        nodes = list(enumerate_partitions(6))
        assert compute_cp_all(t, nodes, threads=2) == compute_cp_all(t, nodes, threads=1)

    def test_cap(self, rng):
        with pytest.raises(CapExceeded):
            analyze(random_tpm(rng, 6), AnalysisConfig(max_states=5))

    def test_single_state_system(self):
        result = analyze(pinpoint_tpm(PinpointSpec(cycle_sizes=(1,))))
        assert result.hierarchy.members == []
        assert result.hierarchy.shape() == "flat"
        assert np.array_equal(result.hierarchy.level_profile(), [0.0])
