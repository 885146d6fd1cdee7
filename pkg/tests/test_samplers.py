"""
GW, TGWT, EGWT and EKT samplers, typical re-rooting and the sampler registry.
"""

import numpy as np
import pytest

from increments import IncrementLaw, OffspringLaw, iid_window
from samplers import (
    SamplerError,
    SamplerSpec,
    expected_tree_size,
    sample_egwt,
    sample_ekt,
    sample_gw,
    sample_tgwt,
    shifted,
    size_biased,
    tgwt_ancestor_tail,
    typical_reroot,
    unimodularised_ekt,
)
from trees import SuccessionLines, VertexFlag, count_succession_lines, parse, serialize

# ---- Helpers ----

HALF_ZERO_HALF_TWO = OffspringLaw.from_atoms([[0, 0.5], [2, 0.5]])
HALF_ZERO_HALF_ONE = OffspringLaw.from_atoms([[0, 0.5], [1, 0.5]])


def fixed_proposal(text):
    tree = parse(text)

    def propose(rng):
        return tree

    return propose


# ---- Offspring law helpers ----


class TestLawHelpers:
    def test_size_biased(self):
        assert size_biased(HALF_ZERO_HALF_TWO).atoms == ((2, 1.0),)
        with pytest.raises(SamplerError):
            size_biased(OffspringLaw.point_mass(0))

    def test_shifted(self):
        assert shifted(HALF_ZERO_HALF_ONE, 1).atoms == ((1, 0.5), (2, 0.5))

    def test_subcritical_sizes(self):
        assert expected_tree_size(HALF_ZERO_HALF_ONE) == pytest.approx(2.0)
        assert tgwt_ancestor_tail(HALF_ZERO_HALF_ONE, 3) == pytest.approx(0.125)
        with pytest.raises(SamplerError):
            expected_tree_size(HALF_ZERO_HALF_TWO)


# ---- Galton-Watson family ----


class TestGaltonWatson:
    def test_single_vertex(self):
        sample = sample_gw(OffspringLaw.point_mass(0), 0)
        assert serialize(sample.tree) == "[]"
        assert not sample.meta.censored

    def test_radius_truncation(self):
        sample = sample_gw(OffspringLaw.point_mass(2), 0, radius=2)
        assert serialize(sample.tree) == "[(~(),~()),(~(),~())]"

    def test_budget_censors(self):
        sample = sample_gw(OffspringLaw.point_mass(2), 0, node_budget=50)
        assert sample.meta.censored
        assert any(flag is VertexFlag.CENSORED for flag in sample.tree.flags)

    def test_same_seed_same_tree(self):
        pi = OffspringLaw.from_atoms([[0, 0.4], [1, 0.3], [2, 0.3]])
        assert serialize(sample_gw(pi, [3, 9]).tree) == serialize(sample_gw(pi, [3, 9]).tree)

    def test_mean_size(self):
        pi = OffspringLaw.from_atoms([[0, 0.5], [1, 0.25], [2, 0.25]])
        sizes = [sample_gw(pi, [1, i]).tree.size for i in range(2000)]
        # variance of the size is var(pi) / (1 - m)^3 = 44, so the mean's sd is about 0.15
        assert np.mean(sizes) == pytest.approx(4.0, abs=0.6)


class TestTgwt:
    def test_root_parent_rate_is_the_mean(self):
        trees = [sample_tgwt(HALF_ZERO_HALF_ONE, [2, i]).tree for i in range(800)]
        rate = np.mean([t.has_parent(t.root) is True for t in trees])
        # binomial sd is about 0.018
        assert rate == pytest.approx(0.5, abs=0.08)

    def test_whole_tree_is_resolved(self):
        sample = sample_tgwt(HALF_ZERO_HALF_ONE, 5)
        assert sample.tree.is_fully_resolved()
        assert sample.tree.spine[-1] == sample.tree.root

    def test_needs_subcritical_law(self):
        with pytest.raises(SamplerError):
            sample_tgwt(HALF_ZERO_HALF_TWO, 0)


class TestEgwt:
    @pytest.mark.parametrize("seed", range(10))
    def test_spine_parent_has_size_biased_offspring(self, seed):
        t = sample_egwt(HALF_ZERO_HALF_TWO, 3, seed).tree
        parent = t.parent[t.root]
        assert parent is not None
        assert t.out_degree(parent) == 2
        assert t.root in t.children[parent]

    def test_spine_runs_to_the_radius(self):
        t = sample_egwt(HALF_ZERO_HALF_TWO, 3, 0).tree
        assert len(t.spine) == 4
        assert t.flags[t.spine[0]] is VertexFlag.RADIUS_BOUNDARY

    def test_needs_critical_law(self):
        with pytest.raises(SamplerError):
            sample_egwt(HALF_ZERO_HALF_ONE, 3, 0)
        with pytest.raises(SamplerError):
            sample_egwt(OffspringLaw.point_mass(1), 3, 0)


class TestEkt:
    def test_ecs_never_has_two_lines(self):
        for seed in range(30):
            t = sample_ekt(HALF_ZERO_HALF_ONE, HALF_ZERO_HALF_ONE, 4, True, seed).tree
            assert count_succession_lines(t) is not SuccessionLines.TWO

    def test_uniform_slots_give_two_lines(self):
        outcomes = [
            count_succession_lines(
                sample_ekt(HALF_ZERO_HALF_ONE, HALF_ZERO_HALF_ONE, 4, False, seed).tree
            )
            for seed in range(30)
        ]
        assert SuccessionLines.TWO in outcomes

    def test_spine_continues_below_the_root(self):
        t = sample_ekt(HALF_ZERO_HALF_ONE, OffspringLaw.point_mass(0), 3, True, 0).tree
        below = t.spine[t.spine.index(t.root) + 1 :]
        assert below
        assert t.parent[below[0]] == t.root

    def test_supercritical_beta_rejected(self):
        with pytest.raises(SamplerError):
            sample_ekt(HALF_ZERO_HALF_ONE, OffspringLaw.point_mass(2), 3, True, 0)


# ---- Re-rooting ----


class TestTypicalReroot:
    def test_root_is_uniform(self):
        proposal = fixed_proposal("[(),()]")
        roots = [typical_reroot(proposal, [4, i], size_cap=3).tree.root for i in range(900)]
        top_share = roots.count(0) / len(roots)
        # binomial sd is about 0.016
        assert top_share == pytest.approx(1 / 3, abs=0.07)

    def test_parent_links_kept(self):
        proposal = fixed_proposal("[(),()]")
        sample = typical_reroot(proposal, 0, size_cap=3)
        assert sample.tree.parent == (None, 0, 0)
        assert sample.meta.rejected_count == 0

    def test_rejections_are_counted(self):
        proposal = fixed_proposal("[]")
        sample = typical_reroot(proposal, 0, size_cap=8)
        assert sample.meta.size_cap == 8
        assert sample.meta.rejected_count >= 0

    def test_oversized_proposals_overflow(self):
        with pytest.raises(SamplerError):
            typical_reroot(fixed_proposal("[(),(),()]"), 0, size_cap=2, max_attempts=5)

    def test_unimodular_ekt_mean_degree_is_one(self):
        alpha = OffspringLaw.point_mass(1)
        beta = OffspringLaw.point_mass(0)
        trees = [unimodularised_ekt(alpha, beta, 2, [6, i], size_cap=4).tree for i in range(600)]
        mean = np.mean([t.out_degree(t.root) for t in trees])
        # root degree is 0 or 2 with equal chance, so the mean's sd is about 0.04
        assert mean == pytest.approx(1.0, abs=0.17)

    def test_unimodular_ekt_records_bush_size(self):
        sample = unimodularised_ekt(
            OffspringLaw.point_mass(1), OffspringLaw.point_mass(0), 2, 0, size_cap=4
        )
        assert sample.extras["bush_size"] == 2


# ---- Registry ----


class TestSamplerSpec:
    def test_unknown_family(self):
        with pytest.raises(SamplerError):
            SamplerSpec(family="nope")

    def test_missing_parameters(self):
        with pytest.raises(SamplerError):
            SamplerSpec(family="gw")(0)
        with pytest.raises(SamplerError):
            SamplerSpec(family="egwt", pi=[[0, 0.5], [2, 0.5]])(0)

    def test_dict_round_trip(self):
        spec = SamplerSpec.from_dict({"family": "tgwt", "pi": [[0, 0.5], [1, 0.5]], "seed": 4})
        assert SamplerSpec.from_dict(spec.to_dict()) == spec
        assert spec.with_radius(3).radius == 3

    def test_json_file(self, tmp_path):
        path = tmp_path / "sampler.json"
        path.write_text('{"family": "gw", "pi": [[0, 1.0]]}')
        assert serialize(SamplerSpec.from_json_file(str(path))(0).tree) == "[]"

    def test_batch_seeds(self):
        spec = SamplerSpec(family="gw", pi=[[0, 0.4], [1, 0.3], [2, 0.3]], seed=11)
        assert serialize(spec.sample(5).tree) == serialize(spec([11, 5]).tree)

    def test_record_window_matches_iid_window(self):
        law = [[-1, 0.5], [1, 0.5]]
        spec = SamplerSpec(family="record", law=law, radius=2)
        w = spec.window(7)
        reference = iid_window(IncrementLaw.from_atoms(law), 7)
        w.require(-50, 50)
        reference.require(-50, 50)
        assert np.array_equal(w.sums(-50, 50), reference.sums(-50, 50))

    def test_record_sample_is_rooted_at_zero(self):
        spec = SamplerSpec(family="record", law=[[-1, 0.75], [1, 0.25]], radius=3)
        sample = spec(0)
        assert sample.tree.labels[sample.tree.root] == 0
        lo, hi = sample.extras["window"]
        assert lo <= 0 <= hi

    def test_queue_window(self):
        spec = SamplerSpec(family="record_queue", queue={"lambda": 1.0, "mu": 2.0}, radius=2)
        assert spec.window(0).level_ceiling is not None
        assert spec(0).tree.labels[spec(0).tree.root] == 0

    def test_tree_families_have_no_window(self):
        with pytest.raises(SamplerError):
            SamplerSpec(family="gw", pi=[[0, 1.0]]).window(0)
        with pytest.raises(SamplerError):
            SamplerSpec(family="record").window(0)
