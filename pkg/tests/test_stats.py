"""
Empirical local laws, mass-transport checks, the independence check and scalar estimates.
"""

from collections import Counter

import pytest

from experiments import RunSettings, record_spec, reference_spec
from experiments.experiments_utils import TV_LIMITS
from increments import IncrementLaw, drift_sign
from recorder import Resolved, spine_offspring
from samplers import SamplerError, SamplerSpec, size_biased
from stats import (
    FIXED_TRANSPORTS,
    STATISTICS,
    EmpiricalLaw,
    LawEstimate,
    StatsError,
    collect,
    collect_windows,
    empirical_local_law,
    independence_check,
    independence_from_pairs,
    law_differences,
    law_estimate,
    law_from_values,
    mtp_check,
    mtp_suite,
    non_descendant_key,
    relative_path,
    scalar_estimate,
    transport_by_name,
    transport_family,
    transport_masses,
    tv_distance,
)
from trees import TreeError, ball_key, parse, with_root
from utils.parallel_utils import default_threads
from walk_analytics import derived_laws

COMPONENT = "0[-1(),-2(),-3(-4(),-5())]"

TGWT = SamplerSpec(family="tgwt", pi=[[0, 0.5], [1, 0.5]])


def law(radius, **counts):
    return EmpiricalLaw(radius=radius, counts=Counter(counts))


@pytest.fixture
def component():
    return parse(COMPONENT)


# ---- Empirical laws ----


class TestEmpiricalLaw:
    def test_from_keys_counts_censored_samples_apart(self):
        empirical = EmpiricalLaw.from_keys(["a", None, "a", "b"], 1)
        assert empirical.total == 3
        assert empirical.dropped == 1
        assert empirical.prob("a") == pytest.approx(2 / 3)
        assert empirical.prob("zzz") == 0.0

    def test_merge(self):
        a = law(1, x=1)
        a.merge(law(1, x=1, y=2))
        assert a.counts == Counter(x=2, y=2)
        with pytest.raises(StatsError):
            a.merge(law(2, x=1))

    def test_empty_law(self):
        with pytest.raises(StatsError):
            EmpiricalLaw(radius=0).probabilities()

    def test_local_law_of_a_point_mass(self):
        spec = SamplerSpec(family="gw", pi=[[2, 1.0]], radius=1)
        empirical = empirical_local_law(spec, 1, 20, 0)
        assert empirical.probabilities() == {"v1:<-|*,*>": 1.0}
        assert empirical.dropped == 0

    def test_radius_must_be_non_negative(self):
        with pytest.raises(StatsError):
            empirical_local_law(TGWT, -1, 5, 0)


class TestTvDistance:
    def test_same_law(self):
        assert tv_distance(law(1, a=3, b=1), law(1, a=6, b=2)) == 0.0

    def test_disjoint_laws(self):
        assert tv_distance(law(1, a=1), law(1, b=1)) == 1.0

    def test_symmetric(self):
        a, b = law(1, a=3, b=1), law(1, a=1, c=1)
        assert tv_distance(a, b) == pytest.approx(tv_distance(b, a))
        assert tv_distance(a, b) == pytest.approx(0.5 * (0.25 + 0.25 + 0.5))

    def test_radius_mismatch(self):
        with pytest.raises(StatsError):
            tv_distance(law(1, a=1), law(2, a=1))

    def test_differences_largest_first(self):
        rows = law_differences(law(1, a=3, b=1), law(1, a=1, b=1, c=2))
        assert [row["key"] for row in rows] == ["a", "c", "b"]
        assert law_differences(law(1, a=1), law(1, b=1), top=1)[0]["key"] == "a"


# ---- Mass transport ----


class TestTransports:
    def test_family_names(self):
        assert [h.name for h in transport_family(2)] == ["identity", "parent"]
        names = [h.name for h in transport_family(8, seed=3)]
        assert names == [*FIXED_TRANSPORTS, "random_0", "random_1"]

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            transport_by_name("teleport")

    def test_relative_path(self, component):
        assert relative_path(component, 4, 2, 5) == "^^.2"
        assert relative_path(component, 0, 4, 5) == ".3.1"
        assert relative_path(component, 0, 4, 1) is None
        assert relative_path(component, 3, 3, 0) == ""

    def test_random_weights_are_fixed_by_seed(self, component):
        h = transport_by_name("random_0", seed=5)
        again = transport_by_name("random_0", seed=5)
        value = h(component, 4, 5)
        assert 0.0 <= value < 1.0
        assert again(component, 4, 5) == value
        # more than two steps apart
        assert h(component, 4, 1) == 0.0

    def test_masses_at_the_root(self, component):
        assert transport_masses(transport_by_name("parent"), component) == (0.0, 3.0)
        assert transport_masses(transport_by_name("child"), component) == (3.0, 0.0)
        assert transport_masses(transport_by_name("identity"), component) == (1.0, 1.0)

    def test_unresolved_ball_gives_none(self):
        ball = parse("0[~-1(),~-2()]")
        assert transport_masses(transport_by_name("parent"), ball) is None


class TestMtp:
    def test_identity_is_balanced(self):
        report = mtp_check(TGWT, transport_by_name("identity"), 50, 0)
        assert report.z_score == 0.0
        assert report.passed(4.0)

    def test_typical_tree_passes_the_suite(self):
        reports = mtp_suite(TGWT, transport_family(8, seed=1), 1500, 2)
        for report in reports:
            assert report.dropped == 0
            assert report.passed(4.5), report

    def test_plain_gw_fails_the_parent_transport(self):
        gw = SamplerSpec(family="gw", pi=[[0, 0.5], [2, 0.5]], radius=2)
        report = mtp_check(gw, transport_by_name("parent"), 200, 0)
        # the root never sends and receives one unit per child
        assert report.mean_out == 0.0
        assert report.z_score < -5
        assert not report.passed(4.0)

    def test_all_censored(self):
        gw = SamplerSpec(family="gw", pi=[[2, 1.0]], radius=0)
        with pytest.raises(StatsError):
            mtp_check(gw, transport_by_name("parent"), 5, 0)


# ---- Independence ----


class TestIndependence:
    def test_dependent_pairs(self):
        left = [i % 2 for i in range(200)]
        tv, p_value = independence_from_pairs(left, left, 200, 0)
        assert tv == pytest.approx(0.5)
        assert p_value == pytest.approx(1 / 201)

    def test_independent_pairs(self):
        left = [i % 2 for i in range(200)]
        right = [str((i // 2) % 2) for i in range(200)]
        tv, p_value = independence_from_pairs(left, right, 50, 0)
        assert tv == pytest.approx(0.0)
        assert p_value == 1.0

    def test_length_mismatch(self):
        with pytest.raises(StatsError):
            independence_from_pairs([1, 2], [1], 10, 0)

    def test_non_descendant_key(self, component):
        rerooted = with_root(component, 3)
        expected = ball_key(with_root(parse("[(),(),()]"), 3), r=2)
        assert non_descendant_key(2, rerooted) == (2, expected)
        with pytest.raises(TreeError):
            non_descendant_key(2, parse("?[]"))

    def test_single_vertex_trees(self):
        spec = SamplerSpec(family="gw", pi=[[0, 1.0]])
        report = independence_check(spec, 20, 0, permutations=20)
        assert report.n == 20
        assert report.tv == 0.0
        assert report.p_value == 1.0


# ---- Scalar statistics ----


class TestScalarEstimates:
    def test_statistics_on_a_fixed_tree(self, component):
        leaf = with_root(component, 4)
        assert STATISTICS["root_degree"](component) == 3.0
        assert STATISTICS["has_parent"](component) == 0.0
        assert STATISTICS["ancestor_count"](leaf) == 2.0
        assert STATISTICS["subtree_size"](component) == 6.0
        assert STATISTICS["parent_degree"](leaf) == 2.0
        assert STATISTICS["parent_degree"](component) is None

    def test_tgwt_parent_rate(self):
        estimate = scalar_estimate(TGWT, "has_parent", 800, 3)
        assert estimate.mean == pytest.approx(0.5, abs=0.08)
        low, high = estimate.interval
        assert low < estimate.mean < high

    def test_estimate_fields_are_plain_floats(self):
        estimate = scalar_estimate(TGWT, "has_parent", 200, 0)
        assert type(estimate.ci95) is float
        assert type(estimate.stderr) is float
        assert "np.float64" not in repr(estimate)
        assert estimate.within(estimate.mean)

    def test_unknown_statistic(self):
        with pytest.raises(StatsError):
            scalar_estimate(TGWT, "height", 10, 0)

    def test_collect_drops_unresolved_samples(self):
        spec = SamplerSpec(family="gw", pi=[[2, 1.0]], radius=0)
        kept, dropped = collect(spec, STATISTICS["root_degree"], 10, 0)
        assert kept == []
        assert dropped == 10

    def test_collect_needs_samples(self):
        with pytest.raises(StatsError):
            collect(TGWT, STATISTICS["root_degree"], 0, 0)


class TestLawEstimate:
    def test_from_values_drops_none(self):
        estimate = law_from_values("d", [1, 2, 2, None, 0])
        assert estimate.counts == {0: 1, 1: 1, 2: 2}
        assert estimate.n == 4
        assert estimate.dropped == 1
        assert estimate.frequency(2) == 0.5

    def test_exact_match_passes(self):
        estimate = LawEstimate("d", counts={0: 25, 2: 75}, n=100, dropped=0)
        assert estimate.within({0: 0.25, 2: 0.75})
        assert estimate.max_z({0: 0.25, 2: 0.75}) == 0.0

    def test_z_scores(self):
        estimate = LawEstimate("d", counts={0: 40, 2: 60}, n=100, dropped=0)
        # sigma = sqrt(0.25 * 0.75 / 100)
        scores = estimate.z_scores({0: 0.25, 2: 0.75})
        assert scores[0] == pytest.approx(0.15 / 0.0433012702, rel=1e-6)
        assert not estimate.within({0: 0.25, 2: 0.75})

    def test_atom_outside_the_support_fails(self):
        estimate = LawEstimate("d", counts={2: 99, 1: 1}, n=100, dropped=0)
        assert estimate.z_scores({2: 1.0})[1] == float("inf")
        assert not estimate.within({2: 1.0})

    def test_empty_estimate_fails(self):
        assert not law_from_values("d", [None]).within({0: 1.0})

    def test_tgwt_root_degree_law(self):
        # root of TGWT({0: 0.5, 1: 0.5}) draws its children from pi
        estimate = law_estimate(TGWT, "root_degree", 1000, 7)
        assert estimate.within({0: 0.5, 1: 0.5}, sigmas=4.0)

    def test_collect_windows_needs_a_record_sampler(self):
        with pytest.raises(SamplerError):
            collect_windows(TGWT, lambda w: 0, 5, 0)


# ---- Acceptance scale ----


ACCEPTANCE_N = 200_000
SETTINGS = RunSettings()


@pytest.mark.slow
@pytest.mark.parametrize(
    "atoms",
    [
        [[-1, 0.75], [1, 0.25]],
        [[-1, 0.6], [0, 0.2], [1, 0.2]],
        [[-1, 0.5], [1, 0.5]],
        [[-1, 0.25], [1, 0.75]],
    ],
    ids=["negative", "negative_lazy", "zero", "positive"],
)
def test_record_balls_match_the_reference_tree(atoms):
    increments = IncrementLaw.from_atoms(atoms)
    record = empirical_local_law(
        record_spec(increments, 2, SETTINGS, 10), 2, ACCEPTANCE_N, 0, default_threads()
    )
    reference = empirical_local_law(
        reference_spec(increments, 2, SETTINGS, 512), 2, ACCEPTANCE_N, 1, default_threads()
    )
    assert tv_distance(record, reference) < TV_LIMITS[drift_sign(increments)]


@pytest.mark.slow
@pytest.mark.parametrize(
    "atoms",
    [[[-1, 0.75], [1, 0.25]], [[-1, 0.6], [0, 0.2], [1, 0.2]]],
    ids=["negative", "negative_lazy"],
)
def test_negative_drift_parent_statistics(atoms):
    increments = IncrementLaw.from_atoms(atoms)
    spec = record_spec(increments, 2, SETTINGS, 10)
    derived = derived_laws(increments)

    parents = scalar_estimate(spec, "has_parent", ACCEPTANCE_N, 2, default_threads())
    # P[no parent] = -E[X_0]
    assert parents.within(1.0 + float(derived.mean))

    degrees = law_estimate(spec, "parent_degree", ACCEPTANCE_N, 3, default_threads())
    expected = {int(k): float(p) for k, p in size_biased(derived.offspring).atoms}
    assert degrees.within(expected), degrees.to_dict(expected)


@pytest.mark.slow
def test_zero_drift_root_degree_is_independent_of_the_rest():
    spec = record_spec(IncrementLaw.from_atoms([[-1, 0.5], [1, 0.5]]), 2, SETTINGS, 10)
    report = independence_check(spec, ACCEPTANCE_N, 4, radius=2, threads=default_threads())
    assert report.tv < 0.02


@pytest.mark.slow
def test_positive_drift_spine_and_bush_offspring():
    increments = IncrementLaw.from_atoms([[-1, 0.25], [1, 0.75]])
    spec = record_spec(increments, 2, SETTINGS, 10)
    derived = derived_laws(increments)
    assert derived.pi_bar is not None and derived.pi_tilde is not None

    def reduce(w):
        found = spine_offspring(w)
        return found.value if isinstance(found, Resolved) else None

    pairs, _ = collect_windows(spec, reduce, ACCEPTANCE_N, 5)
    spine = law_from_values("spine_offspring", [a for a, _ in pairs])
    bush = law_from_values("bush_offspring", [b for _, b in pairs])
    pi_bar = {int(k): float(p) for k, p in derived.pi_bar.atoms}
    pi_tilde = {int(k): float(p) for k, p in derived.pi_tilde.atoms}
    assert spine.within(pi_bar), spine.to_dict(pi_bar)
    assert bush.within(pi_tilde), bush.to_dict(pi_tilde)
