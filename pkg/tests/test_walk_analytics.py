"""
Hitting probability, Doob transform, spine laws and the weak-record law.
"""

import pytest

from increments import IncrementLaw, LawKind
from walk_analytics import (
    AnalyticsError,
    HittingQuery,
    derive_pis,
    derived_laws,
    doob_transform,
    hitting_prob,
    hitting_prob_c,
    lundberg_rate,
    offspring_from_increment,
    simulate_hitting_fraction,
    stopped_path_probabilities,
    weak_record_enumerate,
    weak_record_joint,
)

# ---- Helpers ----


def law_grid():
    """Twenty skip-free laws with positive mean and support up to 3."""
    laws = []
    for q in (0.05, 0.1, 0.15, 0.2, 0.25):
        for top in (1, 2, 3):
            rest = 1.0 - q
            laws.append(IncrementLaw.from_atoms([[-1, q], [top, rest]]))
    for q in (0.1, 0.2, 0.3, 0.35, 0.4):
        atoms = [[-1, q], [0, 0.1], [1, 0.5 - q / 2], [2, 0.4 - q / 2]]
        laws.append(IncrementLaw.from_atoms(atoms))
    return laws


def atoms_dict(pi):
    return {k: p for k, p in pi.atoms}


# ---- Closed forms ----


class TestHittingProbability:
    def test_quadratic_root(self, positive_law):
        assert hitting_prob_c(positive_law) == pytest.approx(1 / 3, abs=1e-10)

    def test_no_positive_drift_means_certain_hit(self, negative_law, zero_law):
        assert hitting_prob_c(negative_law) == 1.0
        assert hitting_prob_c(zero_law) == 1.0

    def test_levels_multiply(self, positive_law):
        assert hitting_prob(positive_law, -3) == pytest.approx(1 / 27)
        assert hitting_prob(positive_law, 0) == 1.0
        with pytest.raises(AnalyticsError):
            hitting_prob(positive_law, 1)

    def test_root_is_harmonic_on_the_grid(self):
        for law in law_grid():
            c = hitting_prob_c(law)
            assert 0 < c < 1
            assert sum(p * c ** (v + 1) for v, p in law.atoms) == pytest.approx(c, abs=1e-10)

    def test_general_law_rejected(self):
        with pytest.raises(AnalyticsError):
            hitting_prob_c(IncrementLaw.from_atoms([[-2, 0.5], [3, 0.5]]))

    def test_monte_carlo_agrees(self, positive_law):
        fraction = simulate_hitting_fraction(positive_law, HittingQuery(-1, 2000), 20_000, 1)
        # sd of the fraction is about 0.0033
        assert fraction == pytest.approx(1 / 3, abs=0.015)

    def test_hitting_target_must_be_negative(self, positive_law):
        with pytest.raises(AnalyticsError):
            simulate_hitting_fraction(positive_law, HittingQuery(0, 10), 10, 0)
        with pytest.raises(AnalyticsError):
            HittingQuery(-1, -5)


class TestLundberg:
    def test_directions(self, negative_law, positive_law):
        assert lundberg_rate(negative_law, "up") == pytest.approx(1 / 3)
        assert lundberg_rate(positive_law, "down") == pytest.approx(1 / 3)
        assert lundberg_rate(positive_law, "up") == 1.0
        assert lundberg_rate(IncrementLaw.from_atoms([[0, 0.5], [1, 0.5]]), "down") == 0.0

    def test_general_law_root(self):
        law = IncrementLaw.from_atoms([[-2, 0.5], [1, 0.5]])
        r = lundberg_rate(law, "up")
        # E[r^(-X)] = 1
        assert 0.5 * r**2 + 0.5 * r**-1 == pytest.approx(1.0, abs=1e-9)
        assert 0 < r < 1

    def test_bad_direction(self, positive_law):
        with pytest.raises(AnalyticsError):
            lundberg_rate(positive_law, "sideways")


class TestDoobTransform:
    def test_example(self, positive_law):
        doob = doob_transform(positive_law)
        assert doob.kind is LawKind.SKIP_FREE
        assert doob.prob(-1) == pytest.approx(0.75)
        assert doob.prob(1) == pytest.approx(0.25)

    def test_grid_sums_to_one_with_negative_mean(self):
        for law in law_grid():
            doob = doob_transform(law)
            assert sum(p for _, p in doob.atoms) == pytest.approx(1.0, abs=1e-10)
            assert sum(v * p for v, p in doob.atoms) < 0

    def test_paths_are_reweighted_by_one_over_c(self, positive_law):
        c = hitting_prob_c(positive_law)
        doob = doob_transform(positive_law)
        base_paths = stopped_path_probabilities(positive_law, 7)
        doob_paths = stopped_path_probabilities(doob, 7)
        assert set(base_paths) == set(doob_paths)
        for path, p in base_paths.items():
            assert doob_paths[path] == pytest.approx(p / c)

    def test_needs_positive_mean(self, zero_law):
        with pytest.raises(AnalyticsError):
            doob_transform(zero_law)


class TestSpineLaws:
    def test_offspring_shift(self, positive_law):
        assert atoms_dict(offspring_from_increment(positive_law)) == {0: 0.25, 2: 0.75}

    def test_example(self, positive_law):
        pi_tilde, pi_bar = derive_pis(positive_law)
        assert atoms_dict(pi_tilde) == pytest.approx({0: 0.75, 2: 0.25})
        assert atoms_dict(pi_bar) == pytest.approx({0: 0.75, 1: 0.25})

    def test_zero_mean_uses_c_one(self, zero_law):
        pi_tilde, pi_bar = derive_pis(zero_law)
        assert atoms_dict(pi_tilde) == pytest.approx({0: 0.5, 2: 0.5})
        assert atoms_dict(pi_bar) == pytest.approx({0: 0.5, 1: 0.5})

    def test_grid_laws_are_distributions(self):
        for law in law_grid():
            pi_tilde, pi_bar = derive_pis(law)
            assert sum(p for _, p in pi_tilde.atoms) == pytest.approx(1.0, abs=1e-10)
            assert sum(p for _, p in pi_bar.atoms) == pytest.approx(1.0, abs=1e-10)

    def test_negative_mean_rejected(self, negative_law):
        with pytest.raises(AnalyticsError):
            derive_pis(negative_law)

    def test_derived_laws_bundle(self, negative_law, positive_law):
        negative = derived_laws(negative_law)
        assert negative.c == 1.0
        assert negative.doob == negative_law
        assert negative.pi_tilde is None
        positive = derived_laws(positive_law).to_dict()
        assert positive["c"] == pytest.approx(1 / 3)
        assert positive["doob_mean"] == pytest.approx(-0.5)
        assert [k for k, _ in positive["pi_bar"]] == [0, 1]
        assert [p for _, p in positive["pi_bar"]] == pytest.approx([0.75, 0.25])


class TestWeakRecord:
    def test_example(self, positive_law):
        assert weak_record_joint(positive_law, 0, 1) == pytest.approx(0.25)
        assert weak_record_joint(positive_law, 1, 1) == pytest.approx(0.75)

    def test_negative_mean_marginal(self, negative_law):
        k = 1
        total = sum(weak_record_joint(negative_law, j, k) for j in range(k + 1))
        assert total == pytest.approx((k + 1) * negative_law.prob(k))

    def test_order_of_arguments(self, positive_law):
        with pytest.raises(AnalyticsError):
            weak_record_joint(positive_law, 2, 1)

    def test_depth_one_is_the_first_step(self, positive_law):
        lower, _ = weak_record_enumerate(positive_law, 1, 1, 1)
        assert lower == pytest.approx(0.75)

    @pytest.mark.parametrize("j,k", [(0, 1), (1, 1), (0, 2), (1, 2), (2, 2)])
    def test_closed_form_is_bracketed(self, j, k):
        law = IncrementLaw.from_atoms([[-1, 0.25], [1, 0.5], [2, 0.25]])
        lower, residual = weak_record_enumerate(law, j, k, 30)
        closed = weak_record_joint(law, j, k)
        assert lower - 1e-12 <= closed <= lower + residual + 1e-12
        assert residual < 1e-3

    def test_bracket_holds_for_negative_mean(self, negative_law):
        lower, residual = weak_record_enumerate(negative_law, 0, 1, 30)
        assert lower <= weak_record_joint(negative_law, 0, 1) <= lower + residual
