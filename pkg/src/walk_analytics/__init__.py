"""
Closed-form analytics for skip-free walks and their brute-force oracles.
"""

from walk_analytics.walk_analytics_enumerate import (
    stopped_path_probabilities,
    weak_record_enumerate,
)
from walk_analytics.walk_analytics_types import AnalyticsError, DerivedLaws, HittingQuery
from walk_analytics.walk_analytics_utils import (
    derive_pis,
    derived_laws,
    doob_transform,
    hitting_prob,
    hitting_prob_c,
    lundberg_rate,
    offspring_from_increment,
    simulate_hitting_fraction,
    weak_record_joint,
)

__all__ = [
    "AnalyticsError",
    "DerivedLaws",
    "HittingQuery",
    "derive_pis",
    "derived_laws",
    "doob_transform",
    "hitting_prob",
    "hitting_prob_c",
    "lundberg_rate",
    "offspring_from_increment",
    "simulate_hitting_fraction",
    "stopped_path_probabilities",
    "weak_record_joint",
    "weak_record_enumerate",
]
