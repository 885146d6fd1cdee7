"""
Empirical ball laws, total variation, mass-transport and independence checks.
"""

from stats.stats_transport import (
    FIXED_TRANSPORTS,
    relative_path,
    transport_by_name,
    transport_family,
)
from stats.stats_types import (
    EmpiricalLaw,
    IndependenceReport,
    LawEstimate,
    MtpReport,
    ScalarEstimate,
    StatsError,
    TransportFunction,
)
from stats.stats_utils import (
    STATISTICS,
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
    scalar_estimate,
    transport_masses,
    tv_distance,
)

__all__ = [
    "FIXED_TRANSPORTS",
    "STATISTICS",
    "EmpiricalLaw",
    "IndependenceReport",
    "LawEstimate",
    "MtpReport",
    "ScalarEstimate",
    "StatsError",
    "TransportFunction",
    "collect",
    "collect_windows",
    "empirical_local_law",
    "independence_check",
    "independence_from_pairs",
    "law_differences",
    "law_estimate",
    "law_from_values",
    "mtp_check",
    "mtp_suite",
    "non_descendant_key",
    "relative_path",
    "scalar_estimate",
    "transport_by_name",
    "transport_family",
    "transport_masses",
    "tv_distance",
]
