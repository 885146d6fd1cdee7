"""
Increment laws and lazily extendable two-sided increment windows.
"""

from increments.increments_sources import IidSource, QueueChainSource, sample_stationary_level
from increments.increments_types import (
    IncrementLaw,
    IncrementLawError,
    LawKind,
    OffspringLaw,
    OutOfWindowError,
    QueueChainParams,
    SeedLike,
    WindowBudgetExhausted,
    WindowError,
    WindowSnapshot,
)
from increments.increments_utils import (
    drift_sign,
    fixed_window,
    iid_window,
    law_from_config,
    mean_of,
    partial_sum,
    queue_stationary_closed_form,
    queue_stationary_law,
    queue_transition_matrix,
    queue_window,
)
from increments.increments_window import TrajectoryWindow

__all__ = [
    "IidSource",
    "IncrementLaw",
    "IncrementLawError",
    "LawKind",
    "OffspringLaw",
    "OutOfWindowError",
    "QueueChainParams",
    "QueueChainSource",
    "SeedLike",
    "TrajectoryWindow",
    "WindowBudgetExhausted",
    "WindowError",
    "WindowSnapshot",
    "drift_sign",
    "fixed_window",
    "iid_window",
    "law_from_config",
    "mean_of",
    "partial_sum",
    "queue_stationary_closed_form",
    "queue_stationary_law",
    "queue_transition_matrix",
    "queue_window",
    "sample_stationary_level",
]
