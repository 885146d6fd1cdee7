from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Generic, Optional, TypeVar, Union

V = TypeVar("V")


class RecorderError(Exception):
    """A recorder operation was called outside its preconditions."""


class CensorReason(Enum):
    WINDOW_BUDGET = "window_budget"
    NODE_BUDGET = "node_budget"


@dataclass(frozen=True)
class Resolved(Generic[V]):
    value: V


@dataclass(frozen=True)
class ProvedInfinite:
    """No finite answer exists, backed by a certificate (closed window edge or drift bound)."""


@dataclass(frozen=True)
class Censored:
    reason: CensorReason
    bound: Optional[int] = None


Resolution = Union[Resolved[V], ProvedInfinite, Censored]


class VertexShiftKind(Enum):
    RECORD = "record"
    STRICT_RECORD = "strict_record"
    CLIMBING_POINT = "climbing_point"


class ChildrenMode(Enum):
    FORMULA = "formula"
    BRUTE_SCAN = "brute_scan"


class ExplorationClass(Enum):
    FINITE_COMPONENT_CERTIFIED = "finite_component_certified"
    SPINE_EVIDENCE = "spine_evidence"
    ALL_DESCENDANTS_FINITE_EVIDENCE = "all_descendants_finite_evidence"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class RecorderConfig:
    """Scan and exploration limits.

    A stochastic scan stops with a certificate once the chance of the observation being
    reversed later is at most `certificate_tolerance` and at least `confirmation_run`
    steps were scanned.
    """

    certificate_tolerance: float = 1e-12
    confirmation_run: int = 64
    node_budget: int = 10**6
    ancestor_depth: int = 8

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "RecorderConfig":
        return cls(
            certificate_tolerance=float(config_dict.get("certificate_tolerance", 1e-12)),
            confirmation_run=int(config_dict.get("confirmation_run", 64)),
            node_budget=int(config_dict.get("node_budget", 10**6)),
            ancestor_depth=int(config_dict.get("ancestor_depth", 8)),
        )


DEFAULT_RECORDER_CONFIG = RecorderConfig()


@dataclass
class VertexRow:
    """One line of the per-vertex JSONL table of a record ball."""

    index: Optional[int]
    parent: Optional[int]
    child_rank: Optional[int]
    type: Optional[int]
    L: Optional[int]
    censored: bool
