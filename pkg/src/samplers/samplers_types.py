from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional

import numpy as np

from increments import OffspringLaw, SeedLike
from trees import OrderedTree

DEFAULT_NODE_BUDGET = 100_000
DEFAULT_SIZE_CAP = 512
DEFAULT_MAX_ATTEMPTS = 10**6

# draws one finite tree from a generator; used as the proposal of size-biased rejection
TreeProposal = Callable[[np.random.Generator], OrderedTree]


class SamplerError(ValueError):
    """A sampler was asked for a law outside its regime."""


class VertexRole(Enum):
    ORDINARY = "ordinary"
    SPINE = "spine"


@dataclass(frozen=True)
class GrowthPlan:
    """How a spine-decorated random tree reproduces.

    Ordinary vertices have `base` children, all ordinary. A spine vertex entered from
    below has `spine_law` children in total, one of them the spine child below it, in
    the youngest slot when `ecs` is set and a uniform slot otherwise. The spine vertex
    at the root reproduces with `root_law` unless `eternal_down`, in which case it
    reproduces like any other spine vertex and the spine continues downward. Each spine
    vertex has a parent with probability `up_prob`.
    """

    base: OffspringLaw
    spine_law: OffspringLaw
    root_law: OffspringLaw
    up_prob: float
    eternal_down: bool = False
    ecs: bool = False
    root_role: VertexRole = VertexRole.SPINE
    annotate_spine: bool = True


@dataclass
class SampleMeta:
    seed: SeedLike
    node_budget: int
    rejected_count: int = 0
    overflow_count: int = 0
    censored: bool = False
    size_cap: Optional[int] = None


@dataclass
class Sample:
    """A sampled tree plus bookkeeping."""

    tree: OrderedTree
    meta: SampleMeta
    extras: Dict[str, Any] = field(default_factory=dict)
