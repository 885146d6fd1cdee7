"""
Exact samplers for GW, TGWT, EGWT and EKT trees, typical re-rooting and the
unimodularised EKT, all truncated to a radius around the root.
"""

from increments import OffspringLaw
from samplers.samplers_grow import BallGrower
from samplers.samplers_registry import SAMPLER_FAMILIES, SamplerSpec
from samplers.samplers_types import (
    DEFAULT_NODE_BUDGET,
    DEFAULT_SIZE_CAP,
    GrowthPlan,
    Sample,
    SampleMeta,
    SamplerError,
    TreeProposal,
    VertexRole,
)
from samplers.samplers_utils import (
    bush_plan,
    draw_tree,
    ekt_plan,
    expected_tree_size,
    gw_plan,
    gw_proposal,
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

__all__ = [
    "DEFAULT_NODE_BUDGET",
    "DEFAULT_SIZE_CAP",
    "SAMPLER_FAMILIES",
    "BallGrower",
    "GrowthPlan",
    "OffspringLaw",
    "Sample",
    "SampleMeta",
    "SamplerError",
    "SamplerSpec",
    "TreeProposal",
    "VertexRole",
    "bush_plan",
    "draw_tree",
    "ekt_plan",
    "expected_tree_size",
    "gw_plan",
    "gw_proposal",
    "sample_egwt",
    "sample_ekt",
    "sample_gw",
    "sample_tgwt",
    "shifted",
    "size_biased",
    "tgwt_ancestor_tail",
    "typical_reroot",
    "unimodularised_ekt",
]
