"""
The record vertex-shift on integer sequences: R, L, t, l, children, balls and foils.
"""

from recorder.recorder_explore import (
    ball_vertex_table,
    classify_exploration,
    component_ball,
    shift_graph_ball,
    spine_offspring,
)
from recorder.recorder_types import (
    DEFAULT_RECORDER_CONFIG,
    Censored,
    CensorReason,
    ChildrenMode,
    ExplorationClass,
    ProvedInfinite,
    RecorderConfig,
    RecorderError,
    Resolution,
    Resolved,
    VertexRow,
    VertexShiftKind,
)
from recorder.recorder_utils import (
    big_L,
    children_of,
    climbing_point_of,
    descendants_interval,
    little_l,
    record_of,
    shift_children,
    shift_of,
    strict_record_of,
    type_of,
)
from trees import foil_partition

__all__ = [
    "DEFAULT_RECORDER_CONFIG",
    "Censored",
    "CensorReason",
    "ChildrenMode",
    "ExplorationClass",
    "ProvedInfinite",
    "RecorderConfig",
    "RecorderError",
    "Resolution",
    "Resolved",
    "VertexRow",
    "VertexShiftKind",
    "ball_vertex_table",
    "big_L",
    "children_of",
    "classify_exploration",
    "climbing_point_of",
    "component_ball",
    "descendants_interval",
    "foil_partition",
    "little_l",
    "record_of",
    "shift_children",
    "shift_graph_ball",
    "shift_of",
    "spine_offspring",
    "strict_record_of",
    "type_of",
]
