"""
Ordered family trees: RLS order, succession maps, text format and ball keys.
"""

from trees.trees_format import ball_key, parse, serialize
from trees.trees_types import (
    CensoredBallError,
    OrderedTree,
    Ordering,
    SuccessionLines,
    TreeBuilder,
    TreeError,
    TreeInvariantError,
    TreeParseError,
    VertexFlag,
)
from trees.trees_utils import (
    a_map,
    b_map,
    count_succession_lines,
    distances_from,
    foil_partition,
    restrict_to_ball,
    rls_compare,
    rls_sort,
    succession_window,
    with_root,
)

__all__ = [
    "CensoredBallError",
    "OrderedTree",
    "Ordering",
    "SuccessionLines",
    "TreeBuilder",
    "TreeError",
    "TreeInvariantError",
    "TreeParseError",
    "VertexFlag",
    "a_map",
    "b_map",
    "ball_key",
    "count_succession_lines",
    "distances_from",
    "foil_partition",
    "parse",
    "restrict_to_ball",
    "rls_compare",
    "rls_sort",
    "serialize",
    "succession_window",
    "with_root",
]
