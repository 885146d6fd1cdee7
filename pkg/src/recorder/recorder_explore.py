from collections import deque
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from increments import LawKind, TrajectoryWindow
from recorder.recorder_types import (
    DEFAULT_RECORDER_CONFIG,
    Censored,
    CensorReason,
    ChildrenMode,
    ExplorationClass,
    ProvedInfinite,
    RecorderConfig,
    Resolution,
    Resolved,
    VertexRow,
    VertexShiftKind,
)
from recorder.recorder_utils import (
    big_L,
    children_of,
    record_of,
    shift_children,
    shift_of,
    type_of,
)
from trees import OrderedTree, TreeBuilder, VertexFlag

ParentFn = Callable[[int], Resolution[int]]
ChildrenFn = Callable[[int], Resolution[List[int]]]


def _explore(
    parent_fn: ParentFn, children_fn: ChildrenFn, radius: int, node_budget: int
) -> OrderedTree:
    """Breadth-first ball around vertex 0 of a vertex-shift graph on the integers.

    Vertices closer than `radius` are expanded; those at `radius` are RADIUS_BOUNDARY,
    those left unexpanded by the node budget or with censored children are CENSORED,
    and those whose parent alone is censored are PARENT_CENSORED. Siblings are ordered
    by decreasing integer (eldest first).
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    dist: Dict[int, int] = {0: 0}
    parent: Dict[int, int] = {}
    flags: Dict[int, VertexFlag] = {}
    queue = deque([0])

    while queue:
        v = queue.popleft()
        if dist[v] >= radius:
            flags[v] = VertexFlag.RADIUS_BOUNDARY
            continue
        if len(dist) >= node_budget:
            flags[v] = VertexFlag.CENSORED
            continue

        parent_known = True
        flag = VertexFlag.INTERIOR
        up = parent_fn(v)
        if isinstance(up, Resolved):
            p = up.value
            if p not in dist:
                dist[p] = dist[v] + 1
                queue.append(p)
            parent[v] = p
        elif isinstance(up, Censored):
            parent_known = False

        down = children_fn(v)
        if isinstance(down, Resolved):
            for c in down.value:
                if c not in dist:
                    if len(dist) >= node_budget:
                        flag = VertexFlag.CENSORED
                        break
                    dist[c] = dist[v] + 1
                    queue.append(c)
                parent[c] = v
        else:
            flag = VertexFlag.CENSORED
        if flag is VertexFlag.INTERIOR and not parent_known:
            flag = VertexFlag.PARENT_CENSORED
        flags[v] = flag

    builder = TreeBuilder()
    ids = {label: builder.add_vertex(label=label, flag=flags[label]) for label in sorted(dist)}
    for label in sorted(dist, reverse=True):
        if label in parent:
            builder.attach(ids[label], ids[parent[label]])
    builder.root = ids[0]
    return builder.build()


def _mode_for(w: TrajectoryWindow) -> ChildrenMode:
    if w.law is not None and w.law.kind is not LawKind.SKIP_FREE:
        return ChildrenMode.BRUTE_SCAN
    return ChildrenMode.FORMULA


def component_ball(
    w: TrajectoryWindow,
    radius: int,
    node_budget: Optional[int] = None,
    config: RecorderConfig = DEFAULT_RECORDER_CONFIG,
    mode: ChildrenMode = ChildrenMode.FORMULA,
) -> OrderedTree:
    """Graph-distance ball of the record graph around 0, vertices labelled by index."""
    budget = config.node_budget if node_budget is None else node_budget
    if mode is ChildrenMode.FORMULA:
        mode = _mode_for(w)
    return _explore(
        lambda v: record_of(w, v, config),
        lambda v: children_of(w, v, mode, config),
        radius,
        budget,
    )


def shift_graph_ball(
    w: TrajectoryWindow,
    kind: VertexShiftKind,
    radius: int,
    node_budget: Optional[int] = None,
    config: RecorderConfig = DEFAULT_RECORDER_CONFIG,
) -> OrderedTree:
    budget = config.node_budget if node_budget is None else node_budget
    return _explore(
        lambda v: shift_of(w, kind, v, config),
        lambda v: shift_children(w, kind, v, config),
        radius,
        budget,
    )


def _spine_evidence(w: TrajectoryWindow, a: int, horizon: int, config: RecorderConfig) -> bool:
    t = type_of(w, a, config)
    if isinstance(t, Resolved) and t.value >= 0:
        return True
    if not w.ensure(a - horizon, a):
        return False
    return bool(np.all(w.sums(a - horizon, a - 1) <= w.s(a)))


def classify_exploration(
    w: TrajectoryWindow, horizon: int, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> ExplorationClass:
    """Heuristic class of the component of 0 from the ancestors R^k(0), k <= ancestor_depth.

    FINITE_COMPONENT_CERTIFIED when some ancestor provably has no record. SPINE_EVIDENCE
    when some ancestor's type is certified >= 0 or its left scan stays at or below its
    level for `horizon` steps. ALL_DESCENDANTS_FINITE_EVIDENCE when every examined
    ancestor resolves L. INCONCLUSIVE otherwise.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")

    ancestors = [0]
    for _ in range(config.ancestor_depth):
        up = record_of(w, ancestors[-1], config)
        if isinstance(up, ProvedInfinite):
            return ExplorationClass.FINITE_COMPONENT_CERTIFIED
        if not isinstance(up, Resolved) or up.value > horizon:
            break
        ancestors.append(up.value)

    if any(_spine_evidence(w, a, horizon, config) for a in ancestors):
        return ExplorationClass.SPINE_EVIDENCE
    if all(isinstance(big_L(w, a, config), Resolved) for a in ancestors):
        return ExplorationClass.ALL_DESCENDANTS_FINITE_EVIDENCE
    return ExplorationClass.INCONCLUSIVE


def ball_vertex_table(
    w: TrajectoryWindow, tree: OrderedTree, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> List[VertexRow]:
    """Per-vertex rows {index, parent, child_rank, type, L, censored} of a record ball."""
    rows: List[VertexRow] = []
    for v in tree.vertices():
        label = tree.labels[v]
        p = tree.parent[v]
        t: Optional[int] = None
        low: Optional[int] = None
        if label is not None and tree.is_interior(v):
            t_res = type_of(w, label, config)
            t = t_res.value if isinstance(t_res, Resolved) else None
            # L exists only below a larger past sum, i.e. for type -1
            if t == -1:
                l_res = big_L(w, label, config)
                low = l_res.value if isinstance(l_res, Resolved) else None
        rows.append(
            VertexRow(
                index=label,
                parent=None if p is None else tree.labels[p],
                child_rank=tree.child_rank(v),
                type=t,
                L=low,
                censored=not tree.is_interior(v),
            )
        )
    return rows


def spine_offspring(
    w: TrajectoryWindow, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> Resolution[Tuple[int, Optional[int]]]:
    """Bush sizes at the second spine vertex above 0.

    o_0 is the first ancestor R^k(0) with a certified type >= 0 and o_1 = R(o_0). Returns
    the number of non-spine children of o_1 and the number of children of the eldest of
    them (None when o_1 has no bush). o_0 carries the size-biased bush of 0, o_1 does not.
    """
    v = 0
    for _ in range(config.node_budget):
        t = type_of(w, v, config)
        if not isinstance(t, Resolved):
            return Censored(CensorReason.WINDOW_BUDGET)
        if t.value >= 0:
            break
        up = record_of(w, v, config)
        if not isinstance(up, Resolved):
            return Censored(CensorReason.WINDOW_BUDGET)
        v = up.value
    else:
        return Censored(CensorReason.NODE_BUDGET)

    o_1 = record_of(w, v, config)
    if not isinstance(o_1, Resolved):
        return Censored(CensorReason.WINDOW_BUDGET)
    children = children_of(w, o_1.value, _mode_for(w), config)
    if not isinstance(children, Resolved):
        return Censored(CensorReason.WINDOW_BUDGET)
    bush = [c for c in children.value if c != v]
    if not bush:
        return Resolved((0, None))
    eldest = children_of(w, bush[0], _mode_for(w), config)
    if not isinstance(eldest, Resolved):
        return Censored(CensorReason.WINDOW_BUDGET)
    return Resolved((len(bush), len(eldest.value)))
