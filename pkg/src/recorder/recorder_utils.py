from typing import List, Tuple

import numpy as np

from increments import LawKind, TrajectoryWindow
from recorder.recorder_scan import (
    scan_future_minimum,
    scan_left,
    scan_past_maximum,
    scan_right,
)
from recorder.recorder_types import (
    DEFAULT_RECORDER_CONFIG,
    CensorReason,
    Censored,
    ChildrenMode,
    ProvedInfinite,
    RecorderConfig,
    RecorderError,
    Resolution,
    Resolved,
    VertexShiftKind,
)


def _ensure_index(w: TrajectoryWindow, i: int) -> bool:
    return w.contains(i) or w.ensure(min(i, w.lo), max(i, w.hi))


def record_of(
    w: TrajectoryWindow, i: int, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> Resolution[int]:
    """R(i) = inf{n > i : S_n >= S_i}.

    ProvedInfinite only under a drift certificate or at the edge of a closed window.
    """
    if not _ensure_index(w, i):
        return Censored(CensorReason.WINDOW_BUDGET)
    level = w.s(i)
    return scan_right(w, i, lambda seg: seg >= level, config, certify_level=level)


def strict_record_of(
    w: TrajectoryWindow, i: int, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> Resolution[int]:
    """SR(i) = inf{n > i : S_n > S_i}."""
    if not _ensure_index(w, i):
        return Censored(CensorReason.WINDOW_BUDGET)
    level = w.s(i) + 1
    return scan_right(w, i, lambda seg: seg >= level, config, certify_level=level)


def climbing_point_of(
    w: TrajectoryWindow, i: int, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> Resolution[int]:
    """C(i): the smallest k > i with S_k = min{S_n : n > i}."""
    if not _ensure_index(w, i):
        return Censored(CensorReason.WINDOW_BUDGET)
    return scan_future_minimum(w, i, config)


def shift_of(
    w: TrajectoryWindow,
    kind: VertexShiftKind,
    i: int,
    config: RecorderConfig = DEFAULT_RECORDER_CONFIG,
) -> Resolution[int]:
    if kind is VertexShiftKind.RECORD:
        return record_of(w, i, config)
    if kind is VertexShiftKind.STRICT_RECORD:
        return strict_record_of(w, i, config)
    return climbing_point_of(w, i, config)


def big_L(
    w: TrajectoryWindow, i: int, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> Resolution[int]:
    """L_x(i) = inf{j < i : S_k <= S_i for all j <= k < i}; never ProvedInfinite."""
    if not _ensure_index(w, i):
        return Censored(CensorReason.WINDOW_BUDGET)
    level = w.s(i)
    found = scan_left(w, i, lambda seg: seg > level, config)
    if isinstance(found, Resolved):
        return Resolved(found.value + 1)
    if isinstance(found, ProvedInfinite):
        # closed window: the descendants run to the first index
        return Resolved(w.lo)
    return found


def type_of(
    w: TrajectoryWindow, i: int, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> Resolution[int]:
    """t_x(i) = inf_{m<i} max(y(m, i), -1), with an early exit at -1."""
    if not _ensure_index(w, i):
        return Censored(CensorReason.WINDOW_BUDGET)
    return scan_past_maximum(w, i, config)


def little_l(
    w: TrajectoryWindow, i: int, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> Resolution[int]:
    """l_x(i): the largest m < i with y(m, i) = t_x(i)."""
    t = type_of(w, i, config)
    if not isinstance(t, Resolved):
        return t
    target = w.s(i) - t.value
    found = scan_left(w, i, lambda seg: seg == target, config)
    if isinstance(found, ProvedInfinite):
        return Censored(CensorReason.WINDOW_BUDGET)
    return found


def _check_skip_free(w: TrajectoryWindow, lo: int, hi: int) -> None:
    law = w.law
    if law is not None:
        if law.kind is not LawKind.SKIP_FREE:
            raise RecorderError("Formula mode needs a skip-free law")
        return
    if hi > lo and int(w.increments(lo, hi).min()) < -1:
        raise RecorderError("Formula mode needs increments >= -1")


def _search_range(
    w: TrajectoryWindow, i: int, config: RecorderConfig
) -> Resolution[Tuple[int, int]]:
    """(first index that may hold a child of i, max(t_x(i), 0)).

    The nearest m < i with S_m >= S_i bounds the children from the left and forces
    t_x(i) <= 0, which is all the count needs. Without such an m the type is certified
    and the children start at l_x(i).
    """
    level = w.s(i)
    blocker = scan_left(w, i, lambda seg: seg >= level, config, certify_level=level)
    if isinstance(blocker, Resolved):
        return Resolved((blocker.value, 0))
    t = type_of(w, i, config)
    if not isinstance(t, Resolved):
        return Censored(CensorReason.WINDOW_BUDGET)
    low = little_l(w, i, config)
    if not isinstance(low, Resolved):
        return Censored(CensorReason.WINDOW_BUDGET)
    return Resolved((low.value, max(t.value, 0)))


def _scan_children(
    w: TrajectoryWindow, i: int, config: RecorderConfig
) -> Resolution[List[int]]:
    # with t_x(i) >= 0 there is no L_x(i); nothing left of l_x(i) can reach i
    t = type_of(w, i, config)
    if isinstance(t, Resolved) and t.value >= 0:
        low = little_l(w, i, config)
    else:
        low = big_L(w, i, config)
    if not isinstance(low, Resolved):
        return low
    s_i = w.s(i)
    found: List[int] = []
    for j in range(i - 1, low.value - 1, -1):
        # S_i < S_j puts R(j) past i
        if s_i < w.s(j):
            continue
        parent = record_of(w, j, config)
        if isinstance(parent, Censored):
            return Censored(CensorReason.WINDOW_BUDGET)
        if isinstance(parent, Resolved) and parent.value == i:
            found.append(j)
    return Resolved(found)


def children_of(
    w: TrajectoryWindow,
    i: int,
    mode: ChildrenMode = ChildrenMode.FORMULA,
    config: RecorderConfig = DEFAULT_RECORDER_CONFIG,
) -> Resolution[List[int]]:
    """Children of i under R, in descending (eldest first) order.

    FORMULA needs a skip-free sequence: there are x_{i-1} + 1 - max(t, 0) children and
    the m-th is the largest j in range with S_j = S_i - (x_{i-1} + 1 - m). BRUTE_SCAN
    calls record_of on every j in [L_x(i), i - 1] and keeps those with R(j) = i, so it
    holds for any law. A vertex of type t_x(i) >= 0 has an infinite descendant set and
    is scanned from l_x(i) instead.
    """
    if not _ensure_index(w, i) or not _ensure_index(w, i - 1):
        if w.closed and i == w.lo:
            return Resolved([])
        return Censored(CensorReason.WINDOW_BUDGET)

    if mode is ChildrenMode.BRUTE_SCAN:
        return _scan_children(w, i, config)

    span = _search_range(w, i, config)
    if not isinstance(span, Resolved):
        return span
    lo, type_floor = span.value
    hi = i - 1

    _check_skip_free(w, lo, i)
    count = w.x(i - 1) + 1 - type_floor
    sums = w.sums(lo, hi)
    s_i = w.s(i)
    children: List[int] = []
    for m in range(1, count + 1):
        matches = np.flatnonzero(sums == s_i - (w.x(i - 1) + 1 - m))
        if not matches.size:
            raise RecorderError(f"No child at rank {m} of vertex {i}")
        children.append(lo + int(matches[-1]))
    return Resolved(children)


def descendants_interval(
    w: TrajectoryWindow, i: int, config: RecorderConfig = DEFAULT_RECORDER_CONFIG
) -> Resolution[Tuple[int, int]]:
    """[L_x(i), i], the full descendant set of i under R."""
    low = big_L(w, i, config)
    if not isinstance(low, Resolved):
        return low
    return Resolved((low.value, i))


def shift_children(
    w: TrajectoryWindow,
    kind: VertexShiftKind,
    i: int,
    config: RecorderConfig = DEFAULT_RECORDER_CONFIG,
) -> Resolution[List[int]]:
    """Children of i under a vertex-shift by brute scan, eldest (largest) first.

    Candidates sit between i and the nearest index to the left that blocks them:
    for R the first S_m > S_i, for SR the first S_m >= S_i, and for C the first
    S_m <= S_i (which is itself a candidate).
    """
    if kind is VertexShiftKind.RECORD:
        return children_of(w, i, ChildrenMode.BRUTE_SCAN, config)
    if not _ensure_index(w, i):
        return Censored(CensorReason.WINDOW_BUDGET)

    level = w.s(i)
    if kind is VertexShiftKind.STRICT_RECORD:
        blocker = scan_left(w, i, lambda seg: seg >= level, config)
        first_candidate_offset = 1
    else:
        blocker = scan_left(w, i, lambda seg: seg <= level, config)
        first_candidate_offset = 0

    if isinstance(blocker, Resolved):
        lo = blocker.value + first_candidate_offset
    elif isinstance(blocker, ProvedInfinite) and w.closed:
        lo = w.lo
    else:
        return Censored(CensorReason.WINDOW_BUDGET)

    found: List[int] = []
    for j in range(i - 1, lo - 1, -1):
        r = shift_of(w, kind, j, config)
        if isinstance(r, Censored):
            return Censored(CensorReason.WINDOW_BUDGET)
        if isinstance(r, Resolved) and r.value == i:
            found.append(j)
    return Resolved(found)
