"""
Vectorised left/right scans over a TrajectoryWindow.

A scan reads sums chunk by chunk, extending the window on demand. When it runs off the
window it reports ProvedInfinite for a closed window and Censored otherwise. With a
certificate level, a stochastic scan may also stop early with ProvedInfinite once the
drift makes reaching that level negligibly likely.
"""

from functools import lru_cache
from typing import Callable, Optional

import numpy as np
import numpy.typing as npt

from increments import IncrementLaw, TrajectoryWindow
from recorder.recorder_types import (
    CensorReason,
    Censored,
    ProvedInfinite,
    RecorderConfig,
    Resolution,
    Resolved,
)
from walk_analytics import lundberg_rate

Mask = Callable[[npt.NDArray[np.int64]], npt.NDArray[np.bool_]]


@lru_cache(maxsize=256)
def _rate(law: IncrementLaw, direction: str) -> float:
    return lundberg_rate(law, direction)


def rise_rate(w: TrajectoryWindow) -> float:
    """Per-level bound on the future sums ever climbing, 1.0 when there is none."""
    return 1.0 if w.law is None else _rate(w.law, "up")


def drop_rate(w: TrajectoryWindow) -> float:
    """Per-level bound on the future sums ever falling (equivalently past sums rising)."""
    return 1.0 if w.law is None else _rate(w.law, "down")


def certified(rate: float, gap: int, scanned: int, config: RecorderConfig) -> bool:
    if gap <= 0 or scanned < config.confirmation_run:
        return False
    return bool(rate**gap <= config.certificate_tolerance)


def edge(w: TrajectoryWindow) -> Resolution[int]:
    return ProvedInfinite() if w.closed else Censored(CensorReason.WINDOW_BUDGET)


def scan_right(
    w: TrajectoryWindow,
    i: int,
    hit: Mask,
    config: RecorderConfig,
    certify_level: Optional[int] = None,
) -> Resolution[int]:
    """Smallest n > i whose sum S_n satisfies `hit`.

    With certify_level, stop with ProvedInfinite once the sums cannot plausibly rise to it.
    """
    rate = rise_rate(w)
    pos = i
    while True:
        if pos >= w.hi and not w.extend_right(pos + 1):
            return edge(w)
        seg = w.sums(pos + 1, w.hi)
        hits = np.flatnonzero(hit(seg))
        if hits.size:
            return Resolved(pos + 1 + int(hits[0]))
        pos = w.hi
        if certify_level is not None:
            if certified(rate, certify_level - w.s(pos), pos - i, config):
                return ProvedInfinite()


def scan_left(
    w: TrajectoryWindow,
    i: int,
    hit: Mask,
    config: RecorderConfig,
    certify_level: Optional[int] = None,
) -> Resolution[int]:
    """Largest m < i whose sum S_m satisfies `hit`.

    With certify_level, stop with ProvedInfinite once past sums cannot plausibly rise to it.
    """
    rate = drop_rate(w)
    pos = i
    while True:
        if pos <= w.lo and not w.extend_left(pos - 1):
            return edge(w)
        seg = w.sums(w.lo, pos - 1)
        hits = np.flatnonzero(hit(seg))
        if hits.size:
            return Resolved(w.lo + int(hits[-1]))
        pos = w.lo
        if certify_level is not None:
            if certified(rate, certify_level - w.s(pos), i - pos, config):
                return ProvedInfinite()


def scan_past_maximum(
    w: TrajectoryWindow, i: int, config: RecorderConfig
) -> Resolution[int]:
    """t_x(i): -1 as soon as some m < i has S_m > S_i, else S_i - sup_{m<i} S_m when certified.

    Certification comes from a closed window edge, the generator's level ceiling, or the
    drift bound on past sums ever exceeding the running maximum.
    """
    level = w.s(i)
    ceiling = w.level_ceiling
    rate = drop_rate(w)
    best: Optional[int] = None
    pos = i
    while True:
        if pos <= w.lo and not w.extend_left(pos - 1):
            if w.closed and best is not None:
                return Resolved(level - best)
            return Censored(CensorReason.WINDOW_BUDGET, None if best is None else level - best)
        seg = w.sums(w.lo, pos - 1)
        if np.any(seg > level):
            return Resolved(-1)
        seg_max = int(seg.max())
        best = seg_max if best is None else max(best, seg_max)
        pos = w.lo
        if ceiling is not None and level == ceiling and best == ceiling:
            return Resolved(0)
        if certified(rate, best + 1 - w.s(pos), i - pos, config):
            return Resolved(level - best)


def scan_future_minimum(
    w: TrajectoryWindow, i: int, config: RecorderConfig
) -> Resolution[int]:
    """Smallest k > i with S_k = min_{n > i} S_n, certified by the drift bound or a closed edge."""
    rate = drop_rate(w)
    best: Optional[int] = None
    best_idx = i
    pos = i
    while True:
        if pos >= w.hi and not w.extend_right(pos + 1):
            if w.closed:
                return ProvedInfinite() if best is None else Resolved(best_idx)
            return Censored(CensorReason.WINDOW_BUDGET)
        seg = w.sums(pos + 1, w.hi)
        arg = int(np.argmin(seg))
        if best is None or int(seg[arg]) < best:
            best = int(seg[arg])
            best_idx = pos + 1 + arg
        pos = w.hi
        if certified(rate, w.s(pos) - best + 1, pos - i, config):
            return Resolved(best_idx)
