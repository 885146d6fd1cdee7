"""
Deterministic increment generators backing a TrajectoryWindow.

Each source owns two independent streams: one walking right from index 0 and one
walking left. Values handed out by a stream never depend on how the caller chunks
its requests, so a window reads the same increments whatever order it is extended in.
"""

from typing import List, Optional, Protocol

import numpy as np
import numpy.typing as npt

from increments.increments_types import IncrementLaw, QueueChainParams, SeedLike

IntArray = npt.NDArray[np.int64]


class IncrementSource(Protocol):
    law: Optional[IncrementLaw]
    level_ceiling: Optional[int]

    def draw_right(self, count: int) -> IntArray:
        """Next `count` increments to the right, in increasing index order."""
        ...

    def draw_left(self, count: int) -> IntArray:
        """Next `count` increments to the left, moving away from 0 (x_{lo-1}, x_{lo-2}, ...)."""
        ...


def _draw_atoms(rng: np.random.Generator, law: IncrementLaw, count: int) -> IntArray:
    uniforms = rng.random(count)
    idx = np.searchsorted(law.cdf, uniforms, side="right")
    idx = np.minimum(idx, len(law.atoms) - 1)
    return law.values[idx]


class IidSource:
    """I.i.d. draws from a finite-support law; the law is carried for drift certificates."""

    def __init__(self, law: IncrementLaw, seed: SeedLike):
        self.law: Optional[IncrementLaw] = law
        self.level_ceiling: Optional[int] = None
        right_seq, left_seq = np.random.SeedSequence(seed).spawn(2)
        self._right = np.random.default_rng(right_seq)
        self._left = np.random.default_rng(left_seq)

    def draw_right(self, count: int) -> IntArray:
        assert self.law is not None
        return _draw_atoms(self._right, self.law, count)

    def draw_left(self, count: int) -> IntArray:
        assert self.law is not None
        return _draw_atoms(self._left, self.law, count)


class QueueChainSource:
    """Stationary embedded jump chain of an M/M/1 queue, emitting X_n = N_n - N_{n+1}.

    The stationary birth-death jump chain is reversible, so the left stream runs the
    same kernel backwards from the shared starting level N_0. Since S_n = N_0 - N_n,
    every partial sum is bounded above by N_0.
    """

    def __init__(self, params: QueueChainParams, seed: SeedLike):
        self.params = params
        self.law: Optional[IncrementLaw] = None
        start_seq, right_seq, left_seq = np.random.SeedSequence(seed).spawn(3)
        self.start_level = sample_stationary_level(params, np.random.default_rng(start_seq))
        self.level_ceiling: Optional[int] = self.start_level
        self._right = np.random.default_rng(right_seq)
        self._left = np.random.default_rng(left_seq)
        self._right_level = self.start_level
        self._left_level = self.start_level

    def _walk(self, rng: np.random.Generator, level: int, count: int) -> tuple[IntArray, int]:
        uniforms = rng.random(count)
        up = self.params.up_prob
        steps: List[int] = []
        for u in uniforms:
            if level == 0 or u < up:
                steps.append(1)
                level += 1
            else:
                steps.append(-1)
                level -= 1
        return np.asarray(steps, dtype=np.int64), level

    def draw_right(self, count: int) -> IntArray:
        # N_{n+1} - N_n = step, so X_n = -step
        steps, self._right_level = self._walk(self._right, self._right_level, count)
        return -steps

    def draw_left(self, count: int) -> IntArray:
        # stepping from N_n back to N_{n-1}: X_{n-1} = N_{n-1} - N_n = step
        steps, self._left_level = self._walk(self._left, self._left_level, count)
        return steps


def sample_stationary_level(params: QueueChainParams, rng: np.random.Generator) -> int:
    """Draw N_0 from the jump chain's stationary law (atom at 0, geometric tail)."""
    empty_prob = (params.mu - params.lam) / (2 * params.mu)
    if rng.random() < empty_prob:
        return 0
    return int(rng.geometric(1.0 - params.load))
