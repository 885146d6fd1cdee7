from typing import Optional

import numpy as np
import numpy.typing as npt

from increments.increments_sources import IncrementSource, IntArray
from increments.increments_types import (
    IncrementLaw,
    OutOfWindowError,
    WindowBudgetExhausted,
    WindowSnapshot,
)

DEFAULT_CHUNK = 4096
DEFAULT_EXTENSION_BUDGET = 10


class TrajectoryWindow:
    """Lazily extendable two-sided window of increments x_n, n in [lo, hi), with sums S_n.

    S_0 = 0 and S_{n+1} - S_n = x_n. Growth doubles the covered side (at least `chunk`
    new values per extension) and every extension spends one unit of `extension_budget`.
    A window is single-writer; call `freeze()` before sharing it.
    """

    def __init__(
        self,
        source: Optional[IncrementSource],
        extension_budget: int = DEFAULT_EXTENSION_BUDGET,
        chunk: int = DEFAULT_CHUNK,
        closed: bool = False,
    ):
        self.source = source
        self.extension_budget = extension_budget
        self.chunk = chunk
        # a closed window holds the whole sequence: nothing exists past its edges
        self.closed = closed
        self._lo = 0
        self._hi = 0
        self._x: IntArray = np.zeros(0, dtype=np.int64)
        self._s: IntArray = np.zeros(1, dtype=np.int64)

    @classmethod
    def from_values(cls, values: npt.ArrayLike, lo: int, closed: bool) -> "TrajectoryWindow":
        x = np.asarray(values, dtype=np.int64)
        hi = lo + len(x)
        if not lo <= 0 <= hi:
            raise OutOfWindowError(f"Fixed window [{lo}, {hi}] must contain index 0")
        window = cls(source=None, extension_budget=0, closed=closed)
        window._lo, window._hi, window._x = lo, hi, x
        sums = np.concatenate(([0], np.cumsum(x)))
        window._s = sums - sums[-lo]
        return window

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        return self._hi

    @property
    def law(self) -> Optional[IncrementLaw]:
        return self.source.law if self.source is not None else None

    @property
    def level_ceiling(self) -> Optional[int]:
        return self.source.level_ceiling if self.source is not None else None

    @property
    def can_extend(self) -> bool:
        return self.source is not None and self.extension_budget > 0

    def freeze(self) -> None:
        self.extension_budget = 0

    def _spend(self) -> bool:
        if not self.can_extend:
            return False
        self.extension_budget -= 1
        return True

    def extend_right(self, min_hi: int) -> bool:
        """Grow until hi >= min_hi; False when the budget or the source runs out first."""
        while self._hi < min_hi:
            if not self._spend():
                return False
            assert self.source is not None
            count = max(self.chunk, self._hi - self._lo, min_hi - self._hi)
            new_x = self.source.draw_right(count)
            new_s = self._s[-1] + np.cumsum(new_x)
            self._x = np.concatenate((self._x, new_x))
            self._s = np.concatenate((self._s, new_s))
            self._hi += count
        return True

    def extend_left(self, max_lo: int) -> bool:
        """Grow until lo <= max_lo; False when the budget or the source runs out first."""
        while self._lo > max_lo:
            if not self._spend():
                return False
            assert self.source is not None
            count = max(self.chunk, self._hi - self._lo, self._lo - max_lo)
            drawn = self.source.draw_left(count)
            new_s = (self._s[0] - np.cumsum(drawn))[::-1]
            self._x = np.concatenate((drawn[::-1], self._x))
            self._s = np.concatenate((new_s, self._s))
            self._lo -= count
        return True

    def ensure(self, j: int, k: int) -> bool:
        """Make [j, k] readable as sum indices, extending on demand."""
        return self.extend_left(j) and self.extend_right(k)

    def require(self, j: int, k: int) -> None:
        if not self.ensure(j, k):
            raise WindowBudgetExhausted(
                f"Cannot cover [{j}, {k}]; window is [{self._lo}, {self._hi}]"
            )

    def contains(self, n: int) -> bool:
        return self._lo <= n <= self._hi

    def _check(self, j: int, k: int) -> None:
        if not (self._lo <= j and k <= self._hi):
            raise OutOfWindowError(f"[{j}, {k}] is outside window [{self._lo}, {self._hi}]")

    def x(self, n: int) -> int:
        self._check(n, n + 1)
        return int(self._x[n - self._lo])

    def s(self, n: int) -> int:
        self._check(n, n)
        return int(self._s[n - self._lo])

    def sums(self, j: int, k: int) -> IntArray:
        """Read-only view of S_j, ..., S_k."""
        self._check(j, k)
        view = self._s[j - self._lo : k - self._lo + 1]
        view.flags.writeable = False
        return view

    def increments(self, j: int, k: int) -> IntArray:
        """Read-only view of x_j, ..., x_{k-1}."""
        self._check(j, k)
        view = self._x[j - self._lo : k - self._lo]
        view.flags.writeable = False
        return view

    def snapshot(self) -> WindowSnapshot:
        return WindowSnapshot(
            lo=self._lo,
            hi=self._hi,
            increments=[int(v) for v in self._x],
            sums=[int(v) for v in self._s],
        )

    def __repr__(self) -> str:
        return (
            f"TrajectoryWindow(lo={self._lo}, hi={self._hi}, "
            f"budget={self.extension_budget}, closed={self.closed})"
        )
