from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional

from increments import IncrementLaw, OffspringLaw


class AnalyticsError(ValueError):
    """A law is outside the regime an analytic formula is defined for."""


@dataclass(frozen=True)
class HittingQuery:
    """First passage to level `target` (< 0) observed for at most `horizon` steps."""

    target: int
    horizon: int

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise AnalyticsError(f"Horizon must be >= 0, got {self.horizon}")


@dataclass(frozen=True)
class DerivedLaws:
    """Everything walk_analytics derives from one skip-free law.

    For negative mean c = 1, the Doob transform is the law itself and the spine
    laws pi_tilde/pi_bar are not defined.
    """

    base: IncrementLaw
    mean: Fraction
    c: float
    doob: IncrementLaw
    offspring: OffspringLaw
    pi_tilde: Optional[OffspringLaw]
    pi_bar: Optional[OffspringLaw]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base.to_dict()["atoms"],
            "mean": float(self.mean),
            "c": self.c,
            "doob": self.doob.to_dict()["atoms"],
            "doob_mean": sum(v * p for v, p in self.doob.atoms),
            "offspring": self.offspring.to_list(),
            "pi_tilde": self.pi_tilde.to_list() if self.pi_tilde else None,
            "pi_bar": self.pi_bar.to_list() if self.pi_bar else None,
        }
