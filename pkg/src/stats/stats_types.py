import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from trees import OrderedTree


class StatsError(ValueError):
    """Estimator inputs do not fit together (radii, empty laws, sample sizes)."""


# weight sent from u to v in a tree
TransportWeight = Callable[[OrderedTree, int, int], float]


@dataclass(frozen=True)
class TransportFunction:
    """A transport h(T, u, v) >= 0 that vanishes unless u and v are within `radius`."""

    name: str
    radius: int
    weight: TransportWeight

    def __call__(self, t: OrderedTree, u: int, v: int) -> float:
        return self.weight(t, u, v)


@dataclass
class EmpiricalLaw:
    """Counts of radius-r ball keys; censored samples are only counted in `dropped`."""

    radius: int
    counts: Counter[str] = field(default_factory=Counter)
    dropped: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @classmethod
    def from_keys(cls, keys: List[Optional[str]], radius: int) -> "EmpiricalLaw":
        law = cls(radius=radius)
        for key in keys:
            if key is None:
                law.dropped += 1
            else:
                law.counts[key] += 1
        return law

    def prob(self, key: str) -> float:
        total = self.total
        if total == 0:
            raise StatsError("Empty empirical law")
        return self.counts.get(key, 0) / total

    def probabilities(self) -> Dict[str, float]:
        total = self.total
        if total == 0:
            raise StatsError("Empty empirical law")
        return {key: count / total for key, count in self.counts.items()}

    def merge(self, other: "EmpiricalLaw") -> None:
        if other.radius != self.radius:
            raise StatsError(f"Cannot merge radius {other.radius} into radius {self.radius}")
        self.counts.update(other.counts)
        self.dropped += other.dropped

    def most_common(self, n: int = 10) -> List[Tuple[str, int]]:
        return self.counts.most_common(n)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "radius": self.radius,
            "total": self.total,
            "dropped": self.dropped,
            "counts": dict(sorted(self.counts.items())),
        }


@dataclass
class MtpReport:
    transport: str
    n: int
    dropped: int
    mean_out: float
    mean_in: float
    ci_out: float
    ci_in: float
    z_score: float

    def passed(self, z_limit: float) -> bool:
        return abs(self.z_score) < z_limit

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class IndependenceReport:
    tv: float
    p_value: float
    n: int
    dropped: int
    permutations: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ScalarEstimate:
    statistic: str
    mean: float
    ci95: float
    n: int
    dropped: int
    stderr: float = 0.0

    @property
    def interval(self) -> Tuple[float, float]:
        return self.mean - self.ci95, self.mean + self.ci95

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - target) <= sigmas * self.stderr

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class LawEstimate:
    """Empirical law of an integer statistic, checked atom by atom against a target law.

    Each atom k gets z = (f_k - p_k) / sqrt(p_k (1 - p_k) / n); an atom the target gives
    probability 0 or 1 passes only when hit exactly.
    """

    statistic: str
    counts: Dict[int, int]
    n: int
    dropped: int

    def frequency(self, k: int) -> float:
        return self.counts.get(k, 0) / self.n if self.n else 0.0

    def z_scores(self, expected: Mapping[int, float]) -> Dict[int, float]:
        scores: Dict[int, float] = {}
        for k in sorted(set(self.counts) | set(expected)):
            p = float(expected.get(k, 0.0))
            gap = self.frequency(k) - p
            sigma = math.sqrt(p * (1.0 - p) / self.n) if self.n else 0.0
            if sigma > 0:
                scores[k] = gap / sigma
            else:
                scores[k] = 0.0 if abs(gap) < 1e-12 else math.copysign(math.inf, gap)
        return scores

    def max_z(self, expected: Mapping[int, float]) -> float:
        return max((abs(z) for z in self.z_scores(expected).values()), default=0.0)

    def within(self, expected: Mapping[int, float], sigmas: float = 3.0) -> bool:
        return self.n > 0 and self.max_z(expected) <= sigmas

    def to_dict(self, expected: Optional[Mapping[int, float]] = None) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "statistic": self.statistic,
            "n": self.n,
            "dropped": self.dropped,
            "frequencies": {k: self.frequency(k) for k in sorted(self.counts)},
        }
        if expected is not None:
            out["expected"] = {k: float(p) for k, p in sorted(expected.items())}
            out["max_z"] = self.max_z(expected)
        return out
