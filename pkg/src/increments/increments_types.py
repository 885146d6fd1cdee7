import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

PROB_TOLERANCE = 1e-12

# an int or an int sequence such as [seed, sample_index], as numpy.random.SeedSequence takes
SeedLike = Union[int, Sequence[int]]


class IncrementLawError(ValueError):
    """An increment law or queue parameter set failed validation."""


class WindowError(Exception):
    """Base class for trajectory window failures."""


class WindowBudgetExhausted(WindowError):
    """The window may not be extended any further."""


class OutOfWindowError(WindowError):
    """An index outside [lo, hi] was requested from a frozen window."""


class LawKind(Enum):
    SKIP_FREE = "skip_free"
    GENERAL_INTEGER = "general_integer"


@dataclass(frozen=True)
class IncrementLaw:
    """Finite-support law on the integers, stored as sorted (value, prob) atoms."""

    atoms: Tuple[Tuple[int, float], ...]
    kind: LawKind = LawKind.SKIP_FREE

    def __post_init__(self) -> None:
        if not self.atoms:
            raise IncrementLawError("An increment law needs at least one atom")

        values = [v for v, _ in self.atoms]
        probs = [p for _, p in self.atoms]
        if len(set(values)) != len(values):
            raise IncrementLawError(f"Duplicate values in atoms: {values}")
        if values != sorted(values):
            raise IncrementLawError(f"Atom values must be sorted: {values}")
        if any(p < 0 for p in probs):
            raise IncrementLawError(f"Negative probability in atoms: {self.atoms}")
        if abs(sum(probs) - 1.0) > PROB_TOLERANCE:
            raise IncrementLawError(f"Probabilities sum to {sum(probs)!r}, expected 1")

        if self.kind is LawKind.SKIP_FREE:
            if values[0] != -1 or probs[0] <= 0:
                raise IncrementLawError(
                    "A skip-free law needs value -1 with positive probability as its minimum"
                )

    @classmethod
    def from_atoms(
        cls, atoms: Sequence[Sequence[float]], kind: Optional[LawKind] = None
    ) -> "IncrementLaw":
        """Build a law from unsorted [value, prob] pairs; zero-probability atoms are dropped.

        Without an explicit kind, the law is skip-free when its smallest atom is -1.
        """
        cleaned: Dict[int, float] = {}
        for pair in atoms:
            if len(pair) != 2:
                raise IncrementLawError(f"Atom must be a [value, prob] pair, got {pair!r}")
            value, prob = pair
            if int(value) != value:
                raise IncrementLawError(f"Atom value must be an integer, got {value!r}")
            if int(value) in cleaned:
                raise IncrementLawError(f"Duplicate value {int(value)} in atoms")
            cleaned[int(value)] = float(prob)

        ordered = tuple((v, cleaned[v]) for v in sorted(cleaned) if cleaned[v] > 0)
        if kind is None:
            skip_free = bool(ordered) and ordered[0][0] == -1
            kind = LawKind.SKIP_FREE if skip_free else LawKind.GENERAL_INTEGER
        return cls(atoms=ordered, kind=kind)

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "IncrementLaw":
        """Create a law from {"atoms": [[-1, 0.25], [1, 0.75]], "kind": "skip_free"}."""
        if "atoms" not in config_dict:
            raise IncrementLawError("Law definition is missing 'atoms'")
        kind = config_dict.get("kind")
        return cls.from_atoms(config_dict["atoms"], LawKind(kind) if kind else None)

    @classmethod
    def from_json_file(cls, path: str) -> "IncrementLaw":
        with open(Path(path)) as f:
            return cls.from_dict(json.load(f))

    def to_dict(self) -> Dict[str, Any]:
        return {"atoms": [[v, p] for v, p in self.atoms], "kind": self.kind.value}

    @property
    def values(self) -> npt.NDArray[np.int64]:
        return np.array([v for v, _ in self.atoms], dtype=np.int64)

    @property
    def probs(self) -> npt.NDArray[np.float64]:
        return np.array([p for _, p in self.atoms], dtype=np.float64)

    @property
    def cdf(self) -> npt.NDArray[np.float64]:
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        return cdf

    @property
    def min_value(self) -> int:
        return self.atoms[0][0]

    @property
    def max_value(self) -> int:
        return self.atoms[-1][0]

    def prob(self, value: int) -> float:
        for v, p in self.atoms:
            if v == value:
                return p
        return 0.0

    def tail(self, value: int) -> float:
        """P[X >= value]."""
        return float(sum(p for v, p in self.atoms if v >= value))

    def __str__(self) -> str:
        inner = ", ".join(f"{v}: {p:g}" for v, p in self.atoms)
        return "{" + inner + "}"


@dataclass(frozen=True)
class QueueChainParams:
    """Arrival and service rates of an M/M/1 queue; the embedded jump chain is simulated."""

    lam: float
    mu: float

    def __post_init__(self) -> None:
        if self.lam <= 0 or self.mu <= 0:
            raise IncrementLawError(f"Queue rates must be positive, got {self.lam}, {self.mu}")
        if self.lam >= self.mu:
            raise IncrementLawError(
                f"Queue must be stable (lambda < mu), got lambda={self.lam}, mu={self.mu}"
            )

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "QueueChainParams":
        """Create params from {"lambda": 1.0, "mu": 2.0}."""
        try:
            return cls(lam=float(config_dict["lambda"]), mu=float(config_dict["mu"]))
        except KeyError as e:
            raise IncrementLawError(f"Queue params are missing {e}") from e

    def to_dict(self) -> Dict[str, float]:
        return {"lambda": self.lam, "mu": self.mu}

    @property
    def up_prob(self) -> float:
        """Jump-chain probability of an arrival from a non-empty state."""
        return self.lam / (self.lam + self.mu)

    @property
    def load(self) -> float:
        return self.lam / self.mu


@dataclass
class WindowSnapshot:
    """Plain copy of a window's contents, used for comparisons and dumps."""

    lo: int
    hi: int
    increments: List[int]
    sums: List[int]


@dataclass(frozen=True)
class OffspringLaw:
    """Finite-support law on {0, 1, 2, ...}, stored as sorted (k, prob) atoms."""

    atoms: Tuple[Tuple[int, float], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise IncrementLawError("An offspring law needs at least one atom")
        ks = [k for k, _ in self.atoms]
        probs = [p for _, p in self.atoms]
        if ks != sorted(set(ks)):
            raise IncrementLawError(f"Offspring values must be distinct and sorted: {ks}")
        if ks[0] < 0:
            raise IncrementLawError(f"Offspring counts must be >= 0, got {ks[0]}")
        if any(p < 0 for p in probs):
            raise IncrementLawError(f"Negative probability in {self.atoms}")
        if abs(sum(probs) - 1.0) > PROB_TOLERANCE:
            raise IncrementLawError(f"Offspring probabilities sum to {sum(probs)!r}, expected 1")

    @classmethod
    def from_atoms(
        cls, atoms: Sequence[Sequence[float]], normalize: bool = False
    ) -> "OffspringLaw":
        """Build from unsorted [k, prob] pairs, dropping zero atoms.

        With normalize=True, rounding drift up to 1e-10 is divided out.
        """
        merged: Dict[int, float] = {}
        for k, p in atoms:
            if int(k) != k:
                raise IncrementLawError(f"Offspring count must be an integer, got {k!r}")
            merged[int(k)] = merged.get(int(k), 0.0) + float(p)
        ordered = [(k, merged[k]) for k in sorted(merged) if merged[k] > 0]
        if normalize:
            total = sum(p for _, p in ordered)
            if abs(total - 1.0) > 1e-10:
                raise IncrementLawError(f"Offspring law sums to {total!r}, outside 1e-10 of 1")
            ordered = [(k, p / total) for k, p in ordered]
        return cls(atoms=tuple(ordered))

    @classmethod
    def point_mass(cls, k: int) -> "OffspringLaw":
        return cls(atoms=((k, 1.0),))

    def to_list(self) -> List[List[float]]:
        return [[k, p] for k, p in self.atoms]

    @property
    def values(self) -> npt.NDArray[np.int64]:
        return np.array([k for k, _ in self.atoms], dtype=np.int64)

    @property
    def probs(self) -> npt.NDArray[np.float64]:
        return np.array([p for _, p in self.atoms], dtype=np.float64)

    @property
    def mean(self) -> float:
        return float(sum(k * p for k, p in self.atoms))

    def prob(self, k: int) -> float:
        for value, p in self.atoms:
            if value == k:
                return p
        return 0.0

    def sample(self, rng: np.random.Generator) -> int:
        cdf = np.cumsum(self.probs)
        idx = int(np.searchsorted(cdf, rng.random(), side="right"))
        return int(self.atoms[min(idx, len(self.atoms) - 1)][0])

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}: {p:g}" for k, p in self.atoms) + "}"
