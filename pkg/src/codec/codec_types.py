from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple


class CodecError(ValueError):
    """A tree or sequence cannot be coded."""


class CensoredWindowError(CodecError):
    def __init__(self, first_index: int):
        super().__init__(f"Code index {first_index} is not resolved in the tree")
        self.first_index = first_index


@dataclass(frozen=True)
class CodeSequence:
    """Offspring counts minus one, y_n for n in [lo, hi)."""

    lo: int
    values: Tuple[int, ...]

    def __post_init__(self) -> None:
        bad = [v for v in self.values if v < -1]
        if bad:
            raise CodecError(f"Code values must be >= -1, got {bad[0]}")

    @property
    def hi(self) -> int:
        return self.lo + len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def indices(self) -> range:
        return range(self.lo, self.hi)

    def at(self, n: int) -> int:
        if not self.lo <= n < self.hi:
            raise CodecError(f"Index {n} is outside [{self.lo}, {self.hi})")
        return self.values[n - self.lo]

    @classmethod
    def from_text(cls, text: str, lo: Optional[int] = None) -> "CodeSequence":
        """Whitespace-separated integers; lo defaults to -len so the sequence ends at 0."""
        try:
            values = tuple(int(token) for token in text.split())
        except ValueError as e:
            raise CodecError(f"Bad code sequence: {e}") from e
        return cls(lo=-len(values) if lo is None else lo, values=values)

    def to_text(self) -> str:
        return " ".join(str(v) for v in self.values)

    def to_dict(self) -> Dict[str, Any]:
        return {"lo": self.lo, "hi": self.hi, "values": list(self.values)}


@dataclass
class FiniteCodeReport:
    passed: bool
    total: int
    code: List[int]
    # 1-based length of the first prefix with a non-negative sum
    violating_prefix: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class RoundtripReport:
    compared: int = 0
    mismatches: int = 0
    censored: int = 0
    mismatched_indices: List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.mismatches == 0

    def merge(self, other: "RoundtripReport") -> None:
        self.compared += other.compared
        self.mismatches += other.mismatches
        self.censored += other.censored
        self.mismatched_indices.extend(other.mismatched_indices)

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "passed": self.passed}
