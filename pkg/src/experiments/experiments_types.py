import json
from dataclasses import asdict, dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Any, Dict, List, Optional

from increments import IncrementLaw, QueueChainParams, law_from_config
from increments.increments_window import DEFAULT_EXTENSION_BUDGET
from samplers import DEFAULT_NODE_BUDGET, DEFAULT_SIZE_CAP
from utils.config_utils import ConfigError
from utils.parallel_utils import default_threads
from utils.rich_utils import LOGGING_LEVELS

NEGATIVE_LAW = [[-1, 0.75], [1, 0.25]]
ZERO_LAW = [[-1, 0.5], [1, 0.5]]
POSITIVE_LAW = [[-1, 0.25], [1, 0.75]]
DEFAULT_QUEUE = {"lambda": 1.0, "mu": 2.0}
DEFAULT_CONTROL_PI = [[0, 0.5], [1, 0.25], [2, 0.25]]


class ExitCode(IntEnum):
    PASS = 0
    UNEXPECTED_ERROR = 1
    STATISTICAL_FAILURE = 2
    INVARIANT_VIOLATION = 3
    CONFIG_ERROR = 4


@dataclass
class RunOutcome:
    """What a command checked, and which checks failed."""

    command: str
    checks: int = 0
    statistical_failures: List[str] = field(default_factory=list)
    invariant_violations: List[str] = field(default_factory=list)
    outputs: List[str] = field(default_factory=list)

    def check(self, passed: bool, message: str, invariant: bool = False) -> bool:
        self.checks += 1
        if not passed:
            target = self.invariant_violations if invariant else self.statistical_failures
            target.append(message)
        return passed

    @property
    def exit_code(self) -> ExitCode:
        if self.invariant_violations:
            return ExitCode.INVARIANT_VIOLATION
        if self.statistical_failures:
            return ExitCode.STATISTICAL_FAILURE
        return ExitCode.PASS


@dataclass(frozen=True)
class NamedLaw:
    name: str
    atoms: List[List[float]]

    @property
    def law(self) -> IncrementLaw:
        return IncrementLaw.from_atoms(self.atoms)

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any], index: int = 0) -> "NamedLaw":
        law = law_from_config(config_dict)
        name = str(config_dict.get("name", f"law_{index}"))
        return cls(name=name, atoms=[[v, p] for v, p in law.atoms])


def _laws(config_dict: Dict[str, Any], default: List[NamedLaw]) -> List[NamedLaw]:
    entries = config_dict.get("laws")
    if entries is None:
        return default
    if not isinstance(entries, list) or not entries:
        raise ConfigError("'laws' must be a non-empty list of law tables")
    return [NamedLaw.from_dict(entry, i) for i, entry in enumerate(entries)]


def _single_law(config_dict: Dict[str, Any], default: List[List[float]]) -> NamedLaw:
    if "law" in config_dict:
        return NamedLaw.from_dict(config_dict["law"])
    if "law_file" in config_dict or "atoms" in config_dict:
        return NamedLaw.from_dict(config_dict)
    return NamedLaw(name="default", atoms=default)


def _sampler_dict(entry: Any) -> Dict[str, Any]:
    """A sampler spec given inline or as {"sampler_file": "path.json"}."""
    if not isinstance(entry, dict):
        raise ConfigError(f"Sampler spec must be a table, got {entry!r}")
    if "sampler_file" in entry:
        loaded: Dict[str, Any] = json.loads(Path(str(entry["sampler_file"])).read_text())
        return loaded
    return dict(entry)


DEFAULT_LAWS = [
    NamedLaw("negative", NEGATIVE_LAW),
    NamedLaw("zero", ZERO_LAW),
    NamedLaw("positive", POSITIVE_LAW),
]


@dataclass
class RunSettings:
    """Settings shared by every command; command-line flags override file values."""

    seed: int = 0
    samples: int = 1000
    radius: Optional[int] = None
    node_budget: int = DEFAULT_NODE_BUDGET
    threads: int = 1
    output_file_path: str = "./output/"
    timestamp_file: bool = False
    logging_level: str = "summary"

    @staticmethod
    def common(config_dict: Dict[str, Any], samples: int, radius: Optional[int]) -> Dict[str, Any]:
        logging_level = str(config_dict.get("logging_level", "summary"))
        if logging_level not in LOGGING_LEVELS:
            raise ConfigError(
                f"Unknown logging_level '{logging_level}', expected one of {LOGGING_LEVELS}"
            )
        configured_radius = config_dict.get("radius", radius)
        common = {
            "seed": int(config_dict.get("seed", 0)),
            "samples": int(config_dict.get("samples", samples)),
            "radius": None if configured_radius is None else int(configured_radius),
            "node_budget": int(config_dict.get("node_budget", DEFAULT_NODE_BUDGET)),
            "threads": int(config_dict.get("threads", default_threads())),
            "output_file_path": str(config_dict.get("output_file_path", "./output/")),
            "timestamp_file": bool(config_dict.get("timestamp_file", False)),
            "logging_level": logging_level,
        }
        if common["samples"] < 1:
            raise ConfigError(f"'samples' must be >= 1, got {common['samples']}")
        if common["radius"] is not None and common["radius"] < 0:
            raise ConfigError(f"'radius' must be >= 0, got {common['radius']}")
        return common

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class PhaseConfig(RunSettings):
    laws: List[NamedLaw] = field(default_factory=lambda: list(DEFAULT_LAWS))
    queues: List[Dict[str, float]] = field(default_factory=lambda: [dict(DEFAULT_QUEUE)])
    horizon: int = 10_000
    min_agreement: float = 0.99
    extension_budget: int = DEFAULT_EXTENSION_BUDGET
    ancestor_depth: int = 8

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "PhaseConfig":
        queues = config_dict.get("queues", [DEFAULT_QUEUE])
        return cls(
            **cls.common(config_dict, samples=200, radius=None),
            laws=_laws(config_dict, list(DEFAULT_LAWS)),
            queues=[QueueChainParams.from_dict(q).to_dict() for q in queues],
            horizon=int(config_dict.get("horizon", 10_000)),
            min_agreement=float(config_dict.get("min_agreement", 0.99)),
            extension_budget=int(config_dict.get("extension_budget", DEFAULT_EXTENSION_BUDGET)),
            ancestor_depth=int(config_dict.get("ancestor_depth", 8)),
        )


@dataclass
class CompareConfig(RunSettings):
    """Ball-law comparison of the record graph of `law` with the matching sampler.

    With `samplers` set to two sampler specs, those two are compared instead. Comparing a
    law also runs the scalar and offspring-law checks of its drift sign unless
    `drift_checks` is off; estimates must sit within `sigmas` standard errors.
    """

    law: NamedLaw = field(default_factory=lambda: NamedLaw("default", NEGATIVE_LAW))
    samplers: Optional[List[Dict[str, Any]]] = None
    tv_limit: Optional[float] = None
    size_cap: int = DEFAULT_SIZE_CAP
    extension_budget: int = DEFAULT_EXTENSION_BUDGET
    top_differences: int = 20
    drift_checks: bool = True
    sigmas: float = 3.0
    independence_limit: float = 0.02
    permutations: int = 200

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "CompareConfig":
        samplers = config_dict.get("samplers")
        if samplers is not None:
            if not isinstance(samplers, list) or len(samplers) != 2:
                raise ConfigError("'samplers' must list exactly two sampler specs")
            samplers = [_sampler_dict(s) for s in samplers]
        tv_limit = config_dict.get("tv_limit")
        return cls(
            **cls.common(config_dict, samples=200_000, radius=2),
            law=_single_law(config_dict, NEGATIVE_LAW),
            samplers=samplers,
            tv_limit=None if tv_limit is None else float(tv_limit),
            size_cap=int(config_dict.get("size_cap", DEFAULT_SIZE_CAP)),
            extension_budget=int(config_dict.get("extension_budget", DEFAULT_EXTENSION_BUDGET)),
            top_differences=int(config_dict.get("top_differences", 20)),
            drift_checks=bool(config_dict.get("drift_checks", True)),
            sigmas=float(config_dict.get("sigmas", 3.0)),
            independence_limit=float(config_dict.get("independence_limit", 0.02)),
            permutations=int(config_dict.get("permutations", 200)),
        )


@dataclass
class MtpConfig(RunSettings):
    """Mass-transport suite: the reference sampler of every law plus any extra samplers."""

    laws: List[NamedLaw] = field(default_factory=lambda: list(DEFAULT_LAWS))
    samplers: List[Dict[str, Any]] = field(default_factory=list)
    family_size: int = 20
    transport_seed: int = 0
    z_limit: float = 4.0
    negative_control: Optional[Dict[str, Any]] = None
    control_z: float = 10.0
    size_cap: int = DEFAULT_SIZE_CAP

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "MtpConfig":
        control = config_dict.get("negative_control", {"family": "gw", "pi": DEFAULT_CONTROL_PI})
        return cls(
            **cls.common(config_dict, samples=2000, radius=3),
            laws=_laws(config_dict, list(DEFAULT_LAWS)),
            samplers=[_sampler_dict(s) for s in config_dict.get("samplers", [])],
            family_size=int(config_dict.get("family_size", 20)),
            transport_seed=int(config_dict.get("transport_seed", 0)),
            z_limit=float(config_dict.get("z_limit", 4.0)),
            negative_control=_sampler_dict(control) if control else None,
            control_z=float(config_dict.get("control_z", 10.0)),
            size_cap=int(config_dict.get("size_cap", DEFAULT_SIZE_CAP)),
        )


@dataclass
class AnalyticsConfig(RunSettings):
    laws: List[NamedLaw] = field(default_factory=lambda: list(DEFAULT_LAWS))
    depth: int = 30
    residual_limit: float = 1e-3
    hitting_horizon: int = 2000
    normalization_tolerance: float = 1e-10

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "AnalyticsConfig":
        return cls(
            **cls.common(config_dict, samples=10_000, radius=None),
            laws=_laws(config_dict, list(DEFAULT_LAWS)),
            depth=int(config_dict.get("depth", 30)),
            residual_limit=float(config_dict.get("residual_limit", 1e-3)),
            hitting_horizon=int(config_dict.get("hitting_horizon", 2000)),
            normalization_tolerance=float(config_dict.get("normalization_tolerance", 1e-10)),
        )


@dataclass
class CodecConfig(RunSettings):
    """Round-trip batch, or a single encode (`tree`) / decode (`seq`) action."""

    law: NamedLaw = field(default_factory=lambda: NamedLaw("default", ZERO_LAW))
    half_window: int = 8
    fuzz_windows: int = 1000
    fuzz_length: int = 16
    gw_samples: int = 1000
    gw_pi: List[List[float]] = field(default_factory=lambda: list(DEFAULT_CONTROL_PI))
    extension_budget: int = DEFAULT_EXTENSION_BUDGET
    tree: Optional[str] = None
    seq: Optional[str] = None
    lo: Optional[int] = None

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "CodecConfig":
        lo = config_dict.get("lo")
        config = cls(
            **cls.common(config_dict, samples=1000, radius=None),
            law=_single_law(config_dict, ZERO_LAW),
            half_window=int(config_dict.get("half_window", 8)),
            fuzz_windows=int(config_dict.get("fuzz_windows", 1000)),
            fuzz_length=int(config_dict.get("fuzz_length", 16)),
            gw_samples=int(config_dict.get("gw_samples", 1000)),
            gw_pi=config_dict.get("gw_pi", DEFAULT_CONTROL_PI),
            extension_budget=int(config_dict.get("extension_budget", DEFAULT_EXTENSION_BUDGET)),
            tree=config_dict.get("tree"),
            seq=config_dict.get("seq"),
            lo=None if lo is None else int(lo),
        )
        if config.tree is not None and config.seq is not None:
            raise ConfigError("Give either 'tree' (encode) or 'seq' (decode), not both")
        if config.half_window < 1 or config.fuzz_length < 1:
            raise ConfigError("'half_window' and 'fuzz_length' must be >= 1")
        return config


@dataclass
class SimulateConfig(RunSettings):
    sampler: Dict[str, Any] = field(
        default_factory=lambda: {"family": "gw", "pi": DEFAULT_CONTROL_PI}
    )
    dump: bool = False

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "SimulateConfig":
        if "sampler" in config_dict:
            sampler = _sampler_dict(config_dict["sampler"])
        elif "sampler_file" in config_dict:
            sampler = _sampler_dict({"sampler_file": config_dict["sampler_file"]})
        else:
            raise ConfigError("[simulate] needs a 'sampler' table or a 'sampler_file'")
        common = cls.common(config_dict, samples=100, radius=sampler.get("radius"))
        # flags and the section-level values take precedence over the sampler entry's own
        sampler["seed"] = common["seed"] if "seed" in config_dict else sampler.get("seed", 0)
        common["seed"] = int(sampler["seed"])
        if common["radius"] is not None:
            sampler["radius"] = common["radius"]
        if "node_budget" in config_dict:
            sampler["node_budget"] = common["node_budget"]
        return cls(**common, sampler=sampler, dump=bool(config_dict.get("dump", False)))
