"""
Named sampler families, built from JSON/TOML specs such as

    {"family": "tgwt", "pi": [[0, 0.5], [1, 0.5]], "seed": 42, "node_budget": 100000}

A SamplerSpec is a plain picklable value, so shards of a parallel batch can each
rebuild the same sampler in their own process.
"""

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from increments import (
    IncrementLaw,
    OffspringLaw,
    QueueChainParams,
    SeedLike,
    TrajectoryWindow,
    iid_window,
    queue_window,
)
from increments.increments_window import DEFAULT_EXTENSION_BUDGET
from recorder import RecorderConfig, component_ball
from samplers.samplers_types import (
    DEFAULT_NODE_BUDGET,
    DEFAULT_SIZE_CAP,
    Sample,
    SampleMeta,
    SamplerError,
)
from samplers.samplers_utils import (
    gw_proposal,
    sample_egwt,
    sample_ekt,
    sample_gw,
    sample_tgwt,
    typical_reroot,
    unimodularised_ekt,
)
from trees import VertexFlag

SAMPLER_FAMILIES = (
    "gw",
    "tgwt",
    "egwt",
    "ekt",
    "ekt_unimodular",
    "typical_gw",
    "record",
    "record_queue",
)

Atoms = List[List[float]]


@dataclass(frozen=True)
class SamplerSpec:
    family: str
    pi: Optional[Atoms] = None
    alpha: Optional[Atoms] = None
    beta: Optional[Atoms] = None
    law: Optional[Atoms] = None
    queue: Optional[Dict[str, float]] = None
    radius: Optional[int] = None
    ecs: bool = True
    node_budget: int = DEFAULT_NODE_BUDGET
    size_cap: int = DEFAULT_SIZE_CAP
    extension_budget: int = DEFAULT_EXTENSION_BUDGET
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in SAMPLER_FAMILIES:
            raise SamplerError(
                f"Unknown sampler family '{self.family}', expected one of {SAMPLER_FAMILIES}"
            )

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "SamplerSpec":
        radius = config_dict.get("radius")
        return cls(
            family=str(config_dict["family"]),
            pi=config_dict.get("pi"),
            alpha=config_dict.get("alpha"),
            beta=config_dict.get("beta"),
            law=config_dict.get("law"),
            queue=config_dict.get("queue"),
            radius=None if radius is None else int(radius),
            ecs=bool(config_dict.get("ecs", True)),
            node_budget=int(config_dict.get("node_budget", DEFAULT_NODE_BUDGET)),
            size_cap=int(config_dict.get("size_cap", DEFAULT_SIZE_CAP)),
            extension_budget=int(config_dict.get("extension_budget", DEFAULT_EXTENSION_BUDGET)),
            seed=int(config_dict.get("seed", 0)),
        )

    @classmethod
    def from_json_file(cls, path: str) -> "SamplerSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def with_radius(self, radius: Optional[int]) -> "SamplerSpec":
        return SamplerSpec.from_dict({**self.to_dict(), "radius": radius})

    def _offspring(self, name: str) -> OffspringLaw:
        atoms = getattr(self, name)
        if atoms is None:
            raise SamplerError(f"Sampler family '{self.family}' needs '{name}'")
        return OffspringLaw.from_atoms(atoms)

    def _radius(self) -> int:
        if self.radius is None:
            raise SamplerError(f"Sampler family '{self.family}' needs a radius")
        return self.radius

    def __call__(self, seed: SeedLike) -> Sample:
        family = self.family
        if family == "gw":
            return sample_gw(self._offspring("pi"), seed, self.node_budget, self.radius)
        if family == "tgwt":
            return sample_tgwt(self._offspring("pi"), seed, self.node_budget, self.radius)
        if family == "egwt":
            return sample_egwt(self._offspring("pi"), self._radius(), seed, self.node_budget)
        if family == "ekt":
            return sample_ekt(
                self._offspring("alpha"),
                self._offspring("beta"),
                self._radius(),
                self.ecs,
                seed,
                self.node_budget,
            )
        if family == "ekt_unimodular":
            return unimodularised_ekt(
                self._offspring("alpha"),
                self._offspring("beta"),
                self._radius(),
                seed,
                self.size_cap,
                self.node_budget,
            )
        if family == "typical_gw":
            proposal = gw_proposal(self._offspring("pi"), self.size_cap)
            return typical_reroot(proposal, seed, self.size_cap, self.radius)
        return self._record_sample(seed)

    def window(self, seed: SeedLike) -> TrajectoryWindow:
        """The increment window behind a record-family sample drawn with `seed`."""
        if self.family == "record":
            if self.law is None:
                raise SamplerError("Sampler family 'record' needs 'law'")
            return iid_window(
                IncrementLaw.from_atoms(self.law), seed, extension_budget=self.extension_budget
            )
        if self.family == "record_queue":
            if self.queue is None:
                raise SamplerError("Sampler family 'record_queue' needs 'queue'")
            return queue_window(
                QueueChainParams.from_dict(self.queue),
                seed,
                extension_budget=self.extension_budget,
            )
        raise SamplerError(f"Sampler family '{self.family}' is not backed by a window")

    def _record_sample(self, seed: SeedLike) -> Sample:
        w = self.window(seed)
        config = RecorderConfig(node_budget=self.node_budget)
        tree = component_ball(w, self._radius(), config=config)
        censored = any(flag is VertexFlag.CENSORED for flag in tree.flags)
        meta = SampleMeta(seed=seed, node_budget=self.node_budget, censored=censored)
        return Sample(tree, meta, extras={"window": (w.lo, w.hi)})

    def sample(self, index: int, seed: Optional[int] = None) -> Sample:
        """The index-th sample of a batch, drawn with seed [seed, index]."""
        base = self.seed if seed is None else seed
        return self([base, index])
