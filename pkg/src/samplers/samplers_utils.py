from functools import partial
from typing import Optional, Tuple

import numpy as np

from increments import OffspringLaw, SeedLike
from samplers.samplers_grow import BallGrower
from samplers.samplers_types import (
    DEFAULT_MAX_ATTEMPTS,
    DEFAULT_NODE_BUDGET,
    DEFAULT_SIZE_CAP,
    GrowthPlan,
    Sample,
    SampleMeta,
    SamplerError,
    TreeProposal,
    VertexRole,
)
from trees import OrderedTree, restrict_to_ball, with_root

MEAN_TOLERANCE = 1e-12


def size_biased(pi: OffspringLaw) -> OffspringLaw:
    """pi_hat(k) = k pi(k) / m(pi)."""
    m = pi.mean
    if m <= 0:
        raise SamplerError(f"Size-biasing needs a positive mean, got {pi}")
    return OffspringLaw.from_atoms([(k, k * p / m) for k, p in pi.atoms], normalize=True)


def shifted(pi: OffspringLaw, by: int) -> OffspringLaw:
    return OffspringLaw.from_atoms([(k + by, p) for k, p in pi.atoms])


def expected_tree_size(pi: OffspringLaw) -> float:
    """E[#V] = 1 / (1 - m) of a subcritical GW tree."""
    if pi.mean >= 1:
        raise SamplerError(f"Expected size is infinite for mean {pi.mean}")
    return 1.0 / (1.0 - pi.mean)


def tgwt_ancestor_tail(pi: OffspringLaw, k: int) -> float:
    """P[N >= k] = m^k for the ancestor count N of TGWT(pi)."""
    return float(pi.mean**k)


def _require_subcritical(pi: OffspringLaw, name: str) -> None:
    if pi.mean >= 1 - MEAN_TOLERANCE:
        raise SamplerError(f"{name} needs mean < 1, got {pi.mean}")


def _require_radius(radius: Optional[int], name: str) -> int:
    if radius is None or radius < 0:
        raise SamplerError(f"{name} grows an eternal spine and needs a radius >= 0")
    return radius


def _grow(
    plan: GrowthPlan,
    seed: SeedLike,
    radius: Optional[int],
    node_budget: int,
) -> Sample:
    grower = BallGrower(plan, np.random.default_rng(seed), radius, node_budget)
    tree = grower.grow()
    return Sample(tree, SampleMeta(seed=seed, node_budget=node_budget, censored=grower.censored))


def gw_plan(pi: OffspringLaw) -> GrowthPlan:
    return GrowthPlan(
        base=pi,
        spine_law=pi,
        root_law=pi,
        up_prob=0.0,
        root_role=VertexRole.ORDINARY,
        annotate_spine=False,
    )


def bush_plan(alpha: OffspringLaw, beta: OffspringLaw) -> GrowthPlan:
    """A single EKT bush: the top has alpha children, each carrying a GW(beta) tree."""
    return GrowthPlan(
        base=beta, spine_law=alpha, root_law=alpha, up_prob=0.0, annotate_spine=False
    )


def ekt_plan(alpha: OffspringLaw, beta: OffspringLaw, ecs: bool) -> GrowthPlan:
    return GrowthPlan(
        base=beta,
        spine_law=shifted(alpha, 1),
        root_law=alpha,
        up_prob=1.0,
        eternal_down=True,
        ecs=ecs,
    )


def sample_gw(
    pi: OffspringLaw,
    seed: SeedLike,
    node_budget: int = DEFAULT_NODE_BUDGET,
    radius: Optional[int] = None,
) -> Sample:
    """Ordered GW(pi) tree; censored only when the budget runs out."""
    return _grow(gw_plan(pi), seed, radius, node_budget)


def sample_tgwt(
    pi: OffspringLaw,
    seed: SeedLike,
    node_budget: int = DEFAULT_NODE_BUDGET,
    radius: Optional[int] = None,
) -> Sample:
    """TGWT(pi): Geometric(1 - m) ancestors, each with pi_hat children around the spine child."""
    _require_subcritical(pi, "sample_tgwt")
    plan = GrowthPlan(base=pi, spine_law=size_biased(pi), root_law=pi, up_prob=pi.mean)
    return _grow(plan, seed, radius, node_budget)


def sample_egwt(
    pi: OffspringLaw,
    radius: int,
    seed: SeedLike,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Sample:
    """EGWT(pi) truncated at `radius`; the spine vertex at the radius is a boundary leaf."""
    if abs(pi.mean - 1.0) > MEAN_TOLERANCE:
        raise SamplerError(f"sample_egwt needs mean 1, got {pi.mean}")
    if pi.prob(1) >= 1.0:
        raise SamplerError("sample_egwt needs pi(1) < 1")
    r = _require_radius(radius, "sample_egwt")
    plan = GrowthPlan(base=pi, spine_law=size_biased(pi), root_law=pi, up_prob=1.0)
    return _grow(plan, seed, r, node_budget)


def sample_ekt(
    alpha: OffspringLaw,
    beta: OffspringLaw,
    radius: int,
    ecs: bool,
    seed: SeedLike,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Sample:
    """Bi-variate EKT(alpha, beta) ball: i.i.d. bushes strung on a bi-infinite spine."""
    if beta.mean > 1 + MEAN_TOLERANCE:
        raise SamplerError(f"sample_ekt needs m(beta) <= 1, got {beta.mean}")
    r = _require_radius(radius, "sample_ekt")
    return _grow(ekt_plan(alpha, beta, ecs), seed, r, node_budget)


def draw_tree(plan: GrowthPlan, node_budget: int, rng: np.random.Generator) -> OrderedTree:
    return BallGrower(plan, rng, None, node_budget).grow()


def gw_proposal(pi: OffspringLaw, size_cap: int = DEFAULT_SIZE_CAP) -> TreeProposal:
    """Whole GW(pi) trees, stopped one vertex past `size_cap`."""
    return partial(draw_tree, gw_plan(pi), size_cap + 1)


def _size_biased_pick(
    proposal: TreeProposal,
    rng: np.random.Generator,
    size_cap: int,
    max_attempts: int,
) -> Tuple[OrderedTree, int, int, int]:
    """Accept a proposal with probability #V / size_cap and pick a uniform vertex of it.

    Returns (tree, vertex, rejected, overflow); trees larger than the cap count as overflow.
    """
    rejected = overflow = 0
    for _ in range(max_attempts):
        tree = proposal(rng)
        if tree.size > size_cap or not tree.is_fully_resolved():
            overflow += 1
            continue
        if rng.random() * size_cap >= tree.size:
            rejected += 1
            continue
        return tree, int(rng.integers(tree.size)), rejected, overflow
    raise SamplerError(f"No proposal accepted in {max_attempts} attempts")


def typical_reroot(
    proposal: TreeProposal,
    seed: SeedLike,
    size_cap: int = DEFAULT_SIZE_CAP,
    radius: Optional[int] = None,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> Sample:
    """Size-biased tree with a uniformly chosen root; parent links are left untouched."""
    rng = np.random.default_rng(seed)
    tree, v, rejected, overflow = _size_biased_pick(proposal, rng, size_cap, max_attempts)
    rerooted = with_root(tree, v)
    if radius is not None:
        rerooted = restrict_to_ball(rerooted, radius)
    meta = SampleMeta(
        seed=seed,
        node_budget=size_cap + 1,
        rejected_count=rejected,
        overflow_count=overflow,
        size_cap=size_cap,
    )
    return Sample(rerooted, meta)


def unimodularised_ekt(
    alpha: OffspringLaw,
    beta: OffspringLaw,
    radius: int,
    seed: SeedLike,
    size_cap: int = DEFAULT_SIZE_CAP,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> Sample:
    """ECS EKT(alpha, beta) whose root is a uniform vertex of a size-biased root bush."""
    _require_subcritical(beta, "unimodularised_ekt")
    r = _require_radius(radius, "unimodularised_ekt")
    rng = np.random.default_rng(seed)
    proposal = partial(draw_tree, bush_plan(alpha, beta), size_cap + 1)
    bush, v, rejected, overflow = _size_biased_pick(proposal, rng, size_cap, max_attempts)

    grower = BallGrower(ekt_plan(alpha, beta, ecs=True), rng, r, node_budget)
    tree = grower.grow_around(bush, v)
    meta = SampleMeta(
        seed=seed,
        node_budget=node_budget,
        rejected_count=rejected,
        overflow_count=overflow,
        censored=grower.censored,
        size_cap=size_cap,
    )
    return Sample(tree, meta, extras={"bush_size": bush.size})
