from collections import Counter
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
import numpy.typing as npt
import pandas as pd
from scipy import stats as scipy_stats

from increments import SeedLike, TrajectoryWindow
from samplers import Sample, SamplerSpec
from stats.stats_types import (
    EmpiricalLaw,
    IndependenceReport,
    LawEstimate,
    MtpReport,
    ScalarEstimate,
    StatsError,
    TransportFunction,
)
from trees import OrderedTree, TreeBuilder, TreeError, ball_key, distances_from
from utils.parallel_utils import run_sharded

T = TypeVar("T")

SampleFn = Callable[[SeedLike], Sample]
# reads one number or key from a tree; None (or a TreeError) drops the sample, so
# censored vertices only cost a sample when the reducer actually looks at them
Reducer = Callable[[OrderedTree], Optional[T]]
WindowReducer = Callable[[TrajectoryWindow], Optional[T]]

Z95 = float(scipy_stats.norm.ppf(0.975))


def _reduce_range(
    sampler: SampleFn, reduce: Reducer[T], seed: int, start: int, stop: int
) -> List[Optional[T]]:
    out: List[Optional[T]] = []
    for i in range(start, stop):
        sample = sampler([seed, i])
        try:
            out.append(reduce(sample.tree))
        except TreeError:
            out.append(None)
    return out


def collect(
    sampler: SampleFn, reduce: Reducer[T], n: int, seed: int, threads: int = 1
) -> Tuple[List[T], int]:
    """reduce(tree) of samples [seed, 0] .. [seed, n-1] in index order, plus the dropped count.

    With threads > 1, sampler and reduce must be picklable.
    """
    if n < 1:
        raise StatsError(f"Need at least one sample, got {n}")
    results = run_sharded(partial(_reduce_range, sampler, reduce, seed), n, threads)
    kept = [r for r in results if r is not None]
    return kept, n - len(kept)


def root_ball_key(r: int, t: OrderedTree) -> str:
    return ball_key(t, t.root, r)


def empirical_local_law(
    sampler: SampleFn, r: int, n: int, seed: int, threads: int = 1
) -> EmpiricalLaw:
    if r < 0:
        raise StatsError(f"Radius must be >= 0, got {r}")
    keys, dropped = collect(sampler, partial(root_ball_key, r), n, seed, threads)
    law = EmpiricalLaw.from_keys(list(keys), r)
    law.dropped = dropped
    return law


def tv_distance(a: EmpiricalLaw, b: EmpiricalLaw) -> float:
    """(1/2) sum over keys of |p_a - p_b|."""
    if a.radius != b.radius:
        raise StatsError(f"Radii differ: {a.radius} vs {b.radius}")
    pa = a.probabilities()
    pb = b.probabilities()
    keys = set(pa) | set(pb)
    return 0.5 * sum(abs(pa.get(k, 0.0) - pb.get(k, 0.0)) for k in keys)


def law_differences(a: EmpiricalLaw, b: EmpiricalLaw, top: int = 20) -> List[Dict[str, object]]:
    """Keys with the largest |p_a - p_b|, for reports."""
    pa = a.probabilities()
    pb = b.probabilities()
    rows = [(k, pa.get(k, 0.0), pb.get(k, 0.0)) for k in set(pa) | set(pb)]
    rows.sort(key=lambda row: (-abs(row[1] - row[2]), row[0]))
    return [{"key": k, "p_a": p_a, "p_b": p_b} for k, p_a, p_b in rows[:top]]


def transport_masses(h: TransportFunction, t: OrderedTree) -> Optional[Tuple[float, float]]:
    """(sum_v h(T, o, v), sum_u h(T, u, o)) at the root, or None if the ball is unresolved."""
    o = t.root
    near = distances_from(t, o, h.radius)
    if not all(t.is_interior(v) for v in near):
        return None
    sent = sum(h(t, o, v) for v in near)
    received = sum(h(t, u, o) for u in near)
    return sent, received


def _ci95(values: npt.NDArray[np.float64]) -> float:
    if len(values) < 2:
        return float("inf")
    return float(Z95 * np.std(values, ddof=1) / np.sqrt(len(values)))


def _mtp_report(name: str, pairs: Sequence[Tuple[float, float]], dropped: int) -> MtpReport:
    """Paired z-score of sent minus received; 0 when every pair agrees exactly."""
    if not pairs:
        raise StatsError(f"Transport '{name}': every sample was censored around the root")
    sent = np.array([p[0] for p in pairs], dtype=np.float64)
    received = np.array([p[1] for p in pairs], dtype=np.float64)
    diff = sent - received
    mean_diff = float(diff.mean())
    sd = float(diff.std(ddof=1)) if len(diff) > 1 else 0.0
    if sd == 0.0:
        z = 0.0 if mean_diff == 0.0 else float(np.copysign(np.inf, mean_diff))
    else:
        z = mean_diff / (sd / np.sqrt(len(diff)))
    return MtpReport(
        transport=name,
        n=len(pairs),
        dropped=dropped,
        mean_out=float(sent.mean()),
        mean_in=float(received.mean()),
        ci_out=_ci95(sent),
        ci_in=_ci95(received),
        z_score=float(z),
    )


def mtp_check(
    sampler: SampleFn, h: TransportFunction, n: int, seed: int, threads: int = 1
) -> MtpReport:
    """Compare the mass the root sends with the mass it receives under h."""
    pairs, dropped = collect(sampler, partial(transport_masses, h), n, seed, threads)
    return _mtp_report(h.name, pairs, dropped)


def suite_masses(
    family: Sequence[TransportFunction], t: OrderedTree
) -> List[Optional[Tuple[float, float]]]:
    return [transport_masses(h, t) for h in family]


def mtp_suite(
    sampler: SampleFn,
    family: Sequence[TransportFunction],
    n: int,
    seed: int,
    threads: int = 1,
) -> List[MtpReport]:
    """mtp_check for every transport of the family on one shared batch of samples.

    A sample censored for one transport still counts for the others.
    """
    per_sample, _ = collect(sampler, partial(suite_masses, list(family)), n, seed, threads)
    reports = []
    for j, h in enumerate(family):
        pairs = [m for masses in per_sample if (m := masses[j]) is not None]
        reports.append(_mtp_report(h.name, pairs, n - len(pairs)))
    return reports


def non_descendant_key(r: int, t: OrderedTree) -> Tuple[int, str]:
    """(d_1(root), ball key of radius r around the root with its descendants removed)."""
    o = t.root
    if not t.children_known(o):
        raise TreeError("Root offspring is not resolved")
    below = set(t.subtree(o)) - {o}
    builder = TreeBuilder()
    ids = {
        v: builder.add_vertex(label=t.labels[v], flag=t.flags[v])
        for v in t.vertices()
        if v not in below
    }
    for v in ids:
        p = t.parent[v]
        if p is not None:
            builder.attach(ids[v], ids[p])
    builder.root = ids[o]
    return t.out_degree(o), ball_key(builder.build(), r=r)


def _joint_tv(
    codes_a: npt.NDArray[np.int64], codes_b: npt.NDArray[np.int64], shape: Tuple[int, int]
) -> float:
    joint = np.zeros(shape, dtype=np.float64)
    np.add.at(joint, (codes_a, codes_b), 1.0)
    joint /= joint.sum()
    product = np.outer(joint.sum(axis=1), joint.sum(axis=0))
    return 0.5 * float(np.abs(joint - product).sum())


def independence_from_pairs(
    left: Sequence[Union[int, str]],
    right: Sequence[Union[int, str]],
    permutations: int,
    seed: int,
) -> Tuple[float, float]:
    """TV between the joint law and the product of marginals, with a permutation p-value."""
    if len(left) != len(right) or not left:
        raise StatsError("Independence check needs two equally long, non-empty samples")
    codes_a, levels_a = pd.factorize(pd.Series(list(left)), sort=True)
    codes_b, levels_b = pd.factorize(pd.Series(list(right)), sort=True)
    shape = (len(levels_a), len(levels_b))
    observed = _joint_tv(codes_a, codes_b, shape)

    rng = np.random.default_rng(seed)
    at_least = 0
    for _ in range(permutations):
        if _joint_tv(rng.permutation(codes_a), codes_b, shape) >= observed:
            at_least += 1
    return observed, (1 + at_least) / (1 + permutations)


def independence_check(
    sampler: SampleFn,
    n: int,
    seed: int,
    radius: int = 2,
    permutations: int = 200,
    threads: int = 1,
) -> IndependenceReport:
    """Is d_1(root) independent of the radius-r ball of the non-descendant tree?"""
    pairs, dropped = collect(sampler, partial(non_descendant_key, radius), n, seed, threads)
    if not pairs:
        raise StatsError(f"All {n} samples were censored around the root")
    tv, p_value = independence_from_pairs(
        [d for d, _ in pairs], [k for _, k in pairs], permutations, seed
    )
    return IndependenceReport(
        tv=tv, p_value=p_value, n=len(pairs), dropped=dropped, permutations=permutations
    )


def root_degree(t: OrderedTree) -> Optional[float]:
    return float(t.out_degree(t.root)) if t.children_known(t.root) else None


def has_parent(t: OrderedTree) -> Optional[float]:
    known = t.has_parent(t.root)
    return None if known is None else float(known)


def ancestor_count(t: OrderedTree) -> Optional[float]:
    """Number of ancestors of the root, when the stored top is known to be parentless."""
    if not t.is_interior(t.top):
        return None
    return float(t.depth(t.root))


def subtree_size(t: OrderedTree) -> Optional[float]:
    below = t.subtree(t.root)
    if not all(t.is_interior(v) for v in below):
        return None
    return float(len(below))


def parent_degree(t: OrderedTree) -> Optional[float]:
    """d_1 of the root's parent; None without a resolved parent."""
    p = t.parent[t.root]
    if p is None or not t.children_known(p):
        return None
    return float(t.out_degree(p))


STATISTICS: Dict[str, Reducer[float]] = {
    "root_degree": root_degree,
    "has_parent": has_parent,
    "ancestor_count": ancestor_count,
    "subtree_size": subtree_size,
    "parent_degree": parent_degree,
}


def scalar_estimate(
    sampler: SampleFn,
    statistic: str,
    n: int,
    seed: int,
    threads: int = 1,
) -> ScalarEstimate:
    """Monte Carlo mean of a named statistic with a normal 95% half-width."""
    if statistic not in STATISTICS:
        raise StatsError(f"Unknown statistic '{statistic}', expected one of {list(STATISTICS)}")
    values, dropped = collect(sampler, STATISTICS[statistic], n, seed, threads)
    if not values:
        raise StatsError(f"Statistic '{statistic}' was unresolved on all {n} samples")
    array = np.array(values, dtype=np.float64)
    ci95 = _ci95(array) if len(array) > 1 else 0.0
    return ScalarEstimate(
        statistic=statistic,
        mean=float(array.mean()),
        ci95=ci95,
        n=len(array),
        dropped=dropped,
        stderr=ci95 / Z95,
    )


def law_from_values(statistic: str, values: Sequence[Optional[float]]) -> LawEstimate:
    """Empirical law of integer values; None entries count as dropped."""
    kept = [int(v) for v in values if v is not None]
    return LawEstimate(
        statistic=statistic,
        counts=dict(Counter(kept)),
        n=len(kept),
        dropped=len(values) - len(kept),
    )


def law_estimate(
    sampler: SampleFn,
    statistic: str,
    n: int,
    seed: int,
    threads: int = 1,
) -> LawEstimate:
    """Empirical law of a named integer statistic over n samples."""
    if statistic not in STATISTICS:
        raise StatsError(f"Unknown statistic '{statistic}', expected one of {list(STATISTICS)}")
    values, dropped = collect(sampler, STATISTICS[statistic], n, seed, threads)
    if not values:
        raise StatsError(f"Statistic '{statistic}' was unresolved on all {n} samples")
    estimate = law_from_values(statistic, values)
    estimate.dropped = dropped
    return estimate


def _reduce_windows(
    spec: SamplerSpec, reduce: WindowReducer[T], seed: int, start: int, stop: int
) -> List[Optional[T]]:
    return [reduce(spec.window([seed, i])) for i in range(start, stop)]


def collect_windows(
    spec: SamplerSpec, reduce: WindowReducer[T], n: int, seed: int, threads: int = 1
) -> Tuple[List[T], int]:
    """Like collect, but reduce reads the increment window behind each record sample."""
    if n < 1:
        raise StatsError(f"Need at least one sample, got {n}")
    results = run_sharded(partial(_reduce_windows, spec, reduce, seed), n, threads)
    kept = [r for r in results if r is not None]
    return kept, n - len(kept)
