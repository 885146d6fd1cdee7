"""
Brute-force path enumeration used to check the closed forms.
"""

from fractions import Fraction
from typing import Dict, List, Tuple, Union

from increments import IncrementLaw, LawKind
from walk_analytics.walk_analytics_types import AnalyticsError

Number = Union[Fraction, float]

EXACT_DENOMINATOR_LIMIT = 2**16


def _atom_probs(law: IncrementLaw) -> List[Tuple[int, Number]]:
    """Exact rationals when every probability has a small binary denominator, else floats."""
    exact = [Fraction(p) for _, p in law.atoms]
    if all(f.denominator <= EXACT_DENOMINATOR_LIMIT for f in exact):
        return [(v, f) for (v, _), f in zip(law.atoms, exact)]
    return [(v, p) for v, p in law.atoms]


def weak_record_enumerate(law: IncrementLaw, j: int, k: int, depth: int) -> Tuple[float, float]:
    """(lower_bound, residual_mass) for P[tau <= depth, S_tau = j, X_{tau-1} = k].

    tau is the first n >= 1 with S_n >= 0. residual_mass is the probability that tau has
    not happened after `depth` steps, so the untruncated probability lies in
    [lower_bound, lower_bound + residual_mass].
    """
    if depth < 1:
        raise AnalyticsError(f"depth must be >= 1, got {depth}")
    atoms = _atom_probs(law)
    zero: Number = Fraction(0) if isinstance(atoms[0][1], Fraction) else 0.0

    found = zero
    # mass by level, restricted to paths that have stayed strictly below 0
    alive: Dict[int, Number] = {0: Fraction(1) if isinstance(zero, Fraction) else 1.0}
    for _ in range(depth):
        nxt: Dict[int, Number] = {}
        for level, mass in alive.items():
            for v, p in atoms:
                new_level = level + v
                step_mass = mass * p
                if new_level >= 0:
                    if new_level == j and v == k:
                        found += step_mass
                else:
                    nxt[new_level] = nxt.get(new_level, zero) + step_mass
        alive = nxt
    residual = sum(alive.values(), zero)
    return float(found), float(residual)


def stopped_path_probabilities(law: IncrementLaw, max_len: int) -> Dict[Tuple[int, ...], float]:
    """Probabilities of every increment path of length <= max_len stopped on first reaching -1."""
    if law.kind is not LawKind.SKIP_FREE:
        raise AnalyticsError("stopped_path_probabilities needs a skip-free law")
    out: Dict[Tuple[int, ...], float] = {}
    frontier: List[Tuple[Tuple[int, ...], int, float]] = [((), 0, 1.0)]
    for _ in range(max_len):
        nxt: List[Tuple[Tuple[int, ...], int, float]] = []
        for path, level, prob in frontier:
            for v, p in law.atoms:
                new_path = path + (v,)
                if level + v == -1:
                    out[new_path] = prob * p
                else:
                    nxt.append((new_path, level + v, prob * p))
        frontier = nxt
    return out
