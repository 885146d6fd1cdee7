from typing import Callable, Tuple

import numpy as np
import numpy.typing as npt
from scipy import optimize

from increments import IncrementLaw, LawKind, OffspringLaw, mean_of
from walk_analytics.walk_analytics_types import AnalyticsError, DerivedLaws, HittingQuery

ROOT_TOLERANCE = 1e-12
NORMALIZATION_TOLERANCE = 1e-10


def _require_skip_free(law: IncrementLaw, operation: str) -> None:
    if law.kind is not LawKind.SKIP_FREE:
        raise AnalyticsError(f"{operation} needs a skip-free law, got {law.kind.value}")


def _psi_coefficients(law: IncrementLaw) -> npt.NDArray[np.float64]:
    """Ascending coefficients of psi(x) = sum_{k>=0} p_k x^{k+1} + p_{-1} - x."""
    coeffs = np.zeros(law.max_value + 2)
    for v, p in law.atoms:
        coeffs[v + 1] += p
    coeffs[1] -= 1.0
    return coeffs


def _unit_interval_root(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
) -> float:
    """Root of f in (0, 1) given f > 0 near 0 and f < 0 just below 1."""
    lo = 0.5
    while f(lo) <= 0 and lo > 1e-300:
        lo /= 2
    gap = 0.5
    while f(1.0 - gap) >= 0:
        gap /= 2
        if gap < 1e-16:
            return 1.0
    upper = 1.0 - gap
    if lo >= upper:
        lo = 0.0
    root = float(optimize.bisect(f, lo, upper, xtol=ROOT_TOLERANCE, maxiter=200))

    try:
        polished = float(optimize.newton(f, root, fprime=fprime, tol=1e-15, maxiter=20))
    except RuntimeError:
        return root
    if lo <= polished <= upper and abs(f(polished)) <= abs(f(root)):
        return polished
    return root


def hitting_prob_c(law: IncrementLaw) -> float:
    """P_0[the walk ever hits -1]; 1 unless the mean is positive."""
    _require_skip_free(law, "hitting_prob_c")
    if mean_of(law) <= 0:
        return 1.0

    # np.polyval wants descending powers and evaluates by Horner's rule
    descending = _psi_coefficients(law)[::-1]
    derivative = np.polyder(descending)

    def psi(x: float) -> float:
        return float(np.polyval(descending, x))

    def dpsi(x: float) -> float:
        return float(np.polyval(derivative, x))

    return _unit_interval_root(psi, dpsi)


def hitting_prob(law: IncrementLaw, target: int) -> float:
    """P_0[eta_target < inf] = c^{-target} for target <= 0."""
    if target > 0:
        raise AnalyticsError(f"Downward hitting needs target <= 0, got {target}")
    return hitting_prob_c(law) ** (-target)


def lundberg_rate(law: IncrementLaw, direction: str) -> float:
    """Per-level probability that the walk ever moves `direction` ("down" or "up") by one level.

    Solves E[r^X] = 1 for r in (0, 1) when the drift points away from `direction`;
    returns 1.0 when the drift does not (no bound) and 0.0 when the move is impossible.
    For a skip-free law with positive mean, the "down" rate equals hitting_prob_c.
    """
    if direction not in ("down", "up"):
        raise AnalyticsError(f"direction must be 'down' or 'up', got {direction!r}")
    sign = 1 if direction == "down" else -1
    values = sign * law.values.astype(np.float64)
    probs = law.probs
    if float(np.dot(values, probs)) <= 0:
        return 1.0
    if values.min() >= 0:
        return 0.0
    if direction == "down" and law.kind is LawKind.SKIP_FREE:
        return hitting_prob_c(law)

    def g(r: float) -> float:
        return float(np.dot(probs, np.power(r, values))) - 1.0

    def dg(r: float) -> float:
        return float(np.dot(probs * values, np.power(r, values - 1)))

    return _unit_interval_root(g, dg)


def offspring_from_increment(law: IncrementLaw) -> OffspringLaw:
    """pi(k) = P[X_0 = k - 1], the law of X_0 + 1."""
    _require_skip_free(law, "offspring_from_increment")
    return OffspringLaw.from_atoms([(v + 1, p) for v, p in law.atoms])


def doob_transform(law: IncrementLaw) -> IncrementLaw:
    """Law of the walk conditioned to hit -1: p_hat_k = p_k c^k."""
    _require_skip_free(law, "doob_transform")
    if mean_of(law) <= 0:
        raise AnalyticsError(f"doob_transform needs a positive mean, got {float(mean_of(law))}")
    c = hitting_prob_c(law)
    weighted = [(v, p * c**v) for v, p in law.atoms]
    total = sum(p for _, p in weighted)
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise AnalyticsError(f"Doob transform sums to {total!r}")
    doob = IncrementLaw.from_atoms([(v, p / total) for v, p in weighted], LawKind.SKIP_FREE)
    if mean_of(doob) >= 0:
        raise AnalyticsError(f"Doob transform has non-negative mean {float(mean_of(doob))}")
    return doob


def derive_pis(law: IncrementLaw) -> Tuple[OffspringLaw, OffspringLaw]:
    """(pi_tilde, pi_bar) with pi_tilde(k) = c^{k-1} P[X=k-1], pi_bar(k) = P[X>=k] c^k.

    Defined for mean >= 0 (c = 1 at zero mean).
    """
    _require_skip_free(law, "derive_pis")
    if mean_of(law) < 0:
        raise AnalyticsError(f"derive_pis needs a non-negative mean, got {float(mean_of(law))}")
    c = hitting_prob_c(law)
    pi_tilde = OffspringLaw.from_atoms(
        [(v + 1, c**v * p) for v, p in law.atoms], normalize=True
    )
    pi_bar = OffspringLaw.from_atoms(
        [(k, law.tail(k) * c**k) for k in range(0, law.max_value + 1)], normalize=True
    )
    return pi_tilde, pi_bar


def weak_record_joint(law: IncrementLaw, j: int, k: int) -> float:
    """P[tau < inf, S_tau = j, X_{tau-1} = k] = P[X_0 = k] c^{k-j}, tau the first weak record."""
    if not 0 <= j <= k:
        raise AnalyticsError(f"weak_record_joint needs 0 <= j <= k, got j={j}, k={k}")
    return law.prob(k) * hitting_prob_c(law) ** (k - j)


def derived_laws(law: IncrementLaw) -> DerivedLaws:
    mean = mean_of(law)
    c = hitting_prob_c(law)
    if mean > 0:
        doob = doob_transform(law)
    else:
        doob = law
    pi_tilde, pi_bar = derive_pis(law) if mean >= 0 else (None, None)
    return DerivedLaws(
        base=law,
        mean=mean,
        c=c,
        doob=doob,
        offspring=offspring_from_increment(law),
        pi_tilde=pi_tilde,
        pi_bar=pi_bar,
    )


def simulate_hitting_fraction(
    law: IncrementLaw, query: HittingQuery, n_walks: int, seed: int
) -> float:
    """Monte Carlo fraction of walks from 0 that reach query.target within query.horizon."""
    if query.target >= 0:
        raise AnalyticsError(f"Hitting target must be negative, got {query.target}")
    rng = np.random.default_rng(seed)
    levels = np.zeros(n_walks, dtype=np.int64)
    hit = np.zeros(n_walks, dtype=bool)
    cdf = law.cdf
    values = law.values
    for _ in range(query.horizon):
        active = ~hit
        n_active = int(active.sum())
        if n_active == 0:
            break
        idx = np.minimum(np.searchsorted(cdf, rng.random(n_active), side="right"), len(cdf) - 1)
        levels[active] += values[idx]
        hit |= levels <= query.target
    return float(hit.mean())
