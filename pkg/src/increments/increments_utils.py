from fractions import Fraction
from typing import Dict, Optional, Sequence

import numpy as np
import numpy.typing as npt

from increments.increments_sources import IidSource, QueueChainSource
from increments.increments_types import (
    IncrementLaw,
    IncrementLawError,
    QueueChainParams,
    SeedLike,
)
from increments.increments_window import (
    DEFAULT_CHUNK,
    DEFAULT_EXTENSION_BUDGET,
    TrajectoryWindow,
)


def mean_of(law: IncrementLaw) -> Fraction:
    """Exact E[X] over the atoms, with each float probability read as its exact rational."""
    return sum((Fraction(v) * Fraction(p) for v, p in law.atoms), Fraction(0))


def drift_sign(law: IncrementLaw, tolerance: float = 1e-12) -> int:
    """-1, 0 or 1 for negative, (numerically) zero or positive mean."""
    mean = float(mean_of(law))
    if abs(mean) <= tolerance:
        return 0
    return 1 if mean > 0 else -1


def iid_window(
    law: IncrementLaw,
    seed: SeedLike,
    extension_budget: int = DEFAULT_EXTENSION_BUDGET,
    chunk: int = DEFAULT_CHUNK,
) -> TrajectoryWindow:
    return TrajectoryWindow(IidSource(law, seed), extension_budget=extension_budget, chunk=chunk)


def queue_window(
    params: QueueChainParams,
    seed: SeedLike,
    extension_budget: int = DEFAULT_EXTENSION_BUDGET,
    chunk: int = DEFAULT_CHUNK,
) -> TrajectoryWindow:
    return TrajectoryWindow(
        QueueChainSource(params, seed), extension_budget=extension_budget, chunk=chunk
    )


def fixed_window(
    values: Sequence[int], lo: Optional[int] = None, closed: bool = False
) -> TrajectoryWindow:
    """Deterministic window holding x_lo, ..., x_{lo+len-1}; lo defaults to -len(values).

    A closed window is the whole sequence. An open window leaves everything past its
    edges unknown, so scans that reach an edge come back censored.
    """
    start = -len(values) if lo is None else lo
    return TrajectoryWindow.from_values(values, start, closed)


def partial_sum(w: TrajectoryWindow, j: int, k: int) -> int:
    """y(j, k) = S_k - S_j = sum of x_j .. x_{k-1}."""
    if j > k:
        raise ValueError(f"partial_sum needs j <= k, got j={j}, k={k}")
    return w.s(k) - w.s(j)


def queue_transition_matrix(params: QueueChainParams, n_states: int) -> npt.NDArray[np.float64]:
    """Jump-chain kernel truncated to states 0..n_states-1 (the top state reflects down)."""
    up = params.up_prob
    matrix = np.zeros((n_states, n_states))
    matrix[0, 1] = 1.0
    for k in range(1, n_states - 1):
        matrix[k, k + 1] = up
        matrix[k, k - 1] = 1.0 - up
    matrix[n_states - 1, n_states - 2] = 1.0
    return matrix


def queue_stationary_law(params: QueueChainParams, n_states: int = 201) -> npt.NDArray[np.float64]:
    """Solve eta P = eta, sum(eta) = 1 on the truncated chain by least squares."""
    if n_states < 3:
        raise IncrementLawError(f"Need at least 3 states, got {n_states}")
    matrix = queue_transition_matrix(params, n_states)
    system = np.vstack((matrix.T - np.eye(n_states), np.ones(n_states)))
    rhs = np.zeros(n_states + 1)
    rhs[-1] = 1.0
    eta, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    return np.asarray(eta, dtype=np.float64)


def queue_stationary_closed_form(
    params: QueueChainParams, n_states: int = 201
) -> npt.NDArray[np.float64]:
    load = params.load
    eta = np.empty(n_states)
    eta[0] = (params.mu - params.lam) / (2 * params.mu)
    ks = np.arange(1, n_states)
    eta[1:] = eta[0] * (params.lam + params.mu) / params.mu * load ** (ks - 1)
    return eta


def law_from_config(config: Dict[str, object]) -> IncrementLaw:
    """Read a law from a config section: inline `atoms` or a JSON `law_file`."""
    if "law_file" in config:
        return IncrementLaw.from_json_file(str(config["law_file"]))
    if "atoms" in config:
        return IncrementLaw.from_dict({"atoms": config["atoms"], "kind": config.get("kind")})
    raise IncrementLawError("Config needs either 'atoms' or 'law_file'")
