"""
Shared fixtures: the three reference drift laws and small hand-checked windows.
"""

import pytest

from increments import IncrementLaw, TrajectoryWindow, fixed_window

# x_{-6}, ..., x_{-1}; with S_0 = 0 the sums are S_{-6..0} = 1, 0, -1, 0, -1, -2, 0
COUNTEREXAMPLE = [-1, -1, 1, -1, -1, 2]


@pytest.fixture
def negative_law() -> IncrementLaw:
    return IncrementLaw.from_atoms([[-1, 0.75], [1, 0.25]])


@pytest.fixture
def zero_law() -> IncrementLaw:
    return IncrementLaw.from_atoms([[-1, 0.5], [1, 0.5]])


@pytest.fixture
def positive_law() -> IncrementLaw:
    return IncrementLaw.from_atoms([[-1, 0.25], [1, 0.75]])


@pytest.fixture
def closed_counterexample() -> TrajectoryWindow:
    return fixed_window(COUNTEREXAMPLE, lo=-6, closed=True)


@pytest.fixture
def open_counterexample() -> TrajectoryWindow:
    return fixed_window(COUNTEREXAMPLE, lo=-6, closed=False)
