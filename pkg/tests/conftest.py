from __future__ import annotations

import random

import pytest

from dtnvicinity.trace import ContactTrace

# 4-node worked example used across the suite:
# (1,2) in contact over [0,100), (2,3) over [50,150), (3,4) over [120,200).
TRACE_X_INTERVALS = [(1, 2, 0.0, 100.0), (2, 3, 50.0, 150.0), (3, 4, 120.0, 200.0)]


@pytest.fixture
def trace_x() -> ContactTrace:
    return ContactTrace.build(TRACE_X_INTERVALS)


@pytest.fixture
def fig_square() -> ContactTrace:
    """Static 4-cycle A-B, A-C, B-D, C-D (nodes 0..3), the golden probing case."""
    return ContactTrace.build(
        [(0, 1, 0.0, 100.0), (0, 2, 0.0, 100.0), (1, 3, 0.0, 100.0), (2, 3, 0.0, 100.0)]
    )


@pytest.fixture
def chain5() -> ContactTrace:
    """Static path 0-1-2-3-4."""
    return ContactTrace.build([(i, i + 1, 0.0, 100.0) for i in range(4)])


def make_random_trace(
    rng: random.Random,
    max_nodes: int = 10,
    max_intervals: int = 60,
    horizon: int = 100,
) -> ContactTrace:
    """Seeded random trace with integer endpoints (keeps epoch counts small)."""
    n = rng.randint(2, max_nodes)
    count = rng.randint(1, max_intervals)
    raw = []
    for _ in range(count):
        a, b = rng.sample(range(n), 2)
        start = rng.randrange(0, horizon)
        end = rng.randrange(start + 1, horizon + 1)
        raw.append((a, b, float(start), float(end)))
    return ContactTrace.build(raw, horizon=float(horizon))
