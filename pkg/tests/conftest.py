"""Shared fixtures; the grid-refinement study is expensive and reused."""

import time
from dataclasses import dataclass

import pytest

from psdirac import oracle as oc

# the six bound states covering N = 1, 3, 5 including every sector split
SIX_STATES = [(0, 0), (1, 0), (0, 1), (0, 2), (1, 1), (2, 0)]
STUDY_SPACINGS = (0.04, 0.02, 0.01)


@dataclass(frozen=True)
class OracleStudySet:
    results: dict
    elapsed: float


@pytest.fixture(scope="session")
def oracle_six_states() -> OracleStudySet:
    started = time.monotonic()
    results = {}
    for n, k in SIX_STATES:
        N = 2 * (n + k) + 1
        grids = [oc.RadialGrid.for_r_max(h, 40.0 * N) for h in STUDY_SPACINGS]
        results[(n, k)] = oc.convergence_study(k, n, grids)
    return OracleStudySet(results=results, elapsed=time.monotonic() - started)
