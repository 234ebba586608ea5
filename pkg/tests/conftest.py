import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from coxhecke import CoxeterMatrix, build_ball  # noqa: E402
from coxhecke.verify import Workspace  # noqa: E402

INF = math.inf

GROUPS = {
    "A2~": CoxeterMatrix.triangle(3, 3, 3),
    "346": CoxeterMatrix.triangle(3, 4, 6),
    "34inf": CoxeterMatrix.triangle(3, 4, INF),
    "334": CoxeterMatrix.triangle(3, 3, 4),
    "33inf": CoxeterMatrix.triangle(3, 3, INF),
    "inf3": CoxeterMatrix.universal(3),
}

_balls = {}
_workspaces = {}


@pytest.fixture(scope="session")
def ball():
    """ball(name, radius) -> GroupBall, memoized across the session."""

    def get(name, radius):
        key = (name, radius)
        if key not in _balls:
            m = GROUPS[name] if isinstance(name, str) else name
            _balls[key] = build_ball(m, radius)
        return _balls[key]

    return get


@pytest.fixture(scope="session")
def workspace():
    """workspace(name, radius, margin=None, pair_budget=None) -> shared Workspace."""

    def get(name, radius, margin=None, pair_budget=None):
        key = (name, radius, margin, pair_budget)
        if key not in _workspaces:
            _workspaces[key] = Workspace(GROUPS[name], radius, pair_budget=pair_budget, margin=margin)
        return _workspaces[key]

    return get


# one line per acceptance criterion, collected by tests/test_acceptance.py
CRITERIA_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)
