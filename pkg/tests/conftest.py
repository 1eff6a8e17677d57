from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ramanujan_roots import build_root_system

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def systems():
    return {
        "A1_m2": build_root_system("A1", [2.0]),
        "A1_m1": build_root_system("A1", [1.0]),
        "A1_m05": build_root_system("A1", [0.5]),
        "A1_m37": build_root_system("A1", [3.7]),
        "BC1": build_root_system("BC1", [1.5, 2.5]),
        "A2": build_root_system("A2", [1.0]),
        "B2": build_root_system("B2", [1.0, 2.0]),
        "BC2": build_root_system("BC2", [1.0, 2.0, 1.5]),
    }


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
