import json
import pathlib

import numpy as np
import pytest

from optbench.problem import ObjectiveProblem

ROOT = pathlib.Path(__file__).resolve().parents[1]
DATA = pathlib.Path(__file__).resolve().parent / "data"

# (criterion, passed, detail) lines collected by test_acceptance
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def calibration():
    return json.loads((ROOT / "calibration.json").read_text())


@pytest.fixture(scope="session")
def probe_table():
    return json.loads((DATA / "probe_table.json").read_text())


class CountingProblem:
    """Wraps a problem so that every objective call is counted."""

    def __init__(self, problem: ObjectiveProblem):
        self.calls = 0
        inner = problem.objective

        def objective(x):
            self.calls += 1
            return inner(x)

        self.problem = ObjectiveProblem(
            problem.name, objective, problem.space, problem.known_optimum,
            problem.equality_constraints, problem.inequality_constraints,
        )


def excess_kurtosis(x):
    x = np.asarray(x, dtype=float)
    c = x - x.mean()
    m2 = np.mean(c * c)
    return float(np.mean(c ** 4) / (m2 * m2) - 3.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
