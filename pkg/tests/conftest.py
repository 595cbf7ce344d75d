import itertools

import numpy as np
import pytest

from qcdesign import _kernels
from qcdesign.gray import SignMatrix

BACKENDS = list(_kernels.available_backends())


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def full_factorial(k: int) -> SignMatrix:
    rows = list(itertools.product((1, -1), repeat=k))
    return SignMatrix(np.array(rows, dtype=np.int8))


def random_design(rng, runs: int, factors: int) -> SignMatrix:
    return SignMatrix(rng.choice(np.array([1, -1], dtype=np.int8), size=(runs, factors)))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion."""

    def record(number, title, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {number}: {title}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
