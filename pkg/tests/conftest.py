import numpy as np
import pytest

from grplus.core import PointMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_matrix(rng, n):
    """Gaussian 2 x n matrix; generic, so no zero or collinear columns."""
    return PointMatrix(rng.standard_normal((n, 2)))


def det2(a, b):
    """Oracle 2x2 determinant through numpy's LU-based det."""
    return float(np.linalg.det(np.column_stack([a, b])))


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
