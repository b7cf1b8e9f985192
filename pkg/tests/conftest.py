import numpy as np
import pytest

from monorep import Grid, using_backend
from monorep._accel import HAS_NUMBA

BACKENDS = ["numpy"] + (["numba"] if HAS_NUMBA else [])


@pytest.fixture(scope="session")
def line():
    """[-4, 4] with 801 nodes, h = 0.01."""
    return Grid.uniform(-4, 4, 801)


@pytest.fixture(scope="session")
def window():
    """(x, x*) window [-4, 4]^2 with 161 nodes per axis, h = 0.05."""
    return Grid.uniform(-4, 4, 161, dim=2)


@pytest.fixture(scope="session")
def small_window():
    return Grid.uniform(-4, 4, 81, dim=2)


@pytest.fixture(params=BACKENDS)
def backend(request):
    with using_backend(request.param):
        yield request.param


def interior(grid, margin=1.0):
    return grid.interior_mask(margin)


def diag_hausdorff_ok(graph, tol):
    """Every point of ``graph`` is within ``tol`` of the diagonal x* = x."""
    return np.all(np.abs(graph.xs - graph.xstars) <= tol)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for n, m in sys.modules.items() if n.endswith("test_acceptance")), None)
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
