import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from torsionfree.cases import named_ring

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def rings():
    return {name: named_ring(name) for name in (
        "f2", "f3", "f2_dual_numbers", "f3_x3", "f2_x2_y2", "f2_rad_square_zero",
        "f3_triangular", "f3_skew_triangular", "f3_example_ring")}


def brute_vectors(p, n):
    """Every vector of F_p^n, as an array of rows."""
    grids = np.meshgrid(*[np.arange(p)] * n, indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1)


@pytest.fixture(scope="session")
def shipped_reports():
    """One full run of every shipped case, keyed by case name."""
    from torsionfree.cases import shipped_case_paths
    from torsionfree.cli import run_case

    return {r["case"]: r for r in (run_case(p) for p in shipped_case_paths())}


_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    n, title = mark.args
    ok = call.excinfo is None
    prev = _CRITERIA.get(n, (title, True))
    _CRITERIA[n] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, ok = _CRITERIA[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}")
