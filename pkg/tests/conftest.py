import pytest

from magrobot import default_scene, run_em_sweep

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def scene():
    return default_scene()


@pytest.fixture(scope="session")
def curve(scene):
    """Default 0-500 um sweep at order 8."""
    return run_em_sweep(scene)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
