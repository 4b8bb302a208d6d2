from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
CLEVELAND = ROOT / "data" / "processed.cleveland.data"


@pytest.fixture(scope="session")
def cleveland_path():
    if not CLEVELAND.exists():
        pytest.skip("Cleveland data file missing; run scripts/build_cleveland_data.py")
    return CLEVELAND


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
