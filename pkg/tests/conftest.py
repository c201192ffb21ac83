import pytest

from dopalg.scalars import VarContext

# filled by test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def ctx2():
    return VarContext(("x1", "x2"))


@pytest.fixture
def ctx3():
    return VarContext(("x1", "x2", "x3"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
