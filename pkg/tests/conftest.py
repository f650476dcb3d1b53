import pytest

from pisotile.qfield import pisot_new

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ctx43():
    return pisot_new(4, 3)


@pytest.fixture(scope="session")
def ctx103():
    return pisot_new(10, 3)


@pytest.fixture(scope="session")
def golden():
    return pisot_new(1, 1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
