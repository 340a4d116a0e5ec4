import pytest

from powapprox import make_context


@pytest.fixture(scope="session")
def ctx128():
    return make_context(128)


@pytest.fixture(scope="session")
def ctx256():
    return make_context(256)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def verdicts():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
