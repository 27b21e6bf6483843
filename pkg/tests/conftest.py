import pytest

from dimerlab import fixtures

CONSISTENT = ["hex1", "hex2", "hex3", "hex4", "sq1", "sq2", "sq4", "sq6"]
INCONSISTENT = ["bad-bigon", "trivial-class"]
ALL = CONSISTENT + INCONSISTENT

# lines recorded by the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture(params=CONSISTENT)
def consistent_name(request):
    return request.param


@pytest.fixture
def hex1():
    return fixtures.graph("hex1")


@pytest.fixture
def sq1():
    return fixtures.graph("sq1")


@pytest.fixture
def sq2():
    return fixtures.graph("sq2")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
