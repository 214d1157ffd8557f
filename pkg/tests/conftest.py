import pytest

from overlaycap.capacity_model import DEFAULT_CHANNEL, DEFAULT_PR, DEFAULT_SR


@pytest.fixture
def pr():
    return DEFAULT_PR


@pytest.fixture
def sr():
    return DEFAULT_SR


@pytest.fixture
def ch():
    return DEFAULT_CHANNEL


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
