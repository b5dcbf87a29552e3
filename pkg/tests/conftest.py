import warnings

import pytest

from scurve import build_scenarios, builtin_dataset, to_elapsed


@pytest.fixture(scope="session")
def facebook():
    return to_elapsed(builtin_dataset("facebook-users"))


@pytest.fixture(scope="session")
def facebook_scenarios(facebook):
    return build_scenarios(facebook, seed=0)


@pytest.fixture(scope="session")
def groupon():
    return to_elapsed(builtin_dataset("groupon-repeat-customers"))


@pytest.fixture(scope="session")
def groupon_scenarios(groupon):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_scenarios(groupon, seed=0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
