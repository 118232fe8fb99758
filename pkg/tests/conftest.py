from importlib import resources

import pytest

from ail.model import EpistemicModel

# criterion number -> PASS/FAIL line, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def data_file(name: str) -> str:
    return str(resources.files("ail.data").joinpath(name))


@pytest.fixture(scope="session")
def example4() -> EpistemicModel:
    return EpistemicModel.load(data_file("example4.json"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
