from pathlib import Path

import pytest

from lothnn.lot import parse

DATA = Path(__file__).parent / "data"


def load(name: str):
    return parse((DATA / name).read_text())


@pytest.fixture(scope="session")
def three():
    return load("three.lot")


@pytest.fixture(scope="session")
def w1():
    return load("w1.lot")


@pytest.fixture(scope="session")
def cores8():
    """One LOT per isomorphism class of core-hypothesis LOTs on 8 vertices."""
    from lothnn.enumerator import enumerate_core

    return list(enumerate_core(8))


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
