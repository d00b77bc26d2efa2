from __future__ import annotations

import sys
from pathlib import Path

import pytest

from coaplan import load_scenario, parse_kb

TESTS = Path(__file__).resolve().parent
REPO = TESTS.parent
FIXTURES = REPO / "fixtures"
GOLDEN = TESTS / "golden"

sys.path.insert(0, str(TESTS))  # oracles / randgen are plain modules


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fpol_scenario():
    return load_scenario(read_fixture("fpol-scenario.json"))


@pytest.fixture(scope="session")
def fpol_kb():
    return parse_kb(read_fixture("fpol.kb"))


@pytest.fixture(scope="session")
def delta_scenario():
    return load_scenario(read_fixture("delta-offense.json"))


@pytest.fixture(scope="session")
def delta_kb():
    return parse_kb(read_fixture("delta.kb"))
