import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cogmac import Scenario, parse_scenario

_SCENARIOS = Path(__file__).parent.parent / "src" / "cogmac" / "scenarios"


def _load(name: str) -> Scenario:
    return parse_scenario((_SCENARIOS / f"{name}.ini").read_text())


@pytest.fixture(scope="session")
def admittance() -> Scenario:
    return _load("admittance")


@pytest.fixture(scope="session")
def comparison() -> Scenario:
    return _load("comparison")


@pytest.fixture(scope="session")
def comparison_symmetric() -> Scenario:
    return _load("comparison_symmetric")


@pytest.fixture(scope="session")
def parametric() -> Scenario:
    return _load("parametric")
