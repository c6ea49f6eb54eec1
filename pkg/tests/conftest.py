import random
from pathlib import Path

import pytest

from chanrestrict.formats import kind_of, parse_model

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "chanrestrict" / "fixtures"


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240611, help="seed for randomised property drivers")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


def load_fixture(name: str):
    path = FIXTURES / name
    return parse_model(path.read_text(), kind_of(path))


@pytest.fixture
def fixture():
    return load_fixture


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
