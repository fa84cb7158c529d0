import sys
from pathlib import Path

import pytest

from blockade.committee import build, parse_ctree
from blockade.matroids import parse_tmat

DATA = Path(__file__).parent / "data"


def load_tree(name):
    return parse_ctree((DATA / f"{name}.ctree").read_text())


def load_pair(name):
    return parse_tmat((DATA / f"{name}.tmat").read_text())


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def fx1():
    return load_tree("fx1")


@pytest.fixture
def fx2():
    return load_tree("fx2")


@pytest.fixture
def fx3():
    return load_tree("fx3")


@pytest.fixture
def fx4():
    return load_tree("fx4")


@pytest.fixture
def fx5():
    return load_tree("fx5")


@pytest.fixture
def fxp():
    return build({"v1": ("r", "-"), "v2": ("v1", "open"), "b": ("v1", "B")})


@pytest.fixture
def fxm2():
    return load_pair("fxm2")


@pytest.fixture
def fxm4():
    return load_pair("fxm4")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
