from pathlib import Path

import pytest

PROBLEMS_DIR = Path(__file__).resolve().parent.parent / "problems"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run exhaustive sweeps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def problems_dir() -> Path:
    return PROBLEMS_DIR
