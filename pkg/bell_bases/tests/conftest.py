from __future__ import annotations

import sys
from pathlib import Path

import pytest

# Ensure the package root is importable when tests are executed from the project directory.
PROJECT_ROOT = Path(__file__).resolve().parents[2]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run expensive numerical sweeps",
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="Slow sweep disabled. Use --runslow to enable.")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)

