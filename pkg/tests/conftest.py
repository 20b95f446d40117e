"""Shared fixtures: oracle-table access and hypothesis defaults."""

from __future__ import annotations

import csv
import pathlib

import pytest
from hypothesis import HealthCheck, settings

FIXTURE_DIR = pathlib.Path(__file__).parent / "fixtures"

settings.register_profile(
    "suite",
    derandomize=True,
    deadline=None,
    max_examples=30,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def load_reference_rows(name: str) -> list[dict]:
    with open(FIXTURE_DIR / name, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def special_function_rows() -> list[dict]:
    return load_reference_rows("special_function_reference.csv")


@pytest.fixture(scope="session")
def green_reference_rows() -> list[dict]:
    return load_reference_rows("green_reference.csv")
