"""
Shared fixtures for the spreadhom test suite.
"""
import json

import pytest

from src.core.config import reset_settings
from src.core.poset import GridPoset

SMALL_PRIME = 101


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Every test starts from the default configuration."""
    for var in ("SPREADHOM_PRIME", "SPREADHOM_FAMILY_CAP", "SPREADHOM_MAX_LEN", "LOG_LEVEL"):
        monkeypatch.delenv(var, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def prime():
    return SMALL_PRIME


@pytest.fixture
def grid2():
    return GridPoset.from_sizes([2, 2])


@pytest.fixture
def grid3():
    return GridPoset.from_sizes([3, 3])


@pytest.fixture
def grid4():
    return GridPoset.from_sizes([4, 4])


@pytest.fixture
def chain3():
    return GridPoset.chain(3)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document under tmp_path and return its path as a string."""
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return _write
