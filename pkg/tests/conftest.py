import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from compworkbench.config import reset_settings  # noqa: E402
from compworkbench.core import Alphabet  # noqa: E402
from compworkbench import library  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from default settings, whatever the developer's .env says."""
    for key in ('WORKBENCH_FUEL', 'WORKBENCH_MAX_LEN', 'WORKBENCH_WORKERS', 'LOG_LEVEL', 'DEBUG'):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.setattr('compworkbench.config.load_dotenv', lambda *a, **k: False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def binary():
    return Alphabet.binary()


@pytest.fixture
def turing_corpus():
    return library.turing_corpus()


@pytest.fixture
def decision_corpus():
    return library.decision_corpus()


@pytest.fixture
def register_corpus():
    return library.register_corpus()


@pytest.fixture
def fuel():
    return 2000
