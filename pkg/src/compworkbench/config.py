"""Runtime settings, read once from the environment (and a ``.env`` file).

Keys:
    WORKBENCH_FUEL     default fuel for every run (default 10000)
    WORKBENCH_MAX_LEN  default input-length bound for equivalence checks (default 4)
    WORKBENCH_WORKERS  thread-pool size for per-input fan-out (default 1)
    LOG_LEVEL          logging level name (default INFO)
    DEBUG              print tracebacks for domain errors (default false)
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError, field_validator

from .errors import ConfigError

logger = logging.getLogger(__name__)

_TRUTHY = {'1', 'true', 'yes', 'on'}


class WorkbenchSettings(BaseModel):
    default_fuel: int = 10_000
    max_len: int = 4
    workers: int = 1
    log_level: str = "INFO"
    debug: bool = False

    @field_validator('default_fuel', 'max_len')
    @classmethod
    def _non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("must be non-negative")
        return value

    @field_validator('workers')
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator('log_level')
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f"unknown log level {value}")
        return value


_ENV_KEYS = {
    'default_fuel': 'WORKBENCH_FUEL',
    'max_len': 'WORKBENCH_MAX_LEN',
    'workers': 'WORKBENCH_WORKERS',
    'log_level': 'LOG_LEVEL',
    'debug': 'DEBUG',
}

_settings: Optional[WorkbenchSettings] = None


def settings_from_env() -> WorkbenchSettings:
    """Build settings from the current process environment."""
    raw = {}
    for field, key in _ENV_KEYS.items():
        value = os.getenv(key)
        if value is None or value == "":
            continue
        raw[field] = value.strip().lower() in _TRUTHY if field == 'debug' else value.strip()
    try:
        return WorkbenchSettings(**raw)
    except ValidationError as e:
        bad = e.errors()[0]
        field = bad['loc'][0] if bad.get('loc') else '?'
        raise ConfigError(f"{_ENV_KEYS.get(field, field)}: {bad['msg']}", {'key': _ENV_KEYS.get(field, field)})


def get_settings() -> WorkbenchSettings:
    """Load settings on first use and cache them for the life of the process."""
    global _settings
    if _settings is None:
        load_dotenv()
        _settings = settings_from_env()
        logger.debug(f"Settings loaded: {_settings.model_dump()}")
    return _settings


def reset_settings() -> None:
    """Forget cached settings (tests change the environment between cases)."""
    global _settings
    _settings = None
