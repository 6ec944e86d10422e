import pytest

from compworkbench.config import WorkbenchSettings, get_settings, reset_settings, settings_from_env
from compworkbench.errors import ConfigError, FormatError, NonTotalError, ShapeError, WorkbenchError


class TestSettings:
    @staticmethod
    def test_defaults():
        settings = get_settings()
        assert settings.default_fuel == 10000
        assert settings.max_len == 4
        assert settings.workers == 1
        assert settings.log_level == "INFO"
        assert settings.debug is False

    @staticmethod
    def test_reads_environment(monkeypatch):
        monkeypatch.setenv('WORKBENCH_FUEL', '500')
        monkeypatch.setenv('WORKBENCH_WORKERS', '3')
        monkeypatch.setenv('LOG_LEVEL', 'debug')
        monkeypatch.setenv('DEBUG', 'yes')
        settings = settings_from_env()
        assert settings.default_fuel == 500
        assert settings.workers == 3
        assert settings.log_level == "DEBUG"
        assert settings.debug is True

    @staticmethod
    def test_cached_until_reset(monkeypatch):
        first = get_settings()
        monkeypatch.setenv('WORKBENCH_FUEL', '7')
        assert get_settings() is first
        reset_settings()
        assert get_settings().default_fuel == 7

    @staticmethod
    @pytest.mark.parametrize("key,value", [
        ('WORKBENCH_FUEL', '-1'),
        ('WORKBENCH_FUEL', 'lots'),
        ('WORKBENCH_WORKERS', '0'),
        ('LOG_LEVEL', 'chatty'),
    ])
    def test_bad_values_name_the_key(monkeypatch, key, value):
        monkeypatch.setenv(key, value)
        with pytest.raises(ConfigError) as caught:
            settings_from_env()
        assert key in caught.value.message
        assert caught.value.details['key'] == key

    @staticmethod
    def test_model_accepts_plain_values():
        assert WorkbenchSettings(default_fuel=3).default_fuel == 3


class TestErrors:
    @staticmethod
    def test_kind_prefixes_message():
        error = ShapeError("arity mismatch")
        assert str(error) == "shape-error: arity mismatch"
        assert isinstance(error, WorkbenchError)

    @staticmethod
    def test_to_dict_shape():
        data = NonTotalError("ran out", {'input': ['01']}).to_dict()
        assert data['success'] is False
        assert data['error'] == "ran out"
        assert data['kind'] == "non-total"
        assert data['details'] == {'input': ['01']}
        assert 'timestamp' in data

    @staticmethod
    def test_format_error_carries_line():
        error = FormatError("bad rule", line=7)
        assert error.message == "line 7: bad rule"
        assert error.details['line'] == 7
