"""Tests for run-config loading and settings."""

import pytest

from src.config import get_settings, load_run_config
from src.config.settings import reset_settings
from src.core.errors import ConfigurationError
from src.models.enums import Command, OutputFormat


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# collapse run\n"
        "h = 0.2649\n"
        "ic = 0.278, 0.1181, 0.4165\n"
        "tfinal = 120   # slow time\n"
        "k = 6\n"
        "N = all\n"
        "format = json\n",
        encoding="utf-8",
    )
    return path


@pytest.mark.unit
class TestLoadRunConfig:
    """Settings < file < overrides."""

    def test_defaults_from_settings(self):
        config = load_run_config()
        settings = get_settings()
        assert config.rtol == settings.rtol
        assert config.k == settings.ews_k
        assert config.params.h == pytest.approx(0.2649)
        assert config.format == OutputFormat.CSV

    def test_file_values(self, config_file):
        config = load_run_config(config_file)
        assert config.ic == (0.278, 0.1181, 0.4165)
        assert config.t_final == 120.0
        assert config.k == 6
        assert config.N is None
        assert config.format == OutputFormat.JSON

    def test_overrides_win(self, config_file):
        config = load_run_config(config_file, {"command": "ews", "h": 0.27, "k": None, "out_dir": "runs/a"})
        assert config.command == Command.EWS
        assert config.params.h == pytest.approx(0.27)
        assert config.k == 6
        assert str(config.output_path) == "runs/a"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_run_config(tmp_path / "absent.cfg")

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("colour = blue\n", encoding="utf-8")
        with pytest.raises(ConfigurationError) as exc:
            load_run_config(path)
        assert exc.value.context["key"] == "colour"

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("h 0.3\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_run_config(path)

    @pytest.mark.parametrize("overrides", [
        {"k": 3},
        {"k": 5, "N": 5},
        {"ic": "0.1,0.2"},
        {"t_final": -1.0},
    ])
    def test_invalid_values(self, overrides):
        with pytest.raises(ConfigurationError):
            load_run_config(overrides=overrides)


@pytest.mark.unit
class TestSettings:
    """Environment-driven settings."""

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("EWS_K", "7")
        reset_settings()
        try:
            assert get_settings().ews_k == 7
        finally:
            reset_settings()

    def test_singleton(self):
        assert get_settings() is get_settings()
