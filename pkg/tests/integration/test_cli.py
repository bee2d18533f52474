"""End-to-end tests of the command-line entry point."""

import json

import pandas as pd
import pytest

from src.main import EXIT_CONFIG, EXIT_OK, main
from tests.fixtures.data import NF_CYCLE_IC, XYZ_CYCLE_IC


def _ic(values):
    return ",".join(str(v) for v in values)


@pytest.mark.integration
class TestConfigurationErrors:
    """Bad input exits with code 2 and writes nothing."""

    def test_missing_config_file(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main(["simulate", "--config", str(tmp_path / "absent.cfg"), "--out", str(out)])
        assert code == EXIT_CONFIG
        assert not out.exists()
        assert "configuration_error" in capsys.readouterr().err

    def test_k_too_small(self, tmp_path):
        out = tmp_path / "out"
        code = main(["ews", "--k", "3", "--ic", _ic(XYZ_CYCLE_IC), "--out", str(out)])
        assert code == EXIT_CONFIG
        assert not out.exists()

    def test_simulate_needs_initial_condition(self, tmp_path):
        out = tmp_path / "out"
        assert main(["simulate", "--out", str(out)]) == EXIT_CONFIG
        assert not out.exists()

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            main(["animate"])


@pytest.mark.integration
class TestCommands:
    """Artifacts written by each command."""

    def test_simulate_csv(self, tmp_path, capsys):
        out = tmp_path / "sim"
        code = main(["simulate", "--ic", _ic(XYZ_CYCLE_IC), "--tfinal", "5", "--out", str(out)])
        assert code == EXIT_OK
        frame = pd.read_csv(out / "trajectory.csv")
        assert list(frame.columns) == ["t", "x", "y", "z"]
        assert frame["t"].iloc[-1] == pytest.approx(5.0)
        verdict = json.loads((out / "verdict.json").read_text(encoding="utf-8"))
        assert verdict["h"] == pytest.approx(0.2649)
        assert json.loads(capsys.readouterr().out)["command"] == "simulate"

    def test_simulate_json(self, tmp_path):
        out = tmp_path / "sim"
        assert main(["simulate", "--ic", _ic(XYZ_CYCLE_IC), "--tfinal", "2", "--format", "json",
                     "--out", str(out)]) == EXIT_OK
        rows = json.loads((out / "trajectory.json").read_text(encoding="utf-8"))
        assert set(rows[0]) == {"t", "x", "y", "z"}

    def test_normalform_is_deterministic(self, tmp_path):
        first, second = tmp_path / "a", tmp_path / "b"
        assert main(["normalform", "--out", str(first)]) == EXIT_OK
        assert main(["normalform", "--out", str(second)]) == EXIT_OK
        text = (first / "normal_form.json").read_text(encoding="utf-8")
        assert text == (second / "normal_form.json").read_text(encoding="utf-8")
        payload = json.loads(text)
        assert payload["h_fsn"] == pytest.approx(0.2656, abs=5e-4)
        assert payload["criticality"] == "subcritical"
        assert payload["conditions"]["H1"] == "passed"

    def test_config_file_and_flag_precedence(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(f"ic = {_ic(XYZ_CYCLE_IC)}\ntfinal = 50\n", encoding="utf-8")
        out = tmp_path / "sim"
        assert main(["simulate", "--config", str(config), "--tfinal", "1", "--out", str(out)]) == EXIT_OK
        frame = pd.read_csv(out / "trajectory.csv")
        assert frame["t"].iloc[-1] == pytest.approx(1.0)

    def test_empty_sweep(self, tmp_path):
        config = tmp_path / "sweep.cfg"
        config.write_text("h_min = 0.3\nh_max = 0.2\n", encoding="utf-8")
        out = tmp_path / "sweep"
        assert main(["sweep", "--config", str(config), "--out", str(out)]) == EXIT_OK
        assert json.loads((out / "events.json").read_text(encoding="utf-8")) == []
        assert json.loads((out / "branches.json").read_text(encoding="utf-8")) == []

    def test_repeated_runs_write_identical_bytes(self, tmp_path):
        config = tmp_path / "sweep.cfg"
        config.write_text("h_min = 0.25\nh_max = 0.28\nh_step = 0.01\n", encoding="utf-8")
        first, second = tmp_path / "a", tmp_path / "b"
        assert main(["sweep", "--config", str(config), "--out", str(first)]) == EXIT_OK
        assert main(["sweep", "--config", str(config), "--out", str(second)]) == EXIT_OK
        names = sorted(p.name for p in first.iterdir())
        assert names == sorted(p.name for p in second.iterdir())
        assert "events.json" in names
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes()

        for out in (first / "sim", second / "sim"):
            assert main(["simulate", "--ic", _ic(XYZ_CYCLE_IC), "--tfinal", "5", "--out", str(out)]) == EXIT_OK
        assert (first / "sim" / "trajectory.csv").read_bytes() == (second / "sim" / "trajectory.csv").read_bytes()

    @pytest.mark.slow
    def test_classify(self, tmp_path):
        out = tmp_path / "cls"
        code = main(["classify", "--ic", _ic(NF_CYCLE_IC), "--tfinal", "150", "--out", str(out)])
        assert code in (0, 1)
        if code == EXIT_OK:
            payload = json.loads((out / "classification.json").read_text(encoding="utf-8"))
            assert payload["alpha"] == pytest.approx(-0.04, abs=0.01)
            assert payload["theorem"]["verdict"] in ("limit_cycle", "extinction", "inconclusive")
