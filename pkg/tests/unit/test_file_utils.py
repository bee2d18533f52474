"""Tests for run-config parsing and artifact writers."""

import json

import pandas as pd
import pytest

from src.utils.file_utils import (
    dumps_json,
    ensure_directory,
    read_frame_csv,
    read_key_value_file,
    write_frame_csv,
    write_json,
    write_rows_csv,
)


@pytest.mark.unit
class TestKeyValueFile:
    """Flat ``key = value`` files."""

    def test_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "a.cfg"
        path.write_text("# header\n\nh = 0.27  # inline\nout = runs/x\n", encoding="utf-8")
        assert read_key_value_file(path) == {"h": "0.27", "out": "runs/x"}

    def test_duplicate_key(self, tmp_path):
        path = tmp_path / "a.cfg"
        path.write_text("h = 1\nh = 2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="duplicate"):
            read_key_value_file(path)

    def test_missing_separator(self, tmp_path):
        path = tmp_path / "a.cfg"
        path.write_text("h 1\n", encoding="utf-8")
        with pytest.raises(ValueError, match="line 1"):
            read_key_value_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_key_value_file(tmp_path / "none.cfg")


@pytest.mark.unit
class TestArtifacts:
    """CSV and JSON writers."""

    def test_csv_keeps_full_precision(self, tmp_path):
        frame = pd.DataFrame({"t": [0.0, 0.1], "x": [1.0 / 3.0, 2.0 / 3.0]})
        path = write_frame_csv(frame, tmp_path / "nested" / "traj.csv")
        back = read_frame_csv(path)
        assert back["x"].tolist() == frame["x"].tolist()

    def test_header_only_rows(self, tmp_path):
        path = write_rows_csv([], tmp_path / "curve.csv", ["tau", "wbar", "wcrit_i0"])
        assert path.read_text(encoding="utf-8").strip() == "tau,wbar,wcrit_i0"
        with pytest.raises(ValueError):
            read_frame_csv(path)

    def test_json_is_deterministic(self, tmp_path):
        payload = {"b": 1, "a": [1.5, None]}
        assert dumps_json(payload) == dumps_json(dict(reversed(list(payload.items()))))
        path = write_json(payload, tmp_path / "out" / "r.json")
        assert json.loads(path.read_text(encoding="utf-8")) == payload

    def test_ensure_directory(self, tmp_path):
        path = ensure_directory(tmp_path / "a" / "b")
        assert path.is_dir()
        assert ensure_directory(path) == path
