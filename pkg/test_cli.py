#!/usr/bin/env python3
"""Tests for the command-line interface"""

import math
import xml.etree.ElementTree as ET

import pandas as pd
import pytest
from pydantic import ValidationError

import main
from diagram import SWEEP_COLUMNS


def run(capsys, *argv):
    code = main.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParsing:
    def test_tolerance_floor(self):
        with pytest.raises(ValidationError):
            main.parse_config(["solve", "--mu", "1", "--tol", "1e-16"])

    def test_unknown_verify_group(self, capsys):
        code, _, err = run(capsys, "verify", "--only", "nonsense")
        assert code == main.EXIT_FAILURE
        assert "unknown verify groups" in err

    def test_range_order(self, capsys):
        code, _, err = run(capsys, "sweep", "--mu-min", "5", "--mu-max", "4")
        assert code == main.EXIT_FAILURE
        assert "--mu-min" in err

    def test_q_is_limited(self):
        with pytest.raises(ValidationError):
            main.parse_config(["solve", "--mu", "4", "--q", "3"])

    def test_overrides_reach_settings(self, tmp_path):
        cfg = main.parse_config(["solve", "--mu", "2", "--tol", "1e-9", "--grid", "512",
                                 "--out", str(tmp_path)])
        settings = cfg.settings()
        assert settings.tolerance == 1e-9
        assert settings.grid == 512


class TestSolve:
    def test_disk(self, capsys, tmp_path):
        code, out, _ = run(capsys, "solve", "--mu", "1", "--out", str(tmp_path))
        assert code == main.EXIT_OK
        assert "mode=disk" in out
        assert "x=1 y=1" in out
        frame = pd.read_csv(tmp_path / "shape.csv")
        assert list(frame.columns) == ["s", "theta", "k", "x", "y"]
        assert frame["s"].iloc[-1] == pytest.approx(2 * math.pi)

    def test_half_is_disk(self, capsys, tmp_path):
        code, out, _ = run(capsys, "solve", "--mu", "0.5", "--out", str(tmp_path))
        assert code == main.EXIT_OK
        assert "mode=disk" in out

    def test_segments_with_svg_and_record(self, capsys, tmp_path):
        code, out, _ = run(capsys, "solve", "--mu", "4", "--grid", "2048", "--out", str(tmp_path),
                           "--svg", "out.svg", "--json")
        assert code == main.EXIT_OK
        assert "mode=segments" in out
        root = ET.parse(tmp_path / "out.svg").getroot()
        assert len(root.findall("{http://www.w3.org/2000/svg}line[@class='segment']")) == 2
        assert (tmp_path / "shape.json").exists()

    def test_mode_conflict_goes_to_stderr(self, capsys, tmp_path):
        code, out, err = run(capsys, "solve", "--mu", "2", "--mode", "segments", "--out", str(tmp_path))
        assert code == main.EXIT_FAILURE
        assert "solve failed" in err
        assert not (tmp_path / "shape.csv").exists()


class TestSweep:
    def test_disk_range(self, capsys, tmp_path):
        code, out, _ = run(capsys, "sweep", "--mu-min", "1", "--mu-max", "2", "--steps", "3",
                           "--grid", "1024", "--out", str(tmp_path), "--svg")
        assert code == main.EXIT_OK
        frame = pd.read_csv(tmp_path / "diagram.csv")
        assert list(frame.columns) == SWEEP_COLUMNS
        assert len(frame) == 3
        assert (frame["mode"] == "disk").all()
        assert (tmp_path / "diagram.svg").exists()


def test_verify_group(capsys):
    code, out, _ = run(capsys, "verify", "--only", "special-functions,geometry")
    assert code == main.EXIT_OK
    assert "✓" in out and "✗" not in out
    assert "1000 random bodies" in out


if __name__ == "__main__":
    pytest.main([__file__])
