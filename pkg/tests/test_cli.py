import json

import pytest

from activepool.cli import main


BASE = [
    "--dataset", "two-gaussians",
    "--n-per-class", "40",
    "--n-init", "6",
    "--n-query", "3",
    "--rounds", "2",
    "--epochs", "15",
    "--hidden", "6",
    "--seed", "0",
]


class TestRun:
    def test_writes_curve_and_exits_zero(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        code = main(["run", *BASE, "--strategy", "entropy", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "round,n_labeled,accuracy,selected_indices"
        assert len(lines) == 4
        assert "round 0:" in capsys.readouterr().out

    def test_error_exits_nonzero(self, capsys):
        code = main(["run", "--dataset", "csv:/does/not/exist.csv", "--strategy", "random"])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "dataset": "two-gaussians", "n-per-class": 40, "n-init": 6,
            "n-query": 3, "rounds": 5, "epochs": 15, "hidden": "6",
            "strategy": "random", "seed": 0,
        }))
        out = tmp_path / "curve.csv"
        code = main(["run", "--config", str(cfg), "--rounds", "1", "--out", str(out)])
        assert code == 0
        # flag overrode the file's 5 rounds
        assert len(out.read_text().strip().splitlines()) == 3


class TestCompare:
    def test_prints_table_and_writes_summary(self, tmp_path, capsys):
        out = tmp_path / "summary.json"
        code = main([
            "compare", *BASE,
            "--strategies", "random,entropy",
            "--seeds", "0,1",
            "--out", str(out),
        ])
        assert code == 0
        printed = capsys.readouterr().out
        assert "mean_aulc" in printed
        summary = json.loads(out.read_text())
        assert set(summary) == {"random", "entropy"}
        assert len(summary["random"]["mean_curve"]) == 3
