"""Command line surface: the run and verify subcommands."""

import json

import pytest

from nomasim.cli import main


@pytest.fixture
def tiny_config_file(tmp_path):
    path = tmp_path / "experiment.json"
    path.write_text(
        json.dumps(
            {
                "radio": {
                    "bs_density": 8.0,
                    "user_density": 300.0,
                    "users_per_cell": 8,
                    "seed": 5,
                },
                "policies": ["oma", "mup"],
                "g_values": [2],
                "beta_values": [0.0],
                "drops": 2,
                "out_dir": str(tmp_path / "out"),
            }
        )
    )
    return path


def test_run_with_config(tiny_config_file, tmp_path, capsys):
    code = main(["run", "--config", str(tiny_config_file)])
    assert code == 0
    out_dir = tmp_path / "out"
    names = {p.name for p in out_dir.iterdir()}
    assert "summary.csv" in names and "manifest.json" in names
    assert any(name.startswith("cdf_") for name in names)
    stdout = capsys.readouterr().out
    assert "mean CSE" in stdout


def test_run_flag_overrides(tiny_config_file, tmp_path, capsys):
    out = tmp_path / "other"
    code = main(
        [
            "run",
            "--config",
            str(tiny_config_file),
            "--drops",
            "1",
            "--seed",
            "9",
            "--policies",
            "oma",
            "--g-values",
            "2,4",
            "--beta-values",
            "0,0.1",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 9
    assert manifest["config"]["drops"] == 1
    assert manifest["config"]["policies"] == ["oma"]
    assert manifest["config"]["g_values"] == [2, 4]
    assert manifest["config"]["beta_values"] == [0.0, 0.1]


def test_run_rejects_invalid_override(tiny_config_file):
    with pytest.raises(ValueError):
        main(["run", "--config", str(tiny_config_file), "--g-values", "3"])


def test_verify_quick(capsys):
    code = main(["verify", "--quick"])
    stdout = capsys.readouterr().out
    assert code == 0
    assert stdout.count("[PASS]") == 8
    assert "[FAIL]" not in stdout
