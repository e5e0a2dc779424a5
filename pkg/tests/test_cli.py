import json
import subprocess
import sys

from seaforce.cli import main
from seaforce.scenario import KINDS, OUTPUT_ENV


def test_list_includes_every_kind(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for k in KINDS:
        assert k in out
    assert "table2.cfg" in out and "fig7.cfg" in out


def test_describe_tuning_sweep_declares_band(capsys):
    assert main(["describe", "tuning_sweep"]) == 0
    out = capsys.readouterr().out
    assert "band_min_hz" in out and "band_max_hz" in out and "points_per_decade" in out


def test_errors_give_nonzero_exit(capsys, tmp_path):
    assert main(["describe", "nope"]) != 0
    assert main(["run", str(tmp_path / "missing.cfg")]) != 0
    bad = tmp_path / "bad.cfg"
    bad.write_text("[scenario]\nname = b\nkind = step_tracking\n[plant]\nstiffness = 4950\n")
    assert main(["run", str(bad)]) != 0
    assert "plant.stiffness" in capsys.readouterr().err
    assert main([]) != 0
    assert main(["frobnicate"]) != 0


def test_run_template_with_out_and_seed(tmp_path, capsys):
    out = tmp_path / "fig7"
    assert main(["run", "fig7", "--out", str(out), "--seed", "12"]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 12 and "tuning_curves.csv" in manifest["files"]


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    assert main(["run", "fig7"]) == 0
    assert (tmp_path / "fig7" / "manifest.json").exists()


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "seaforce", "describe", "step_tracking"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "amplitude_nm" in r.stdout
