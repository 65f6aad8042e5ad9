import json
from pathlib import Path

import pytest

from strichartz_lab.cli import main
from strichartz_lab.manifest import RunManifest, load_config_file

EV_ARGS = ["--grid-n", "4096", "--grid-l", "1600", "--window-tol", "3e-4"]


def test_evaluate_gaussian(tmp_path, capsys):
    out = str(tmp_path / "ev")
    code = main(["evaluate", "--alpha", "2", "--q", "6", "--r", "6",
                 "--profile", "gaussian", "--out", out, *EV_ARGS])
    assert code == 0
    printed = capsys.readouterr().out
    assert "ratio" in printed
    value = float(printed.split("=")[1])
    assert abs(value - 12.0 ** (-1 / 12)) < 1e-3
    man = RunManifest.load(tmp_path / "ev.manifest.json")
    assert man.command == "evaluate"
    assert abs(man.results["ratio"] - value) < 1e-6  # stdout is printed to 6 places
    csv = (tmp_path / "ev.csv").read_text().splitlines()
    assert csv[0].endswith("manifest")
    assert csv[1].endswith("ev.manifest.json")


def test_evaluate_inadmissible_pair(tmp_path):
    assert main(["evaluate", "--alpha", "2", "--q", "6", "--r", "2",
                 "--out", str(tmp_path / "x"), *EV_ARGS]) == 2


def test_evaluate_zero_profile(tmp_path):
    assert main(["evaluate", "--profile", "zero", "--out", str(tmp_path / "x"), *EV_ARGS]) == 2


def test_evaluate_deterministic(tmp_path):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    for out in (a, b):
        assert main(["evaluate", "--alpha", "2", "--q", "8", "--r", "4",
                     "--out", out, *EV_ARGS]) == 0
    assert Path(a + ".csv").read_bytes().replace(b"a.manifest", b".manifest") == \
        Path(b + ".csv").read_bytes().replace(b"b.manifest", b".manifest")


def test_extremize_command(tmp_path, capsys):
    out = str(tmp_path / "ex")
    code = main(["extremize", "--alpha", "2", "--q", "6", "--r", "6", "--seed", "7",
                 "--grid-n", "2048", "--grid-l", "800", "--window-tol", "3e-4",
                 "--out", out])
    assert code == 0
    printed = capsys.readouterr().out
    assert "within-tolerance" in printed
    hist = (tmp_path / "ex_ratio_history.csv").read_text().splitlines()
    assert hist[0].startswith("iteration,ratio")
    final = float(hist[-1].split(",")[1])
    assert abs(final - 12.0 ** (-1 / 12)) / 12.0 ** (-1 / 12) < 0.01


def test_extremize_invalid_alpha(tmp_path):
    assert main(["extremize", "--alpha", "1.0", "--out", str(tmp_path / "x")]) == 2


def test_verify_unknown_suite(tmp_path, capsys):
    assert main(["verify", "unknown-suite", "--out", str(tmp_path / "v")]) == 2
    assert "available" in capsys.readouterr().err


def test_verify_jacobian(tmp_path, capsys):
    assert main(["verify", "jacobian", "--out", str(tmp_path / "v")]) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out and "0.7071" in out.replace("0.707106", "0.7071")


def test_sweep_threshold(tmp_path):
    out = str(tmp_path / "thr")
    assert main(["sweep", "--kind", "threshold", "--alphas", "1.5:4:0.5", "--out", out]) == 0
    lines = Path(out + ".csv").read_text().splitlines()
    assert lines[0].startswith("alpha,symmetric_threshold")
    assert len(lines) == 7
    row2 = lines[2].split(",")
    assert abs(float(row2[1]) - 12.0 ** (-1 / 12)) < 1e-12


def test_sweep_empty_range(tmp_path):
    assert main(["sweep", "--kind", "threshold", "--alphas", "", "--out", str(tmp_path / "x")]) == 2
    assert main(["sweep", "--kind", "threshold", "--alphas", "4:1:0.5", "--out", str(tmp_path / "x")]) == 2


def test_sweep_xi_curve(tmp_path):
    out = str(tmp_path / "xi")
    code = main(["sweep", "--kind", "schrodinger", "--alpha", "4", "--xis", "4,8",
                 "--grid-n", "4096", "--grid-l", "300", "--window-tol", "1e-3",
                 "--out", out])
    assert code == 0
    lines = Path(out + ".csv").read_text().splitlines()
    assert lines[0].startswith("xi,value,target,rel_error")
    assert len(lines) == 3


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "lab.cfg"
    cfg.write_text("alpha = 2\nq = 8\nr = 4\ngrid_n = 4096\ngrid_l = 1600\nwindow_tol = 3e-4\n")
    out = str(tmp_path / "c")
    assert main(["evaluate", "--config", str(cfg), "--out", out]) == 0
    v_cfg = float(capsys.readouterr().out.split("=")[1])
    assert abs(v_cfg - 2.0**-0.25) < 1e-3  # config selected (8,4)
    # a flag overrides the config file
    assert main(["evaluate", "--config", str(cfg), "--q", "6", "--r", "6", "--out", out]) == 0
    v_flag = float(capsys.readouterr().out.split("=")[1])
    assert abs(v_flag - 12.0 ** (-1 / 12)) < 1e-3


def test_config_loader_rejects_garbage(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("this is not a key value pair\n")
    with pytest.raises(Exception):
        load_config_file(p)


def test_manifest_replay(tmp_path, capsys):
    out = str(tmp_path / "m")
    assert main(["evaluate", "--alpha", "2", "--q", "6", "--r", "6", "--out", out, *EV_ARGS]) == 0
    first = float(capsys.readouterr().out.split("=")[1])
    man = json.loads(Path(out + ".manifest.json").read_text())
    opts = man["options"]
    assert main(["evaluate", "--alpha", str(opts["alpha"]), "--q", str(opts["q"]),
                 "--r", str(opts["r"]), "--grid-n", str(opts["grid_n"]),
                 "--grid-l", str(opts["grid_l"]), "--window-tol", str(opts["window_tol"]),
                 "--out", str(tmp_path / "m2")]) == 0
    second = float(capsys.readouterr().out.split("=")[1])
    assert first == second
