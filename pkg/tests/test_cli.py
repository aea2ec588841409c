import json
import os
import subprocess
import sys

import pytest

from tiltlab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, out


def test_cmin_simple(capsys):
    code, out = run_cli(capsys, "cmin", "--ell", "3", "--module", "L:3")
    assert code == 0
    data = json.loads(out)
    assert data["degrees"] == {"-1": [1], "0": [3], "1": [1]}
    assert data["module"] == "L(3)"


def test_cmin_tilting_and_delta(capsys):
    code, out = run_cli(capsys, "cmin", "--ell", "3", "--module", "T:4")
    assert code == 0 and json.loads(out)["degrees"] == {"0": [4]}
    code, out = run_cli(capsys, "cmin", "--ell", "3", "--module", "delta:3")
    assert code == 0 and json.loads(out)["degrees"] == {"0": [3], "1": [1]}


def test_cmin_bad_spec(capsys):
    code = main(["cmin", "--ell", "3", "--module", "Q:3"])
    assert code == 2


def test_ideals_enumerate(capsys):
    code, out = run_cli(capsys, "ideals", "enumerate", "--ell", "3", "--window", "12")
    assert code == 0
    data = json.loads(out)
    members = [row["members"] for row in data["ideals"]]
    assert members == [[], list(range(2, 13)), list(range(13))]
    assert data["ideals"][1]["prime"] is True


def test_ideals_generate(capsys):
    code, out = run_cli(capsys, "ideals", "generate", "3", "--ell", "3", "--window", "12")
    assert code == 0
    data = json.loads(out)
    assert data["ideals"][0]["members"] == list(range(2, 13))
    code, out = run_cli(capsys, "ideals", "generate", "0", "--ell", "5", "--window", "12")
    assert json.loads(out)["ideals"][0]["members"] == list(range(13))


def test_alcove_commands(capsys):
    code, out = run_cli(capsys, "alcove", "d", "--type", "A2", "--p", "5", "--lambda", "3,3")
    assert code == 0 and json.loads(out)["d"] == 1
    code, out = run_cli(capsys, "alcove", "steinberg", "--type", "A1", "--p", "3", "--lambda", "7")
    data = json.loads(out)
    assert data["lambda0"] == [1] and data["lambda1"] == [2]
    code, out = run_cli(capsys, "alcove", "negligible", "--type", "A2", "--p", "5", "--lambda", "1,1")
    assert json.loads(out)["negligible"] is False
    code, out = run_cli(capsys, "alcove", "orbit", "--type", "A1", "--p", "3", "--lambda", "0", "--bound", "14")
    assert json.loads(out)["orbit"] == [[0], [4], [6], [10], [12]]
    code, out = run_cli(capsys, "alcove", "twist", "--type", "A1", "--p", "3")
    assert json.loads(out)["weight"] == [6]


def test_alcove_malformed_weight(capsys):
    code = main(["alcove", "d", "--type", "A2", "--p", "5", "--lambda", "3"])
    assert code == 2


def test_verify_suite_exit_codes(capsys):
    code, out = run_cli(
        capsys, "verify", "--suite", "lemmas", "--ell", "3",
        "--window", "12", "--budget", "4", "--seed", "11",
    )
    assert code == 0
    report = json.loads(out)
    assert report["failures"] == []
    assert report["config"]["seed"] == 11
    assert report["config"]["budget"] == 4


def test_verify_determinism(capsys):
    args = ["verify", "--suite", "alcove-cross", "--ell", "3", "--window", "12"]
    _, out1 = run_cli(capsys, *args)
    _, out2 = run_cli(capsys, *args)
    assert out1 == out2


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("ell = 3\nbudget = 2  # small\nseed = 9\n")
    code, out = run_cli(
        capsys, "verify", "--suite", "lemmas", "--config", str(cfg),
        "--window", "12", "--seed", "4",
    )
    assert code == 0
    report = json.loads(out)
    assert report["config"]["budget"] == 2  # from file
    assert report["config"]["seed"] == 4  # flag wins


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("volume = 11\n")
    code = main(["verify", "--suite", "lemmas", "--config", str(cfg)])
    assert code == 2


def test_cache_cold_warm_identical(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    args = ["cmin", "--ell", "3", "--module", "L:3", "--cache", cache]
    _, cold = run_cli(capsys, *args)
    assert os.listdir(cache)
    _, warm = run_cli(capsys, *args)
    assert cold == warm


def test_cache_stores_module_files_with_filtration(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    run_cli(capsys, "cmin", "--ell", "3", "--module", "T:3", "--cache", cache)
    path = os.path.join(cache, "module_3_T_3.json")
    data = json.loads(open(path).read())
    assert data["delta_filtration"] == [3, 1]
    assert data["module"]["dim"] == 6


def test_cache_corruption_rebuilds(tmp_path, capsys):
    cache = str(tmp_path / "cache")
    args = ["cmin", "--ell", "3", "--module", "L:3", "--cache", cache]
    _, cold = run_cli(capsys, *args)
    for name in os.listdir(cache):
        with open(os.path.join(cache, name), "w") as fh:
            fh.write("{broken json")
    code, rebuilt = run_cli(capsys, *args)
    err = capsys.readouterr().err if False else ""
    assert code == 0 and rebuilt == cold


def test_output_file(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code = main(["alcove", "d", "--type", "A1", "--p", "3", "--lambda", "3", "--output", str(out_path)])
    assert code == 0
    assert json.loads(out_path.read_text())["d"] == 1


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "tiltlab.cli", "alcove", "d", "--type", "A1", "--p", "3", "--lambda", "6"],
        capture_output=True, text=True, timeout=300,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["d"] == 2


def test_workers_flag_matches_serial(capsys):
    base = ["verify", "--suite", "lemmas", "--ell", "3", "--window", "12",
            "--budget", "3", "--seed", "2"]
    _, serial = run_cli(capsys, *base)
    _, parallel = run_cli(capsys, *base, "--workers", "2")
    a, b = json.loads(serial), json.loads(parallel)
    a["config"].pop("workers"), b["config"].pop("workers")
    assert a == b


def test_even_ell_rejected(capsys):
    code = main(["cmin", "--ell", "4", "--module", "L:1"])
    assert code == 2


def test_cross_process_byte_identical():
    cmd = [
        sys.executable, "-m", "tiltlab.cli", "verify", "--suite", "lemmas",
        "--ell", "3", "--window", "12", "--budget", "2", "--seed", "5",
    ]
    a = subprocess.run(cmd, capture_output=True, text=True, timeout=590)
    b = subprocess.run(cmd, capture_output=True, text=True, timeout=590)
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
