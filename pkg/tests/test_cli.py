import csv
import shutil
import subprocess
import xml.etree.ElementTree as ET

import pytest

from delayed_logistic.cli import main
from delayed_logistic.output import read_manifest


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


SIM = ["--N", "100", "--tau", "1", "--mu", "0.5", "--T", "2", "--dt", "0.5", "--seed", "7"]


def test_simulate_grid(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["simulate", *SIM, "--out", str(out)]) == 0
    r = rows(out)
    assert r[0] == ["t", "y", "z"]
    assert [float(x[0]) for x in r[1:]] == [-1, -0.5, 0, 0.5, 1, 1.5, 2]
    assert r[1][2] == "" and r[2][2] == "" and r[3][2] != ""
    assert r[3][1] == "0.5"
    raw = out.read_bytes()
    assert b"\r\n" not in raw and raw.endswith(b"\n")


def test_simulate_zero_density(tmp_path):
    out = tmp_path / "z.csv"
    assert main(["simulate", "--N", "50", "--mu", "0", "--T", "1", "--dt", "0.1",
                 "--out", str(out)]) == 0
    for t, y, z in rows(out)[1:]:
        assert float(y) == 0.0
        assert z == "" or float(z) == 0.0


def test_simulate_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["simulate", *SIM, "--out", str(a)])
    main(["simulate", *SIM, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_manifest_contents_and_replay(tmp_path):
    out = tmp_path / "traj.csv"
    main(["simulate", *SIM, "--out", str(out)])
    man = read_manifest(str(out) + ".manifest")
    assert man["command"] == "simulate" and man["master_seed"] == "7"
    assert man["arg.N"] == "100" and man["rng"] == "numpy.random.Philox"
    assert {"tool_version", "start_time", "end_time", "outputs"} <= set(man)
    lines = (tmp_path / "traj.csv.manifest").read_text().splitlines()
    assert lines == sorted(lines)
    replay = tmp_path / "replay.csv"
    assert main(["--manifest", str(out) + ".manifest", "--out", str(replay)]) == 0
    assert replay.read_bytes() == out.read_bytes()


def test_decompose_columns(tmp_path):
    out = tmp_path / "dec.csv"
    assert main(["decompose", "--N", "200", "--tau", "1", "--mu", "0.5", "--T", "3",
                 "--dt", "0.1", "--seed", "2", "--out", str(out)]) == 0
    r = rows(out)
    assert r[0] == ["t", "drift_main", "drift_replacement", "drift_clamp", "martingale",
                    "qv", "residual_check"]
    for line in r[1:]:
        t, _, repl, clamp, _, _, resid = map(float, line)
        assert abs(resid) <= 1e-9
        assert clamp == 0.0
        if t <= 1.0:
            assert repl == 0.0


def test_solve_and_svg(tmp_path):
    out, svg = tmp_path / "u.csv", tmp_path / "u.svg"
    assert main(["solve", "--tau", "1", "--mu", "0.5", "--T", "3", "--dt", "0.5",
                 "--out", str(out), "--svg", str(svg)]) == 0
    r = rows(out)
    assert r[0] == ["t", "u"] and float(r[1][1]) == 0.5
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg") and root.get("viewBox") == "0 0 800 500"
    assert root.get("version") == "1.1"


def test_compare_outputs(tmp_path):
    out = tmp_path / "cmp"
    assert main(["compare", "--N", "200", "--tau", "1", "--mu", "1", "--T", "2",
                 "--dt", "0.1", "--replicas", "4", "--out", str(out),
                 "--svg", str(out / "fig.svg")]) == 0
    rep = rows(out / "replicas.csv")
    assert rep[0] == ["replica", "seed", "sup_error"] and len(rep) == 5
    summ = rows(out / "summary.csv")
    assert summ[0][:2] == ["metric", "mean"] and summ[1][0] == "sup_error"
    assert rows(out / "paths.csv")[0] == ["t", "dde", "mean", "min", "max"]
    ET.parse(out / "fig.svg")
    assert read_manifest(out / "manifest.txt")["command"] == "compare"


def test_sweep_outputs(tmp_path):
    out = tmp_path / "sw"
    assert main(["sweep", "--N-list", "100,200,400", "--metric", "max_jump", "--T", "0.5",
                 "--dt", "0.1", "--replicas", "3", "--out", str(out)]) == 0
    sw = rows(out / "sweep.csv")
    assert sw[0][0] == "N" and [x[0] for x in sw[1:]] == ["100", "200", "400"]
    fit = rows(out / "fit.csv")
    assert fit[0] == ["metric", "alpha", "intercept", "residual"]
    assert fit[1][0] == "max_jump" and float(fit[1][1]) < 0


def test_sweep_replay_identical(tmp_path):
    out = tmp_path / "sw"
    main(["sweep", "--N-list", "100,200,400", "--metric", "qv_T", "--T", "0.5",
          "--dt", "0.1", "--replicas", "3", "--out", str(out)])
    again = tmp_path / "again"
    assert main(["--manifest", str(out / "manifest.txt"), "--out", str(again)]) == 0
    for name in ("sweep.csv", "fit.csv"):
        assert (again / name).read_bytes() == (out / name).read_bytes()


@pytest.mark.parametrize("argv", [
    ["sweep", "--N-list", "1,2", "--metric", "max_jump", "--out", "x"],
    ["simulate", "--N", "abc", "--out", "x"],
    ["simulate", "--N", "0", "--out", "x"],
    ["simulate"],
    [],
])
def test_usage_errors_exit_2(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_io_error_exit_1(tmp_path):
    target = tmp_path / "missing" / "deeper" / "t.csv"
    assert main(["simulate", "--N", "10", "--T", "0.5", "--dt", "0.1",
                 "--out", str(target)]) == 1


def test_worker_env_gives_identical_outputs(tmp_path, monkeypatch):
    args = ["compare", "--N", "300", "--T", "1", "--dt", "0.1", "--replicas", "6"]
    monkeypatch.setenv("DLL_WORKERS", "1")
    main([*args, "--out", str(tmp_path / "one")])
    monkeypatch.setenv("DLL_WORKERS", "3")
    main([*args, "--out", str(tmp_path / "three")])
    for name in ("replicas.csv", "summary.csv", "paths.csv"):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "three" / name).read_bytes()


@pytest.mark.skipif(shutil.which("dll") is None, reason="console script not installed")
def test_console_script(tmp_path):
    out = tmp_path / "t.csv"
    res = subprocess.run(["dll", "simulate", *SIM, "--out", str(out)], capture_output=True)
    assert res.returncode == 0 and out.exists()
    res = subprocess.run(["dll", "simulate", "--N", "x", "--out", str(out)],
                         capture_output=True)
    assert res.returncode == 2
