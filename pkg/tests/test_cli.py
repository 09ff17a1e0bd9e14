import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from fatoukit.cli import main
from fatoukit.pipeline import validate_report
from fatoukit.raster import read_pgm

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(args, env_extra=None, cwd=None):
    env = dict(os.environ, FATOUKIT_BACKEND="numpy")
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "fatoukit.cli", *args],
                          capture_output=True, text=True, env=env, cwd=cwd)


def test_classify_writes_rasters_and_report(tmp_path):
    out = tmp_path / "nz"
    res = run_cli(["classify", "--family", "family n: n*z",
                   "--grid", "64x64", "--nmax", "64", "--tail-window", "16",
                   "--out", str(out)])
    assert res.returncode == 0, res.stderr
    for suffix in (".fj.pgm", ".i.pgm", ".u.pgm", ".json"):
        assert (tmp_path / f"nz{suffix}").exists()
    labels = read_pgm(out.with_suffix(".fj.pgm"))
    assert labels.shape == (64, 64)
    assert (labels == 0).sum() > 0      # julia pixels at the origin
    assert (labels == 255).sum() > 3500  # fatou elsewhere
    report = json.loads((tmp_path / "nz.json").read_text())
    validate_report(report)
    assert report["schema_version"] == "1"
    total = sum(report["labels"].values())
    assert total == 64 * 64


def test_classify_parse_error_exit_2(tmp_path):
    res = run_cli(["classify", "--family", "family n: n*q",
                   "--out", str(tmp_path / "x")])
    assert res.returncode == 2
    assert "unknown identifier" in res.stderr


def test_classify_io_error_exit_3(tmp_path):
    res = run_cli(["classify", "--family", "family n: n*z",
                   "--grid", "8x8", "--nmax", "16", "--tail-window", "4",
                   "--out", str(tmp_path / "no_dir" / "x")])
    assert res.returncode == 3


def test_classify_single_pixel_grid(tmp_path):
    out = tmp_path / "one"
    res = run_cli(["classify", "--family", "family n: n*z",
                   "--grid", "1x1", "--nmax", "64", "--tail-window", "16",
                   "--out", str(out)])
    assert res.returncode == 0, res.stderr
    labels = read_pgm(out.with_suffix(".fj.pgm"))
    assert labels.shape == (1, 1)


def test_verify_list():
    res = run_cli(["verify", "--list"])
    assert res.returncode == 0
    assert "linear-pencil-point-julia" in res.stdout
    assert len(res.stdout.strip().splitlines()) >= 20


def test_verify_selected_case():
    res = run_cli(["verify", "locally-bounded"])
    assert res.returncode == 0
    assert "PASS locally-bounded" in res.stdout


def test_verify_env_tamper_fails():
    res = run_cli(["verify", "escape-floor"],
                  env_extra={"FATOUKIT_ESCAPE_RADIUS": "10"})
    assert res.returncode == 1
    assert "FAIL escape-floor" in res.stdout


def test_algebra_reports_strict_inclusion(tmp_path):
    out = tmp_path / "laws"
    res = run_cli(["algebra",
                   "--family", "family n: n*z",
                   "--family2", "family n: n*(z-1/2)",
                   "--window=-1,1,-1,1", "--grid", "64x64",
                   "--nmax", "64", "--tail-window", "16",
                   "--out", str(out)])
    assert res.returncode == 0, res.stderr
    doc = json.loads((tmp_path / "laws.json").read_text())
    by_name = {law["name"]: law for law in doc["laws"]}
    assert by_name["intersection-U"]["status"] == "strict_inclusion"
    assert res.returncode == 0  # findings never fail the process


def test_outputs_byte_identical_across_runs(tmp_path):
    args = ["classify", "--family", "family n: exp(n*z)",
            "--grid", "32x32", "--nmax", "64", "--tail-window", "16"]
    run_cli(args + ["--out", str(tmp_path / "a")])
    run_cli(args + ["--out", str(tmp_path / "b")])
    for suffix in (".fj.pgm", ".i.pgm", ".u.pgm", ".json"):
        a = (tmp_path / f"a{suffix}").read_bytes()
        b = (tmp_path / f"b{suffix}").read_bytes()
        assert a == b, suffix


def test_golden_fixture_match(tmp_path):
    out = tmp_path / "gold"
    res = run_cli(["classify", "--family", "family n: n*z | family n: n*(z-1)",
                   "--window=-2,2,-2,2", "--grid", "32x32",
                   "--nmax", "64", "--tail-window", "16",
                   "--out", str(out)])
    assert res.returncode == 0, res.stderr
    for name in ("gold.fj.pgm", "gold.i.pgm", "gold.u.pgm", "gold.json"):
        got = (tmp_path / name).read_bytes()
        want = (FIXTURES / name).read_bytes()
        assert got == want, f"golden mismatch: {name}"


def test_report_subcommand(tmp_path):
    out = tmp_path / "rep"
    res = run_cli(["report", "--family", "family n: n*z | family n: n*(z-1)",
                   "--grid", "64x64", "--nmax", "64", "--tail-window", "16",
                   "--out", str(out)])
    assert res.returncode == 0, res.stderr
    report = json.loads((tmp_path / "rep.json").read_text())
    validate_report(report)
    assert report["connectedness"]["julia_connected"] is False
    assert report["connectedness"]["consistent"] is True
    assert report["components"]["fatou_components"] == 1
    # the two pencils share no common fixed point
    assert report["fixed_points"] == []


def test_main_entrypoint_in_process(tmp_path, monkeypatch):
    monkeypatch.setenv("FATOUKIT_BACKEND", "numpy")
    code = main(["classify", "--family", "family n: n*z",
                 "--grid", "16x16", "--nmax", "32", "--tail-window", "8",
                 "--out", str(tmp_path / "m")])
    assert code == 0
    assert (tmp_path / "m.json").exists()
