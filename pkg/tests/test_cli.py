"""Command line: config validation, artifacts, exit codes, determinism."""

import json
import math
from pathlib import Path

import pytest

from ncres.cli import main
from ncres.config import config_hash, parse_config

CONFIGS = Path(__file__).resolve().parent.parent / "demos" / "configs"


def run(args):
    return main([str(a) for a in args])


def test_residue_packaged_example(tmp_path, capsys):
    code = run(["residue", "--config", CONFIGS / "residue_torus.json",
                "--out", tmp_path])
    out = capsys.readouterr().out
    assert code == 0
    assert "248.050213" in out            # 8 pi^3
    csv = (tmp_path / "residue.csv").read_text()
    assert "config_sha256=" in csv
    assert "ncres 0.1.0" in csv
    total = [l for l in csv.splitlines() if l.startswith("total")][0]
    assert float(total.split(",")[1]) == pytest.approx(8 * math.pi ** 3)


def test_residue_cylinder_blocks(tmp_path, capsys):
    code = run(["residue", "--config", CONFIGS / "residue_cylinder_green.json",
                "--out", tmp_path])
    assert code == 0
    rows = {}
    for line in (tmp_path / "residue.csv").read_text().splitlines():
        if line.startswith("#") or line.startswith("block"):
            continue
        name, re, im = line.split(",")
        rows[name] = float(re)
    assert rows["interior"] == pytest.approx(4 * math.pi ** 3)
    assert rows["green"] == pytest.approx(8 * math.pi ** 2)
    assert rows["boundary_pdo"] == pytest.approx(16 * math.pi ** 2)
    assert rows["total"] == pytest.approx(
        4 * math.pi ** 3 + 24 * math.pi ** 2)


def test_parametric_subcommand(tmp_path, capsys):
    code = run(["parametric", "--config",
                CONFIGS / "parametric_resolvent.json", "--out", tmp_path])
    out = capsys.readouterr().out
    assert code == 0
    assert "difference" in out or "difference" in \
        (tmp_path / "parametric.txt").read_text()
    txt = (tmp_path / "parametric.txt").read_text()
    assert "3.14159" in txt


def test_dixmier_subcommand(tmp_path):
    code = run(["dixmier", "--config", CONFIGS / "dixmier_torus.json",
                "--out", tmp_path])
    assert code == 0
    head = (tmp_path / "dixmier.csv").read_text().splitlines()[:12]
    slope_line = [l for l in head if l.startswith("# slope=")][0]
    slope = float(slope_line.split("=")[1])
    assert slope == pytest.approx(math.pi, rel=5e-3)


def test_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"task": "residue"')          # syntax error
    assert run(["residue", "--config", bad]) == 2
    err = capsys.readouterr().err
    assert "1:" in err                             # line-precise location
    bad2 = tmp_path / "bad2.json"
    bad2.write_text(json.dumps({"task": "residue"}))
    assert run(["residue", "--config", bad2]) == 2  # missing section
    bad3 = tmp_path / "bad3.json"
    bad3.write_text(json.dumps({
        "task": "residue",
        "residue": {"geometry": {"kind": "moebius", "dim": 2}}}))
    assert run(["residue", "--config", bad3]) == 2
    err = capsys.readouterr().err
    assert "kind" in err


def test_task_mismatch_rejected(tmp_path):
    assert run(["dixmier", "--config", CONFIGS / "residue_torus.json"]) == 2


def test_resource_cap_exit_code(tmp_path):
    code = run(["dixmier", "--config", CONFIGS / "dixmier_torus.json",
                "--out", tmp_path,
                "--set", "dixmier.model.cutoff=100000"])
    assert code == 4


def test_tolerance_failure_exit_code(tmp_path):
    # cutoff far too small for the t grid: the certified tail overwhelms
    # the fit and the run must fail with the tolerance exit code
    code = run(["zeta", "--config", CONFIGS / "zeta_epstein.json",
                "--out", tmp_path, "--set", "zeta.model.cutoff=40"])
    assert code == 3


def test_set_override_and_hash_changes(tmp_path):
    cfg1 = parse_config((CONFIGS / "residue_torus.json").read_text())
    code = run(["residue", "--config", CONFIGS / "residue_torus.json",
                "--out", tmp_path, "--set", "seed=5"])
    assert code == 0
    csv = (tmp_path / "residue.csv").read_text()
    assert config_hash(cfg1) not in csv    # override changed the hash


def test_byte_identical_across_threads(tmp_path):
    blobs = {}
    for threads in (1, 4, 8):
        out = tmp_path / f"t{threads}"
        for task, cfgfile in [("dixmier", "dixmier_torus.json"),
                              ("heat", "heat_torus.json"),
                              ("zeta", "zeta_epstein.json")]:
            code = run([task, "--config", CONFIGS / cfgfile, "--out", out,
                        "--threads", threads])
            assert code == 0
            blobs[(task, threads)] = (out / f"{task}.csv").read_bytes()
    for task in ("dixmier", "heat", "zeta"):
        assert blobs[(task, 1)] == blobs[(task, 4)] == blobs[(task, 8)]


def test_verify_fast_smoke(tmp_path, capsys):
    code = run(["verify", "--config", CONFIGS / "verify_fast.json",
                "--out", tmp_path,
                "--set", "verify.fast=true"])
    # full fast suite; asserts its own tolerances internally
    assert code == 0
    out = capsys.readouterr().out
    assert "residue_closed_form" in out
    assert "FAIL" not in out
