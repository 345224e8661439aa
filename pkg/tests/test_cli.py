"""Exit codes and artifacts of the command-line interface."""

import shutil

import numpy as np
import pytest

from rieszlab import cli, experiments as ex, grid


def test_console_script_is_installed():
    assert shutil.which("riesz-lab") is not None


def test_moments_prints_exact_value(capsys):
    assert cli.main(["moments", "--d", "3", "--k", "3"]) == 0
    out = capsys.readouterr().out
    assert "1/105" in out


def test_moments_with_monte_carlo(capsys):
    rc = cli.main(
        ["moments", "--d", "3", "--k", "1", "--mc-samples", "20000", "--seed", "3"]
    )
    assert rc == 0
    assert "monte_carlo" in capsys.readouterr().out


def test_constants_table(capsys):
    assert cli.main(["constants", "--k", "1", "--d-max", "4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 5  # header plus one row per dimension


def test_transform_roundtrip(tmp_path, capsys):
    spec = grid.make_grid(2, 32, 8.0)
    src = tmp_path / "f.json"
    dst = tmp_path / "g.json"
    grid.save_field(grid.test_function(spec, "gaussian", sigma=0.8), src)
    rc = cli.main(
        ["transform", "--input", str(src), "--poly", "x1", "--t", "1.0",
         "--output", str(dst)]
    )
    assert rc == 0
    out = grid.load_field(dst)
    assert out.spec == spec
    assert grid.lp_norm(out, 2) > 0


def test_transform_maximal_variant(tmp_path):
    spec = grid.make_grid(1, 128, 8.0)
    src = tmp_path / "f.json"
    dst = tmp_path / "g.json"
    grid.save_field(grid.test_function(spec, "gaussian", sigma=0.8), src)
    rc = cli.main(
        ["transform", "--input", str(src), "--poly", "x1", "--maximal",
         "--output", str(dst)]
    )
    assert rc == 0
    assert np.all(grid.load_field(dst).values >= 0)


def test_transform_rejects_even_degree(tmp_path, capsys):
    spec = grid.make_grid(2, 16, 4.0)
    src = tmp_path / "f.json"
    grid.save_field(grid.test_function(spec, "gaussian", sigma=0.4), src)
    rc = cli.main(
        ["transform", "--input", str(src), "--poly", "x1 x2",
         "--output", str(tmp_path / "g.json")]
    )
    assert rc == 2


def test_transform_rejects_non_harmonic(tmp_path):
    spec = grid.make_grid(2, 16, 4.0)
    src = tmp_path / "f.json"
    grid.save_field(grid.test_function(spec, "gaussian", sigma=0.4), src)
    rc = cli.main(
        ["transform", "--input", str(src), "--poly", "x1^3",
         "--output", str(tmp_path / "g.json")]
    )
    assert rc == 2


def test_transform_missing_input_reports_error(tmp_path):
    rc = cli.main(
        ["transform", "--input", str(tmp_path / "nope.json"), "--poly", "x1",
         "--output", str(tmp_path / "g.json")]
    )
    assert rc == 2


def test_check_factorization_passes(capsys):
    rc = cli.main(
        ["check", "factorization", "--d", "3", "--k", "3", "--n", "32",
         "--l", "8"]
    )
    assert rc == 0
    assert "PASS" in capsys.readouterr().out


def test_check_fails_under_impossible_tolerance(capsys):
    rc = cli.main(
        ["check", "m1t", "--d", "2", "--k", "1", "--n", "64", "--l", "8",
         "--tol", "1e-6"]
    )
    assert rc == 1
    assert "FAIL" in capsys.readouterr().out


def test_check_rotations_reports_uncertainty(capsys):
    rc = cli.main(
        ["check", "rotations", "--d", "2", "--k", "1", "--n", "32", "--l", "8",
         "--samples", "64", "--seed", "0"]
    )
    assert rc == 0
    assert "PASS" in capsys.readouterr().out


def test_sweep_writes_deterministic_csv(tmp_path, capsys):
    cfg = ex.ExperimentConfig(
        k=1, d_range=(1,), p_list=(2.0,), grids={1: (256, 8.0)},
        t_count=4, corpus=("gaussian",), seed=1,
    )
    cfg_path = tmp_path / "config.json"
    cfg.to_json(cfg_path)
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert cli.main(["sweep", "--config", str(cfg_path), "--out", str(out_a)]) == 0
    assert cli.main(["sweep", "--config", str(cfg_path), "--out", str(out_b)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_usage_errors_exit_with_code_two():
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["moments", "--d", "3"])
    assert info.value.code == 2
