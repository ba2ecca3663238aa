"""Command-line interface: exit codes and produced files."""

import os

import pytest

from convexfit.cli import main


@pytest.fixture()
def outdir(tmp_path):
    return tmp_path / "out"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_validate_ok(tmp_path, capsys):
    cfg = write(tmp_path, "ok.yaml", "container: disk\np: 2\nalpha: 0.5\n")
    assert main(["validate", cfg]) == 0
    assert "schema_version" in capsys.readouterr().out


def test_config_error_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, "bad.yaml", "container: disk\nalpha: 2\n")
    assert main(["solve", cfg]) == 2
    assert "alpha" in capsys.readouterr().err


def test_missing_file_is_config_error(capsys):
    assert main(["solve", "/nonexistent/cfg.yaml"]) == 2


def test_solve_writes_outputs(tmp_path, outdir):
    cfg = write(
        tmp_path,
        "run.yaml",
        f"container: disk\np: 2\nalpha: 0.5\nn: 32\nseeds: 1\noutput_dir: {outdir}\n",
    )
    assert main(["solve", cfg]) == 0
    for name in ("shape_nodal.csv", "history_nodal.csv", "shape_nodal.svg"):
        assert (outdir / name).exists()


def test_compare_methods_writes_three_files(tmp_path, outdir):
    cfg = write(
        tmp_path,
        "cmp.yaml",
        "container: square\np: 4\nalpha: 0.7\nn: 48\nn_f: 8\nm: 96\nq: 64\nseeds: 1\n"
        f"output_dir: {outdir}\n",
    )
    assert main(["compare-methods", cfg]) == 0
    names = os.listdir(outdir)
    assert "compare_run.csv" in names
    for tag in ("fourier", "nodal_cold", "nodal_warm"):
        assert f"compare_run_{tag}_history.csv" in names
        assert f"compare_run_{tag}.svg" in names


def test_oracle_error_exit_code(tmp_path, outdir, capsys):
    # the brute force needs the origin inside the container
    cfg = write(
        tmp_path,
        "oracle.yaml",
        "container: {type: translated, offset: [5, 0], base: disk}\n"
        f"p: 2\nalpha: 0.25\nn: 5\noracle_grid: 9\noutput_dir: {outdir}\n",
    )
    rc = main(["oracle", cfg])
    assert rc == 1
    assert "origin" in capsys.readouterr().err


def test_oracle_writes_fixture_row(tmp_path, outdir):
    cfg = write(
        tmp_path,
        "oracle.yaml",
        f"container: disk\np: 2\nalpha: 0.25\nn: 5\noracle_grid: 9\noutput_dir: {outdir}\n",
    )
    assert main(["oracle", cfg]) == 0
    text = (outdir / "oracle_disk_n5.csv").read_text()
    assert text.splitlines()[0] == "name,N,p,alpha,G,energy"
    assert (outdir / "oracle_disk_n5_shape.csv").exists()


def test_sweep_p_and_f_curve(tmp_path, outdir, capsys):
    cfg = write(
        tmp_path,
        "sweep.yaml",
        "container: disk\nalpha: 0.4\nps: [1, 2]\nalphas: [0.4, 0.8]\nn: 32\nseeds: 1\n"
        f"output_dir: {outdir}\n",
    )
    assert main(["sweep-p", cfg]) == 0
    assert main(["f-curve", cfg]) == 0
    out = capsys.readouterr().out
    assert "sigma" in out and "max_upward_violation" in out
    assert (outdir / "gamma_run.csv").exists()
    assert (outdir / "fcurve_run.csv").exists()


def test_export_svg_overlays_shapes(tmp_path, outdir):
    cfg = write(tmp_path, "cfg.yaml", f"container: disk\nn: 32\noutput_dir: {outdir}\n")
    shape_cfg = write(
        tmp_path,
        "inner.yaml",
        f"container: disk\np: 2\nalpha: 0.5\nn: 32\nseeds: 1\noutput_dir: {outdir}\n",
    )
    assert main(["solve", shape_cfg]) == 0
    assert main(["export-svg", cfg, str(outdir / "shape_nodal.csv")]) == 0
    assert (outdir / "shapes.svg").exists()


def test_method_both_emits_fourier_and_nodal(tmp_path, outdir):
    cfg = write(
        tmp_path,
        "both.yaml",
        "container: disk\np: 2\nalpha: 0.5\nmethod: both\nn: 32\nn_f: 6\nm: 64\nq: 64\n"
        f"seeds: 1\noutput_dir: {outdir}\n",
    )
    assert main(["solve", cfg]) == 0
    for name in ("shape_fourier.csv", "coefficients_fourier.csv", "shape_nodal.csv"):
        assert (outdir / name).exists()


def test_nodal_method_with_infinite_p_runs_minimax(tmp_path, outdir):
    cfg = write(
        tmp_path,
        "inf.yaml",
        f"container: disk\np: inf\nalpha: 0.25\nn: 32\nseeds: 1\noutput_dir: {outdir}\n",
    )
    assert main(["solve", cfg]) == 0
    assert (outdir / "shape_minimax.csv").exists()
    assert not (outdir / "shape_nodal.csv").exists()


def test_seed_and_outdir_flags(tmp_path):
    other = tmp_path / "elsewhere"
    cfg = write(tmp_path, "cfg.yaml", "container: disk\np: 2\nalpha: 0.5\nn: 32\nseeds: 1\n")
    assert main(["--output-dir", str(other), "--seed", "7", "solve", str(cfg)]) == 0
    assert (other / "shape_nodal.csv").exists()


def test_output_dir_env_default(tmp_path, monkeypatch):
    env_dir = tmp_path / "from-env"
    monkeypatch.setenv("CONVEXFIT_OUTDIR", str(env_dir))
    cfg = write(tmp_path, "cfg.yaml", "container: disk\np: 2\nalpha: 0.5\nn: 32\nseeds: 1\n")
    assert main(["solve", str(cfg)]) == 0
    assert (env_dir / "shape_nodal.csv").exists()
