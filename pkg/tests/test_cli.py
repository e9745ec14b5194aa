"""Command-line surface: subcommands, config files, manifests and exit codes."""

import json

import pytest

import staggered_sbp
from tests.conftest import read_rows
from utils.config_loader import RunManifest
from utils.errors import NumericalFailure


def manifest_at(directory):
    return RunManifest.from_json((directory / "manifest.json").read_text())


def test_operators_verify_prints_orders(tmp_path, capsys):
    out = tmp_path / "ops"
    code = staggered_sbp.main(["operators", "--order", "42", "--n", "24", "--verify",
                               "--dump", "csv", "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out.splitlines()
    assert "Dcv.interior_order=4" in printed
    assert "Dcv.boundary_order=2" in printed
    assert any(line.startswith("sbp_residual=") for line in printed)

    for name in ("Hv", "Hc", "Dcv", "Dvc", "Pvc", "Pcv", "extrapolation"):
        assert (out / f"{name}.csv").exists()
    assert read_rows(out / "Dcv.csv")[0] == ["row", "col", "value"]

    manifest = manifest_at(out)
    assert manifest.command == "operators"
    assert manifest.config["order"] == "42"
    assert manifest.results["Dvc.interior_order"] == 4
    assert "verify.txt" in manifest.outputs
    assert manifest.finished


def test_spectrum_writes_every_eigenvalue(tmp_path):
    out = tmp_path / "spectrum" / "eig.csv"
    code = staggered_sbp.main(["spectrum", "--order", "42", "--n", "24", "--method", "sat",
                               "--out", str(out)])
    assert code == 0
    rows = read_rows(out)
    assert rows[0] == ["eigenvalue"]
    assert len(rows) == 26
    values = [float(r[0]) for r in rows[1:]]
    assert values == sorted(values)
    manifest = manifest_at(out.parent)
    assert manifest.results["near_zero"] == 2
    assert manifest.outputs == ["eig.csv"]


def test_grid_dump_and_criterion(tmp_path):
    out = tmp_path / "grid" / "metric.csv"
    code = staggered_sbp.main(["grid", "--nc", "12", "--dump", "metric", "--criterion",
                               "--order", "42", "--out", str(out)])
    assert code == 0
    rows = read_rows(out)
    assert rows[0] == ["panel", "i", "j", "pointset", "J", "Q11", "Q12", "Q22"]
    assert len(rows) == 1 + 6 * (13 * 13 + 2 * 13 * 12 + 12 * 12)
    results = manifest_at(out.parent).results
    assert 0 < results["pd_criterion"] < 1


def test_short_run_writes_diagnostics(tmp_path):
    out = tmp_path / "run"
    code = staggered_sbp.main(["run", "--case", "gauss1", "--order", "21", "--nc", "12",
                               "--days", "0.25", "--diag-hours", "6", "--snapshot-hours", "2",
                               "--time-mean", "--no-progress", "--out", str(out)])
    assert code == 0
    rows = read_rows(out / "diagnostics.csv")
    assert rows[0] == ["t_seconds", "mass", "energy", "tangential_jump"]
    assert [float(r[0]) for r in rows[1:]] == [0.0, 21600.0]

    manifest = manifest_at(out)
    assert manifest.results["steps"] == 9
    assert manifest.results["mass_drift"] <= 1e-12
    assert manifest.results["rossby_radius_m"] is None
    assert manifest.config["case"] == "gauss1"
    assert "h_time_mean.sbpf" in manifest.outputs
    assert "snapshots/h_0000000.sbpf" in manifest.outputs
    assert (out / "snapshots" / "v2_0000009.sbpf").exists()


def test_run_manifest_records_the_deformation_radius(tmp_path):
    out = tmp_path / "rotating"
    code = staggered_sbp.main(["run", "--case", "gauss3", "--order", "21", "--nc", "12",
                               "--days", "0.25", "--no-progress", "--out", str(out)])
    assert code == 0
    assert manifest_at(out).results["rossby_radius_m"] == pytest.approx(9.265e5, rel=1e-3)


def test_converge_writes_rates_and_reports(tmp_path):
    out = tmp_path / "conv"
    code = staggered_sbp.main(["converge", "--case", "solid", "--order", "42",
                               "--nc-list", "12,24", "--days", "0.25", "--no-progress",
                               "--out", str(out)])
    assert code == 0
    rows = read_rows(out / "rates.csv")
    assert rows[0] == ["Nc", "l2", "linf", "rate_l2", "rate_linf"]
    assert [r[0] for r in rows[1:]] == ["12", "24"]
    assert rows[1][3] == ""
    report = json.loads((out / "report.json").read_text())
    assert report["case"] == "solid"
    assert "<table>" in (out / "report.html").read_text()
    assert "CONVERGENCE REPORT" in (out / "report.txt").read_text()


def test_config_file_supplies_defaults(tmp_path):
    config = tmp_path / "spectrum.cfg"
    config.write_text("# Laplace spectrum\norder = 21\nmethod = sat-proj\nn = 12\n")
    out = tmp_path / "eig.csv"
    code = staggered_sbp.main(["spectrum", "--config", str(config), "--out", str(out)])
    assert code == 0
    assert len(read_rows(out)) == 14
    manifest = manifest_at(tmp_path)
    assert manifest.config["order"] == "21"
    assert manifest.config["method"] == "sat-proj"


def test_command_line_overrides_the_config_file(tmp_path):
    config = tmp_path / "ops.cfg"
    config.write_text("order = 21\nverify = yes\n")
    code = staggered_sbp.main(["operators", "--config", str(config), "--order", "42",
                               "--out", str(tmp_path / "ops")])
    assert code == 0
    manifest = manifest_at(tmp_path / "ops")
    assert manifest.config["order"] == "42"
    assert manifest.config["verify"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["operators", "--order", "84"],
        ["operators", "--order", "63-wave", "--n", "6"],
        ["spectrum", "--order", "42", "--method", "pure", "--out", "unused.csv"],
        ["run", "--case", "poor", "--nc", "12"],
        ["run", "--case", "gauss1", "--nc", "8"],
        ["converge", "--case", "solid", "--nc-list", "24"],
        ["converge", "--case", "solid", "--nc-list", "a,b"],
        [],
    ],
)
def test_invalid_input_exits_with_one(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert staggered_sbp.main(argv) == 1


def test_unknown_config_key_exits_with_one(tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("order = 42\ncolour = blue\n")
    assert staggered_sbp.main(["operators", "--config", str(config),
                               "--out", str(tmp_path / "o")]) == 1


def test_numerical_failure_exits_with_two(tmp_path, monkeypatch):
    def explode(args):
        raise NumericalFailure("non-finite h", module="swe_model", operation="rk4_step")

    monkeypatch.setattr(staggered_sbp, "cmd_spectrum", explode)
    code = staggered_sbp.main(["spectrum", "--order", "42", "--out", str(tmp_path / "e.csv")])
    assert code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        staggered_sbp.main(["--version"])
    assert info.value.code == 0
    assert staggered_sbp.__version__ in capsys.readouterr().out
