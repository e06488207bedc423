import csv
import json
import subprocess
import sys

import pytest

from signedsbm import netgen, sweep
from signedsbm.cli import main

FLAGS = ["--n", "40", "--d-in", "0.7", "--d-out", "0.7", "--p-in-pos", "0.8", "--p-out-neg", "0.8", "--seed", "3"]


def _small_config(path, replicates=2):
    cfg = sweep.SweepConfig(
        sweep.Axis("p_in_pos", 0.5, 0.8, 0.3),
        sweep.Axis("p_out_neg", 0.5, 0.8, 0.3),
        {"n": 30, "d_in": 0.45, "d_out": 0.45},
        replicates=replicates,
        master_seed=7,
    )
    path.write_text(json.dumps(cfg.to_dict()))
    return path


def test_generate_roundtrip(tmp_path):
    out, pj = tmp_path / "net.csv", tmp_path / "p.json"
    assert main(["generate", *FLAGS, "--out", str(out), "--params-out", str(pj)]) == 0
    params = netgen.load_params(pj)
    assert params.p_out_pos == pytest.approx(0.2)
    assert netgen.read_edgelist(out, n=40) == netgen.generate(params)


def test_generate_params_file_and_stdout(tmp_path, capsys):
    pj = tmp_path / "p.json"
    netgen.save_params(netgen.BlockParams(10, 1.0, 1.0, 1.0, 1.0), pj)
    assert main(["generate", "--params", str(pj)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "i,j,w" and len(lines) == 1 + 45


def test_outdir_env(tmp_path, monkeypatch):
    monkeypatch.setenv(sweep.OUTDIR_ENV, str(tmp_path / "o"))
    assert main(["predict", *FLAGS]) == 0
    data = json.loads((tmp_path / "o" / "prediction.json").read_text())
    assert data["regime"] == "AssortativeTwoFaction"


def test_predict_fields(capsys):
    assert main(["predict", "--n", "1000", "--p-in-pos", "0.6", "--p-out-pos", "0.4"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["prediction"]["lambda_C"] == pytest.approx(104.9)
    assert data["prediction"]["lambda_H"] is None
    assert set(data["boundaries"]) == {"assortative", "disassortative", "prosocial", "antisocial"}


def test_spectrum_from_edgelist(tmp_path, capsys):
    net = tmp_path / "net.csv"
    main(["generate", *FLAGS, "--out", str(net)])
    assert main(["spectrum", "--edgelist", str(net), "--n", "40", "--p-in-pos", "0.8", "--p-out-neg", "0.8"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data["eigenvalues"]) == 40
    assert data["regime"] == "AssortativeTwoFaction"


def test_evolve_outputs(tmp_path):
    out, final, traj = tmp_path / "o.csv", tmp_path / "f.csv", tmp_path / "t.csv"
    rc = main(["evolve", *FLAGS, "--out", str(out), "--final-out", str(final),
               "--trajectory", str(traj), "--entries", "0,1;0,39", "--times", "5"])
    assert rc == 0
    header, row = out.read_text().splitlines()
    assert header == "r_pos,r_neg,r,h,z,balanced"
    assert row.endswith(",true")
    assert len(netgen.read_edgelist(final).entries) == 40
    with open(traj) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "i", "j", "y_ij"] and len(rows) == 11


def test_classify_simulate(capsys):
    assert main(["classify", *FLAGS, "--simulate"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["regime_params"] == data["regime_spectrum"] == "AssortativeTwoFaction"
    assert data["leading_shape"] == "contrast"


@pytest.mark.parametrize(
    "kind, expect",
    [("trace", "lambda,f_numeric,f_analytic"), ("density", "bin_center,empirical_mass,semicircle_mass")],
)
def test_oracle_csv(kind, expect, capsys):
    assert main(["oracle", "--kind", kind, "--n", "100", "--points", "5", "--bins", "10"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == expect


def test_oracle_json(capsys):
    assert main(["oracle", "--kind", "interlace", "--n", "20", "--nu", "0.3"]) == 0
    assert json.loads(capsys.readouterr().out)["interlaced"] is True
    assert main(["oracle", "--kind", "variance", "--n", "20", "--trials", "20"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["expected_variance"] == pytest.approx(1.0)


def test_sweep_and_boundaries(tmp_path):
    cfg = _small_config(tmp_path / "cfg.json")
    out, bnd = tmp_path / "s.csv", tmp_path / "b.csv"
    assert main(["sweep", "--config", str(cfg), "--workers", "1", "--out", str(out), "--boundaries-out", str(bnd)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == sweep.SWEEP_HEADER and len(lines) == 5
    assert bnd.read_text().splitlines()[0] == sweep.BOUNDARY_HEADER
    out2 = tmp_path / "s2.csv"
    assert main(["sweep", "--config", str(cfg), "--workers", "2", "--out", str(out2)]) == 0
    assert out2.read_bytes() == out.read_bytes()
    assert main(["sweep", "--config", str(cfg), "--workers", "1", "--replicates", "1", "--out", str(out2)]) == 0
    assert out2.read_text().splitlines()[1].split(",")[2] == "1"


def test_boundaries_preset(capsys):
    assert main(["boundaries", "--preset", "fig5", "--samples", "5"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 6


@pytest.mark.parametrize(
    "argv",
    [
        ["generate", "--n", "7"],
        ["generate", "--d-in", "1.5"],
        ["predict", "--params", "/nonexistent/params.json"],
        ["sweep"],
        ["sweep", "--config", "/nonexistent.json"],
        ["frobnicate"],
        ["generate", "--n", "ten"],
    ],
)
def test_config_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_bad_sweep_axis_exit_1(tmp_path):
    path = tmp_path / "cfg.json"
    data = json.loads(_small_config(path).read_text())
    data["axis1"]["name"] = "temperature"
    path.write_text(json.dumps(data))
    assert main(["sweep", "--config", str(path)]) == 1


def test_numerical_failure_exit_2(tmp_path, capsys):
    # empty network: no blow-up
    assert main(["evolve", "--n", "10", "--d-in", "0", "--d-out", "0"]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "signedsbm.cli", "predict", "--n", "100"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["regime"] == "MixedTwoFaction"
