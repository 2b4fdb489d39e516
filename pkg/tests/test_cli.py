from __future__ import annotations

import csv
import hashlib
import json
import math
import os

import pytest

from speclimit.cli import main


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def box_config(**extra):
    doc = {"model": {"kind": "box", "units": "natural-box", "params": {"mass": 1.0, "width": 1.0}}}
    doc.update(extra)
    return doc


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# -- exit codes and errors ---------------------------------------------------


def test_missing_config_exits_2(tmp_path, capsys):
    rc = main(["spectrum", "--config", str(tmp_path / "absent.json")])
    assert rc == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"]["type"] == "ConfigError"


def test_invalid_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rc = main(["spectrum", "--config", str(bad)])
    assert rc == 2
    assert "invalid JSON" in json.loads(capsys.readouterr().err.strip())["error"]["message"]


def test_unknown_key_path_reported(tmp_path, capsys):
    cfg = write_config(tmp_path, box_config(bogus=1))
    rc = main(["spectrum", "--config", cfg, "--out", str(tmp_path / "out")])
    assert rc == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"]["path"] == "bogus"


def test_nested_unknown_key_path(tmp_path, capsys):
    doc = box_config()
    doc["model"]["params"]["height"] = 2.0
    cfg = write_config(tmp_path, doc)
    rc = main(["spectrum", "--config", cfg, "--out", str(tmp_path / "out")])
    assert rc == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert "model.params" in err["error"]["path"]


def test_analysis_mismatch_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path, box_config(analysis="criterion"))
    rc = main(["spectrum", "--config", cfg, "--out", str(tmp_path / "out")])
    assert rc == 2
    assert json.loads(capsys.readouterr().err.strip())["error"]["path"] == "analysis"


def test_computation_error_exits_3(tmp_path, capsys):
    # simulate on a harmonic model hits the degenerate-period error
    doc = {"model": {"kind": "harmonic", "units": "oscillator",
                     "params": {"mass": 1.0, "stiffness": 1.0}}}
    cfg = write_config(tmp_path, doc)
    rc = main(["simulate", "--config", cfg, "--out", str(tmp_path / "out")])
    assert rc == 3
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"]["type"] == "DegeneratePeriodError"


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["--version"])
    assert ei.value.code == 0
    assert capsys.readouterr().out.strip() == "speclimit 0.1.0 (schema 1)"


# -- spectrum -----------------------------------------------------------------


def test_spectrum_box_default_rows(tmp_path, capsys):
    cfg = write_config(tmp_path, box_config())
    out = tmp_path / "out"
    assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out / "spectrum.csv")
    assert rows[0] == ["n", "E_n", "tau_n"]
    assert len(rows) == 11  # header + default n_limit 10
    assert float(rows[1][1]) == pytest.approx(math.pi**2 / 2, rel=1e-11)
    assert float(rows[2][2]) == pytest.approx(1 / math.pi, rel=1e-11)


def test_spectrum_harmonic_constant_period(tmp_path):
    doc = {"model": {"kind": "harmonic", "units": "oscillator",
                     "params": {"mass": 1.0, "stiffness": 1.0}}, "n_limit": 5}
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out / "spectrum.csv")[1:]
    taus = {r[2] for r in rows}
    assert len(rows) == 5
    assert len(taus) == 1
    assert float(taus.pop()) == pytest.approx(2 * math.pi, rel=1e-11)


def test_spectrum_morse_stops_at_capacity(tmp_path):
    doc = {"model": {"preset": "morse-h2"}, "n_limit": 50}
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out / "spectrum.csv")[1:]
    assert len(rows) == 9
    assert [r[0] for r in rows] == [str(n) for n in range(9)]
    assert all(float(r[1]) < 0 for r in rows)


def test_spectrum_semiclassical_column(tmp_path):
    cfg = write_config(tmp_path, box_config(n_limit=4, semiclassical_check=True))
    out = tmp_path / "out"
    assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out / "spectrum.csv")
    assert rows[0] == ["n", "E_n", "tau_n", "E_semiclassical"]
    for row in rows[1:]:
        assert float(row[3]) == pytest.approx(float(row[1]), rel=1e-9)


# -- criterion ----------------------------------------------------------------


def test_criterion_box_outputs(tmp_path):
    cfg = write_config(tmp_path, box_config(n_range=[2, 20]))
    out = tmp_path / "out"
    assert main(["criterion", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out / "criterion.csv")
    assert rows[0] == ["n", "E_n", "tau_n", "dE", "dTau", "y_over_hbar", "resolvable"]
    by_n = {r[0]: r for r in rows[1:]}
    assert by_n["3"][6] == "true"
    assert by_n["4"][6] == "false"
    assert float(by_n["3"][5]) == pytest.approx(5 * math.pi / 24, rel=1e-11)
    summary = json.loads((out / "criterion_summary.json").read_text())
    assert summary["threshold"] == 4
    assert summary["regime"] == "crossover"


def test_criterion_y_curve_reference(tmp_path):
    cfg = write_config(tmp_path, box_config(n_range=[2, 6]))
    out = tmp_path / "out"
    assert main(["criterion", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out / "y_curve.csv")
    assert rows[0] == ["n", "y_over_hbar", "half"]
    assert all(r[2] == "0.5" for r in rows[1:])


def test_criterion_hydrogen_threshold_and_note(tmp_path):
    doc = {"model": {"preset": "hydrogen-atomic"}, "n_range": [2, 20]}
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["criterion", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "criterion_summary.json").read_text())
    assert summary["threshold"] == 10
    assert any("n = 10" in note for note in summary["notes"])


def test_criterion_default_range_morse(tmp_path):
    doc = {"model": {"preset": "morse-h2"}}
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["criterion", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out / "criterion.csv")[1:]
    assert [r[0] for r in rows] == [str(n) for n in range(1, 9)]
    summary = json.loads((out / "criterion_summary.json").read_text())
    assert summary["regime"] == "all-unresolvable"
    assert summary["max_y_over_hbar"] < 0.5


def test_criterion_bad_range_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path, box_config(n_range=[1, 5]))
    rc = main(["criterion", "--config", cfg, "--out", str(tmp_path / "out")])
    assert rc == 2
    assert json.loads(capsys.readouterr().err.strip())["error"]["path"] == "n_range"


# -- noise ---------------------------------------------------------------------


def test_noise_outputs(tmp_path):
    doc = {
        "model": {"kind": "harmonic", "units": "oscillator", "params": {"mass": 1.0, "stiffness": 1.0}},
        "noise": {"count": 5000},
        "seed": 5,
    }
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["noise", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "noise_summary.json").read_text())
    assert summary["product_over_hbar"] == pytest.approx(0.6, rel=0.05)
    assert summary["preparable"] is True
    assert summary["characteristic"]["all_within_3se"] is True
    assert summary["normalization_residual"] <= 1e-8
    assert summary["required_product"]["all_below_half"] is True
    ens = read_csv(out / "position_ensemble.csv")
    assert ens[0] == ["seed", "stream", "center", "sigma", "count"]
    assert ens[1][0] == "5"
    assert len(ens) == 3 + 5000
    grid = read_csv(out / "characteristic_check.csv")
    assert len(grid) == 21  # header + 20 grid points
    assert all(r[7] == "true" for r in grid[1:])
    products = read_csv(out / "required_product.csv")[1:]
    assert float(products[0][1]) == pytest.approx(1 / 8, abs=1e-9)
    assert float(products[1][1]) == pytest.approx(1 / 24, abs=1e-9)


def test_noise_box_has_no_required_product(tmp_path):
    doc = box_config(noise={"count": 2000})
    cfg = write_config(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["noise", "--config", cfg, "--out", str(out)]) == 0
    assert not (out / "required_product.csv").exists()
    summary = json.loads((out / "noise_summary.json").read_text())
    assert "required_product" not in summary


# -- simulate --------------------------------------------------------------------


def test_simulate_box_sweep(tmp_path):
    cfg = write_config(tmp_path, box_config(n_range=[2, 12], seed=0))
    out = tmp_path / "out"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    rows = read_csv(out / "sweep.csv")
    assert rows[0] == ["n", "tau_n", "d_prime", "bayes_error", "mc_resolvable",
                       "y_over_hbar", "criterion_resolvable"]
    assert len(rows) == 12
    summary = json.loads((out / "simulate_summary.json").read_text())
    assert summary["criterion_threshold"] == 4
    assert abs(summary["mc_crossover"] - 4) <= 1
    assert summary["crossover_within_one"] is True
    assert summary["protocol"]["delta_t_mode"] == "auto-saturating"


def test_simulate_protocol_echo(tmp_path):
    cfg = write_config(tmp_path, box_config(
        n_range=[2, 4], protocol={"s": 2, "trials": 500, "delta_t": 0.01}))
    out = tmp_path / "out"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "simulate_summary.json").read_text())
    assert summary["protocol"]["s"] == 2
    assert summary["protocol"]["trials"] == 500
    assert summary["protocol"]["delta_t"] == 0.01
    assert summary["protocol"]["delta_t_mode"] == "fixed"


# -- report ---------------------------------------------------------------------


def test_report_combined(tmp_path):
    cfg = write_config(tmp_path, box_config(n_range=[2, 12]))
    out = tmp_path / "out"
    assert main(["report", "--config", cfg, "--out", str(out)]) == 0
    for name in ("spectrum.csv", "criterion.csv", "y_curve.csv",
                 "criterion_summary.json", "report.json", "run_record.json"):
        assert (out / name).exists(), name
    rep = json.loads((out / "report.json").read_text())
    assert rep["threshold"] == 4
    assert rep["regime"] == "crossover"
    assert rep["level_count"] == 12


# -- precedence and the run record ---------------------------------------------


def test_seed_precedence_cli_over_config(tmp_path):
    doc = box_config(noise={"count": 100}, seed=1)
    doc["model"] = {"kind": "harmonic", "units": "oscillator", "params": {"mass": 1.0, "stiffness": 1.0}}
    cfg = write_config(tmp_path, doc)
    out1, out2, out3 = (tmp_path / d for d in ("o1", "o2", "o3"))
    assert main(["noise", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["noise", "--config", cfg, "--out", str(out2), "--seed", "1"]) == 0
    assert main(["noise", "--config", cfg, "--out", str(out3), "--seed", "2"]) == 0
    ens1 = (out1 / "position_ensemble.csv").read_bytes()
    ens2 = (out2 / "position_ensemble.csv").read_bytes()
    ens3 = (out3 / "position_ensemble.csv").read_bytes()
    assert ens1 == ens2  # config seed 1 == explicit seed 1
    assert ens1 != ens3


def test_out_dir_precedence(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, box_config(output_dir=str(tmp_path / "from-config")))
    assert main(["spectrum", "--config", cfg]) == 0
    assert (tmp_path / "from-config" / "spectrum.csv").exists()
    monkeypatch.setenv("SPECLIMIT_OUT", str(tmp_path / "from-env"))
    assert main(["spectrum", "--config", cfg]) == 0
    assert (tmp_path / "from-env" / "spectrum.csv").exists()
    assert main(["spectrum", "--config", cfg, "--out", str(tmp_path / "from-flag")]) == 0
    assert (tmp_path / "from-flag" / "spectrum.csv").exists()


def test_run_record_manifest(tmp_path):
    cfg = write_config(tmp_path, box_config(n_range=[2, 6]))
    out = tmp_path / "out"
    assert main(["criterion", "--config", cfg, "--out", str(out)]) == 0
    record = json.loads((out / "run_record.json").read_text())
    assert record["tool"] == "speclimit"
    assert record["schema"] == "1"
    assert record["analysis"] == "criterion"
    assert record["seed"] == 0
    names = {e["name"] for e in record["outputs"]}
    assert names == {"criterion.csv", "y_curve.csv", "criterion_summary.json"}
    for entry in record["outputs"]:
        digest = hashlib.sha256((out / entry["name"]).read_bytes()).hexdigest()
        assert entry["sha256"] == digest
        assert entry["bytes"] == os.path.getsize(out / entry["name"])


def test_rerun_is_byte_identical(tmp_path):
    cfg = write_config(tmp_path, box_config(n_range=[2, 8], seed=9))
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert main(["simulate", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["simulate", "--config", cfg, "--out", str(out2)]) == 0
    rec1 = json.loads((out1 / "run_record.json").read_text())
    rec2 = json.loads((out2 / "run_record.json").read_text())
    assert rec1["outputs"] == rec2["outputs"]
    for entry in rec1["outputs"]:
        assert (out1 / entry["name"]).read_bytes() == (out2 / entry["name"]).read_bytes()
