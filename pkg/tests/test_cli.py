import json

from ellint.cli import main


def test_coeffs_json(capsys):
    assert main(["coeffs", "--series", "f", "--order", "5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["coefficients"][:2] == ["1/320", "517/201600"]
    assert out["coefficients"][5] == "2989339649544551/2636271525888000000"


def test_coeffs_csv_is_stable(capsys):
    main(["coeffs", "--series", "h12", "--order", "4", "--format", "csv"])
    a = capsys.readouterr().out
    main(["coeffs", "--series", "h12", "--order", "4", "--format", "csv"])
    assert a == capsys.readouterr().out
    assert a.splitlines()[1] == "0,517,604800"


def test_eval(capsys):
    assert main(["eval", "--fn", "h1", "--r", "0.5", "--prec", "128"]) == 0
    assert "1.534436" in capsys.readouterr().out


def test_eval_with_param(capsys):
    assert main(["eval", "--fn", "h2", "--param", "1", "--r", "0.001"]) == 0
    assert "0.0093" in capsys.readouterr().out


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["eval", "--fn", "h2", "--r", "0.5"]) == 2
    assert main(["eval", "--fn", "f", "--r", "1.5"]) == 2
    err = capsys.readouterr().err
    assert "ParamRequired" in err


def test_env_precision(monkeypatch, capsys):
    monkeypatch.setenv("ELLINT_PREC_BITS", "64")
    assert main(["eval", "--fn", "f", "--r", "0.5"]) == 0
    monkeypatch.setenv("ELLINT_PREC_BITS", "junk")
    assert main(["eval", "--fn", "f", "--r", "0.5"]) == 2


def test_bounds_and_crossover(capsys):
    assert main(["bounds", "--r", "0.5", "--family", "Ineq1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("family,lower,target,upper,holds") and ",yes" in out
    assert main(["crossover"]) == 0
    assert "0.99999222" in capsys.readouterr().out


def test_scan(capsys):
    assert main(["scan", "--target", "h10", "--grid", "50"]) == 0
    assert "crossing [" in capsys.readouterr().out


def test_plot_csv(tmp_path):
    path = tmp_path / "f.csv"
    assert main(["plot", "--fn", "f", "--points", "20", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "r,value,err_bound" and len(lines) == 21


def test_verify_single_claim(tmp_path):
    path = tmp_path / "rep.json"
    assert main(["verify", "--claim", "coeffs-f", "--report", str(path)]) == 0
    rows = json.loads(path.read_text())
    assert {"claim_id", "status", "precision_bits", "min_margin", "witness", "elapsed_ms"} <= set(rows[0])


def test_bench_runs(capsys):
    assert main(["bench", "--reps", "1", "--prec", "64"]) == 0
    assert "AGM reference" in capsys.readouterr().out
