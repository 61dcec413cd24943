import io
import json
import math
import subprocess
import sys

import pytest

from entropic_particles.cli import RunConfig, UsageError, dump_json, parse_params, run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def test_catalog_lists_profiles():
    code, text = call("catalog")
    assert code == 0
    doc = json.loads(text)
    names = {r["name"] for r in doc["results"]}
    assert {"lorentzian", "beta_decay", "arctx"} <= names
    assert set(doc) == {"profile", "params", "results", "errors", "meta"}
    assert {"tolerances", "cutoffs", "version"} <= set(doc["meta"])


def test_totals_lorentzian_json():
    code, text = call("totals", "--profile", "lorentzian", "--params", "S_max=0.01,kappa=1",
                      "--format", "json")
    assert code == 0
    res = json.loads(text)["results"]
    assert res["N_total"] == pytest.approx(32e-4 / 3, rel=1e-7)
    assert res["E_spectral"] == pytest.approx(32e-4 / 3, rel=1e-7)
    assert res["E_stress"] == pytest.approx(32e-4 / 3, rel=1e-7)


def test_totals_black_hole():
    code, text = call("totals", "--profile", "black_hole_analog", "--params", "M=0.1")
    assert code == 0
    assert json.loads(text)["results"]["E_spectral"] == pytest.approx(0.1, rel=1e-6)


def test_diagnose_beta_decay():
    code, text = call("diagnose", "--profile", "beta_decay", "--params", "s=0.05,kappa=1,e=1")
    assert code == 0
    res = json.loads(text)["results"]
    assert res["gamma_ir"] == pytest.approx(-1, abs=0.05)
    assert res["n_convergent"] is False


def test_spectrum_csv_format_and_determinism():
    argv = ("spectrum", "--profile", "lorentzian", "--params", "S_max=0.01", "--format", "csv",
            "--count", "5", "--precision", "8")
    code, a = call(*argv)
    _, b = call(*argv)
    assert code == 0
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "p,N_p,err"
    assert len(lines) == 6
    p, n, err = lines[1].split(",")
    assert float(p) == pytest.approx(0.01)
    assert float(n) > 0


def test_spectrum_workers_byte_identical():
    base = ("spectrum", "--profile", "arctx", "--params", "v=0.1", "--format", "csv", "--count", "6")
    assert call(*base)[1] == call(*base, "--workers", "3")[1]


def test_json_round_trip_idempotent():
    _, text = call("totals", "--profile", "arctx", "--params", "v=0.1")
    doc = json.loads(text)
    again = dump_json(doc, 12)
    assert again == text
    assert dump_json(json.loads(again), 12) == again


def test_json_special_values():
    text = dump_json({"a": math.nan, "b": math.inf, "c": 1 + 2j, "d": 0.1234567891234}, 4)
    doc = json.loads(text)
    assert doc == {"a": None, "b": "inf", "c": {"re": 1.0, "im": 2.0}, "d": 0.1235}


def test_spectrum_regularized_semi_eternal():
    code, text = call("spectrum", "--profile", "uniform_semi_eternal", "--params", "S0=0.01",
                      "--reg", "exp", "--eps", "0.1", "--pmin", "0.5", "--pmax", "1", "--count", "2")
    assert code == 0
    doc = json.loads(text)
    assert doc["meta"]["regularization"] == {"scheme": "exponential_time", "eps": 0.1}
    assert all(v > 0 for v in doc["results"]["N_p"])


def test_totals_null_profile_regularized():
    code, text = call("totals", "--profile", "constant", "--params", "S0=0.01", "--reg", "energy")
    assert code == 0
    res = json.loads(text)["results"]
    assert res["N_total"] == 0 and res["E_spectral"] == 0


def test_divergence_exit_codes():
    code, text = call("totals", "--profile", "harmonic_discontinuous", "--params", "s=0.01,n=1")
    assert code == 3
    assert json.loads(text)["errors"]
    code, _ = call("totals", "--profile", "harmonic_discontinuous", "--params", "s=0.01,n=1",
                   "--uv-cutoff", "100")
    assert code == 0
    code, _ = call("spectrum", "--profile", "constant", "--params", "S0=0.01")
    assert code == 3
    code, _ = call("totals", "--profile", "beta_decay", "--params", "s=0.05")
    assert code == 3


def test_usage_errors():
    assert call("totals")[0] == 2
    assert call("totals", "--profile", "nope")[0] == 2
    assert call("totals", "--profile", "lorentzian", "--params", "S_max")[0] == 2
    assert call("spectrum", "--profile", "lorentzian", "--params", "S_max=0.01", "--pmin", "0")[0] == 2
    assert call("spectrum", "--profile", "lorentzian", "--params", "S_max=0.01", "--tol", "0.1")[0] == 2
    assert call("bogus")[0] == 2
    assert call("validate", "--criteria", "99")[0] == 2


def test_error_object_in_json_mode():
    code, text = call("totals", "--profile", "lorentzian", "--params", "kappa=1")
    assert code == 2
    err = json.loads(text)["errors"][0]
    assert "S_max" in err["message"]


def test_series_check():
    code, text = call("series-check", "--params", "p=0.3,q=0.2,s=0.1,order=6")
    assert code == 0
    res = json.loads(text)["results"]
    assert res["rel_diff"] < 1e-6
    assert [round(f["slope"]) for f in res["residual_fits"]] == [3, 4, 5]
    assert max(d["rel_diff"] for d in res["fourier_terms"]) < 1e-6


def test_validate_passing_criterion():
    code, text = call("validate", "--criteria", "10")
    assert code == 0
    assert json.loads(text)["results"]["failed"] == []


def test_validate_reports_failure_with_id():
    # the semi-eternal criterion fails (see the decisions ledger); exit 5 names it
    code, text = call("validate", "--criteria", "2")
    assert code == 5
    doc = json.loads(text)
    assert doc["results"]["failed"] == [2]
    assert doc["errors"][0]["criterion"] == 2


def test_run_config_invariants():
    kw = dict(profile="x", params={}, pmin=0.1, pmax=1.0, count=3, spacing="linear", tol=1e-8,
              reg=None, eps=None, uv_cutoff=None, format="json", precision=12,
              force_numeric=False, workers=1)
    assert list(RunConfig(**kw).pgrid()) == pytest.approx([0.1, 0.55, 1.0])
    for bad in ({"pmin": -1}, {"count": 1}, {"tol": 0.0}, {"tol": 0.5}, {"pmax": 0.05}):
        with pytest.raises(ValueError):
            RunConfig(**{**kw, **bad})


def test_parse_params():
    assert parse_params("a=1, b=2.5") == {"a": 1.0, "b": 2.5}
    assert parse_params("") == {}
    with pytest.raises(UsageError):
        parse_params("a")
    with pytest.raises(UsageError):
        parse_params("a=x")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "entropic_particles", "catalog", "--format", "csv"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert r.stdout.splitlines()[0] == "name,required,optional"
