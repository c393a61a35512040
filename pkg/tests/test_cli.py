"""CLI smoke and determinism tests (run through subprocess)."""

import json
import math
import subprocess
import sys

import pytest

ENTRY = [sys.executable, "-m", "tfbounds.cli"]


def run_cli(*args, check=True):
    result = subprocess.run(
        ENTRY + list(args), capture_output=True, text=True
    )
    if check and result.returncode != 0:
        raise AssertionError(f"CLI failed ({result.returncode}): {result.stderr}")
    return result


def test_code_bound_json():
    result = run_cli("--json", "code-bound", "--alpha", "0.2", "--dim", "10")
    payload = json.loads(result.stdout)
    assert payload["best_upper"] == 16
    assert payload["best_method"] == "delsarte"
    assert payload["manifest"]["command"] == "code-bound"
    assert payload["manifest"]["version"]


def test_code_search_respects_bound():
    result = run_cli("--json", "code-search", "--alpha", "0.5", "--dim", "2", "--trials", "300")
    payload = json.loads(result.stdout)
    assert payload["size"] >= 3
    assert payload["size"] <= payload["best_upper"]


def test_bound_gaussian_value():
    result = run_cli("--json", "bound", "gaussian", "--a", "1", "--C", repr(2.0**0.25))
    payload = json.loads(result.stdout)
    assert payload["n_bound"] == 41
    assert payload["details"]["closed_form_value"] == 41.721342679717125


def test_bound_power_law_value():
    result = run_cli("--json", "bound", "power-law", "--p", "2", "--C", repr(math.sqrt(1.5)))
    payload = json.loads(result.stdout)
    assert payload["n_bound"] == 250000


def test_bound_mean_dispersion_plain_and_p_route():
    plain = json.loads(run_cli("--json", "bound", "mean-dispersion", "--A", "1").stdout)
    assert plain["n_max"] == 24
    routed = json.loads(
        run_cli("--json", "bound", "mean-dispersion", "--A", "1", "--p", "2").stdout
    )
    assert routed["n_bound"] > plain["n_max"]


def test_riesz_alpha_command():
    result = run_cli(
        "--json", "riesz", "alpha", "--epsilon", "0.1", "--normU", "1.0", "--normUinv", "1.0"
    )
    payload = json.loads(result.stdout)
    assert payload["alpha"] == 0.1**2 / (1 - 0.1**2)


def test_usage_error_exit_code():
    result = run_cli("code-bound", "--alpha", "1.0", "--dim", "3", check=False)
    assert result.returncode == 2
    assert "degenerate" in result.stderr


def test_pswf_build_writes_files(tmp_path):
    out_json = tmp_path / "b.json"
    out_csv = tmp_path / "b.csv"
    run_cli(
        "pswf", "build", "--T", "1", "--Omega", "1", "--d", "8",
        "--out-json", str(out_json), "--out-csv", str(out_csv),
    )
    header = json.loads(out_json.read_text())
    assert header["d_max"] == 8
    assert out_csv.exists()


def test_project_code_roundtrip(tmp_path):
    from tfbounds.hermite import build_hermite_basis
    from tfbounds.numerics import default_grid, write_function_csv

    basis = build_hermite_basis(2, default_grid())
    paths = []
    for k, f in enumerate(basis.functions):
        path = tmp_path / f"h{k}.csv"
        write_function_csv(f, path)
        paths.append(str(path))
    result = run_cli(
        "--json", "project-code", "--family", *paths,
        "--basis", "pswf", "--d", "17", "--epsilon", "0.01", "--T", "2", "--Omega", "2",
    )
    payload = json.loads(result.stdout)
    assert payload["size"] == 2
    assert payload["coherence"] <= payload["alpha_bound"] + 1e-8


def test_verify_exit_zero():
    result = run_cli("--tol-profile", "fast", "verify", "codes")
    assert "[PASS] suite codes" in result.stdout


def test_umbrella_commands_agree_at_beta_zero():
    spec = f"gauss:1,{2.0**0.25!r}"
    base = json.loads(run_cli("--json", "bound", "umbrella", "--phi", spec, "--psi", spec).stdout)
    riesz = json.loads(
        run_cli("--json", "bound", "umbrella-riesz", "--phi", spec, "--psi", spec, "--beta", "0").stdout
    )
    base.pop("manifest")
    riesz.pop("manifest")
    assert base == riesz


def test_reproduce_bundle_deterministic(tmp_path):
    out1 = tmp_path / "bundle1"
    out2 = tmp_path / "bundle2"
    run_cli("--tol-profile", "fast", "--seed", "3", "reproduce", "--out-dir", str(out1))
    run_cli("--tol-profile", "fast", "--seed", "3", "reproduce", "--out-dir", str(out2))
    names1 = sorted(p.name for p in out1.iterdir())
    names2 = sorted(p.name for p in out2.iterdir())
    assert names1 == names2
    for name in names1:
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name
    report = json.loads((out1 / "report.json").read_text())
    assert report["passed"]
    # headline values present in the bundle
    tables = {
        suite["suite"]: suite["tables"] for suite in report["suites"]
    }
    hermite_rows = tables["hermite"]["hermite_dispersions"]
    assert hermite_rows[0]["variance_time"] == pytest.approx(1.0 / (4 * math.pi), rel=1e-8)
    code_rows = tables["codes"]["code_bounds"]
    assert {"alpha": 0.2, "dim": 10}.items() <= {
        k: r[k] for r in code_rows for k in ("alpha", "dim") if r["dim"] == 10
    }.items()
    assert [r for r in code_rows if r["dim"] == 10][0]["best_upper"] == 16
    pipeline_rows = tables["pipelines"]["pipeline_values"]
    gauss_row = [r for r in pipeline_rows if r["pipeline"].startswith("gaussian")][0]
    assert gauss_row["value"] == pytest.approx(41.7213, abs=1e-3)
    figures = [n for n in names1 if n.endswith(".png")]
    assert len(figures) >= 5
