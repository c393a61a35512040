import json

import pytest

from tfbounds.numerics import DomainError
from tfbounds.verify import PROFILES, SUITES, run_suites


def test_all_suites_pass_fast_profile():
    reports = run_suites(sorted(SUITES), "fast", seed=1)
    for report in reports:
        failing = [c.name for c in report.checks if not c.passed]
        assert report.passed, f"{report.suite}: {failing}"


def test_suite_results_deterministic():
    first = [r.to_json_dict() for r in run_suites(["codes", "riesz"], "fast", seed=7)]
    second = [r.to_json_dict() for r in run_suites(["codes", "riesz"], "fast", seed=7)]
    assert json.dumps(first, sort_keys=True) == json.dumps(second, sort_keys=True)


def test_expected_tables_present():
    reports = {r.suite: r for r in run_suites(sorted(SUITES), "fast", seed=2)}
    assert reports["hermite"].tables["hermite_dispersions"]
    assert reports["hermite"].tables["sharp_bound"]
    assert reports["pswf"].tables["pswf_eigenvalues"]
    assert reports["pswf"].tables["landau_pollak"]
    assert reports["codes"].tables["code_bounds"]
    assert reports["pipelines"].tables["pipeline_values"]
    assert reports["riesz"].tables["riesz_constants"]


def test_unknown_suite_rejected():
    with pytest.raises(DomainError, match="unknown suite"):
        run_suites(["nonsense"], "fast")


def test_text_format_marks_failures():
    report = run_suites(["codes"], "fast")[0]
    assert report.format_text().startswith("[PASS] suite codes")
    report.add("synthetic_failure", False, "injected")
    assert not report.passed
    assert report.format_text().splitlines()[0] == "[FAIL] suite codes"
    assert any("FAIL synthetic_failure" in line for line in report.format_text().splitlines())


def test_profiles_differ_only_in_corpus_sizes():
    fast, strict = PROFILES["fast"], PROFILES["strict"]
    assert fast.rotation_count < strict.rotation_count
    assert fast.lp_corpus_size < strict.lp_corpus_size
    assert fast.riesz_family_count < strict.riesz_family_count
