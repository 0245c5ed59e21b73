import json

from mpmath import mpf, workprec

from hpcert import NonconvergenceError
from hpcert.cli import EXIT_CHECK_FAILED, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, main

TOP_KEYS = ["tool_version", "precision_bits", "started_at", "checks", "passed_count", "failed_count"]
CHECK_KEYS = [
    "id",
    "description",
    "paper_ref",
    "lhs",
    "rhs",
    "abs_error",
    "tolerance",
    "passed",
    "evaluations",
    "elapsed_ms",
]


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_list_exits_zero(capsys):
    code, out, err = run_cli(capsys, "--list")
    assert code == EXIT_OK
    assert "eq01_sigma_series" in out
    assert "Eq. (1)" in out
    assert err == ""


def test_list_respects_filter(capsys):
    code, out, _ = run_cli(capsys, "--list", "--filter", "app1*")
    assert code == EXIT_OK
    ids = [line.split()[0] for line in out.strip().splitlines()]
    assert ids and all(i.startswith("app1") for i in ids)


def test_precision_below_minimum_is_usage_error(capsys):
    code, out, err = run_cli(capsys, "--precision-bits", "63")
    assert code == EXIT_USAGE
    assert out == ""
    assert "64" in err


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "--frobnicate")
    assert code == EXIT_USAGE
    assert "error" in err


def test_empty_filter_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "--filter", "zzz*")
    assert code == EXIT_USAGE
    assert "matches no checks" in err


def test_json_single_check_schema(capsys):
    code, out, _ = run_cli(
        capsys,
        "--filter", "eq16*", "--format", "json", "--no-timestamp", "--precision-bits", "128",
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert list(doc.keys()) == TOP_KEYS
    assert doc["precision_bits"] == 128
    assert doc["started_at"] == "1970-01-01T00:00:00Z"
    assert doc["passed_count"] == 1 and doc["failed_count"] == 0
    (entry,) = doc["checks"]
    assert list(entry.keys()) == CHECK_KEYS
    assert entry["id"] == "eq16"
    assert entry["passed"] is True
    assert entry["lhs"].startswith("0.3084251375340424568")
    assert entry["elapsed_ms"] == 0
    with workprec(300):
        assert abs(mpf(entry["abs_error"])) <= mpf(entry["tolerance"])


def test_json_sigma_lhs_digits(capsys):
    code, out, _ = run_cli(
        capsys, "--filter", "eq01*", "--format", "json", "--no-timestamp"
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["checks"][0]["lhs"].startswith("-0.0289950930217387")


def test_json_round_trip(capsys):
    from hpcert.cli import RunConfig, build_report, render_json

    config = RunConfig(precision_bits=128, filter="eq1[06]*", no_timestamp=True)
    report = build_report(config)
    doc = json.loads(render_json(report, no_timestamp=True))
    assert doc["tool_version"] == report.tool_version
    assert doc["precision_bits"] == report.precision_bits
    assert doc["started_at"] == report.started_at
    assert doc["passed_count"] == report.passed_count
    assert doc["failed_count"] == report.failed_count
    assert [c["id"] for c in doc["checks"]] == [r.id for r in report.checks]
    for got, want in zip(doc["checks"], report.checks):
        assert got["passed"] == want.passed
        assert got["evaluations"] == want.evaluations
        with workprec(200):
            assert abs(mpf(got["lhs"]) - want.lhs_value.value) <= mpf(10) ** -37


def test_render_json_empty_checks_is_valid():
    from hpcert.cli import Report, render_json

    report = Report(
        tool_version="0.0", precision_bits=128, started_at="1970-01-01T00:00:00Z"
    )
    doc = json.loads(render_json(report))
    assert list(doc.keys()) == TOP_KEYS
    assert doc["checks"] == []
    assert doc["passed_count"] == 0 and doc["failed_count"] == 0


def test_golden_determinism(capsys):
    args = ["--filter", "eq10*", "--format", "json", "--no-timestamp", "--precision-bits", "128"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2


def test_text_format(capsys):
    code, out, _ = run_cli(capsys, "--filter", "eq08*", "--precision-bits", "128")
    assert code == EXIT_OK
    assert out.startswith("identity verification @ 128 bits")
    assert "PASS" in out and "eq08_A" in out
    assert out.strip().endswith("1 passed, 0 failed")


def test_failed_check_exit_code(capsys):
    code, out, _ = run_cli(
        capsys, "--filter", "eq03*", "--tolerance-exponent", "-10", "--precision-bits", "128"
    )
    assert code == EXIT_CHECK_FAILED
    assert "FAIL" in out


def test_internal_error_exit_code(capsys, monkeypatch):
    import hpcert.cli as cli_mod

    def boom(*args, **kwargs):
        raise NonconvergenceError("stuck")

    monkeypatch.setattr(cli_mod, "run_catalog", boom)
    code, out, err = run_cli(capsys, "--filter", "eq08*")
    assert code == EXIT_INTERNAL
    assert out == ""
    assert "internal error" in err


def test_jobs_process_pool(capsys):
    code, out, _ = run_cli(
        capsys, "--filter", "eq1[06]*", "--jobs", "2", "--precision-bits", "128"
    )
    assert code == EXIT_OK
    lines = [l for l in out.splitlines() if l.startswith("PASS")]
    assert [l.split()[1] for l in lines] == ["eq10", "eq16"]


def test_help_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "--help")
    assert code == EXIT_OK
    assert "--precision-bits" in out
