"""
The verification grid on a small budget: checks pass, errata are recorded, and every
record reaches the metrics log.

Run with:
    python -m tests.test_verify
"""

import sys
import os
import json
import tempfile

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from ffcount.packager import build_document
from ffcount.verify import CheckRecord, GridVerifier, VerifyReport, run_verify
from tests import run_tests

SMALL = dict(grid=(3,), budget=27, samples=20, quiet=True)


def test_small_grid_passes_with_errata():
    with tempfile.TemporaryDirectory() as tmp:
        log = os.path.join(tmp, "verify.jsonl")
        report = run_verify(metrics_path=log, **SMALL)
        failures = [(c.check, c.inputs, c.expected, c.got) for c in report.failures]
        assert report.passed, failures
        names = {e.name for e in report.errata}
        assert "excess display" in names
        assert "root multiplicity display" in names
        assert "three-coefficient set exponent" in names
        with open(log, encoding="utf-8") as f:
            records = [json.loads(line) for line in f]
        assert len(records) == len(report.checks) + len(report.errata)
        assert {r["kind"] for r in records} == {"check", "erratum"}


def test_square_case_root_erratum():
    report = run_verify(metrics_path="", **SMALL)
    square = [e for e in report.errata if e.name == "root multiplicity display" and e.inputs == {"q": 9}]
    assert square
    assert square[0].printed["+1"] == -6
    assert square[0].implemented["+1"] == 4


def test_general_targets_cover_p_dividing_n():
    report = run_verify(metrics_path="", **SMALL)
    assert not [c for c in report.checks if c.check.endswith(" section")]
    at_three = [c for c in report.checks if c.check == "reduction keeps the count" and c.inputs["n"] == 3]
    assert [c.inputs["t2"] for c in at_three] == [0, 1, 2]
    uniform = [c for c in report.checks if c.check.startswith("uniform count") and c.inputs["n"] == 3]
    assert len(uniform) == 6 and all(c.passed for c in uniform)


def test_report_document():
    report = run_verify(metrics_path="", **SMALL)
    doc = build_document("verify", report.to_dict())
    assert doc["passed"] is True
    assert doc["grid"] == {"q": [3], "budget": 27, "samples": 20, "seed": report.grid["seed"]}
    assert doc["summary"]["checks"] == len(doc["checks"])
    assert "timing" not in doc
    json.dumps(doc)


def test_timing_is_opt_in():
    report = run_verify(metrics_path="", timing=True, **SMALL)
    assert "excess" in report.to_dict()["timing"]


def test_failed_check_fails_report():
    report = VerifyReport({"q": [3]})
    report.checks.append(CheckRecord("demo", {}, "oracle", 1, 1, True))
    assert report.passed
    report.checks.append(CheckRecord("demo", {}, "oracle", 1, 2, False))
    assert not report.passed and len(report.failures) == 1


def test_section_error_is_a_failure():
    verifier = GridVerifier(metrics_path="", **SMALL)

    def broken():
        raise ArithmeticError("boom")

    verifier.excess_grid = broken
    report = verifier.run()
    assert not report.passed
    assert report.failures[0].check == "excess section"


def main():
    run_tests("verify", [
        test_small_grid_passes_with_errata,
        test_square_case_root_erratum,
        test_general_targets_cover_p_dividing_n,
        test_report_document,
        test_timing_is_opt_in,
        test_failed_check_fails_report,
        test_section_error_is_a_failure,
    ])


if __name__ == "__main__":
    main()
