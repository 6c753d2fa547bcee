"""
The ffcount command line: documents, exit codes, --format table and --out.

Run with:
    python -m tests.test_cli
"""

import sys
import os
import io
import json
import tempfile
from contextlib import redirect_stderr, redirect_stdout

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from ffcount import metrics
from ffcount.ffield import tower
from main import run
from tests import run_tests


def _call(*argv):
    out = io.StringIO()
    with redirect_stdout(out), redirect_stderr(io.StringIO()):
        code = run(list(argv))
    return code, out.getvalue()


def _json(*argv):
    code, text = _call(*argv)
    return code, json.loads(text)


def test_count_i_closed():
    code, doc = _json("count-i", "--q", "3", "--n", "5", "--t1", "0", "--t2", "0", "--method", "closed")
    assert code == 0
    assert doc["schema"] == "ffcount/1" and doc["command"] == "count-i"
    assert doc["value"] == 4
    assert list(doc)[:2] == ["schema", "command"]


def test_count_f():
    code, doc = _json("count-f", "--q", "3", "--n", "5")
    assert code == 0 and doc["value"] == 21 and doc["case"] == "1"
    code, doc = _json("count-f", "--q", "5", "--n", "3", "--t1", "1", "--t2", "0", "--gate")
    _, brute = _json("count-f", "--q", "5", "--n", "3", "--t1", "1", "--t2", "0", "--method", "brute")
    assert code == 0 and doc["value"] == brute["value"]


def test_count_f_three_coefficients():
    code, doc = _json("count-f", "--q", "3", "--n", "3", "--t3", "0", "--method", "brute")
    assert code == 0 and doc["value"] == 1 and doc["target"] == {"t1": 0, "t2": 0, "t3": 0}
    code, doc = _json("count-f", "--q", "3", "--n", "3", "--t3", "0")
    assert code == 1 and doc["error"]["type"] == "ValueError"


def test_lpoly_brute():
    code, doc = _json("lpoly", "--q", "3", "--curve", "c1", "--method", "brute")
    assert code == 0
    assert doc["lpoly"] == [1, 6, 18, 36, 54, 54, 27]
    assert doc["genus"] == 3 and doc["class"] == "supersingular"
    assert doc["weil"]["passed"] is True


def test_lpoly_corollary():
    code, doc = _json("lpoly", "--q", "3", "--method", "corollary")
    assert code == 0
    assert doc["roots"]["entries"]["+i*w"] == 2


def test_lpoly_other_q():
    code, doc = _json("lpoly", "--q", "5")
    assert code == 0 and doc["genus"] == 10
    assert doc["class"] == "supersingular" and doc["weil"]["passed"] is True
    code, doc = _json("lpoly", "--q", "7", "--method", "corollary")
    assert code == 0 and doc["roots"]["total"] == 42
    code, doc = _json("classify", "--q", "9")
    assert code == 0 and doc["class"] == "supersingular"


def test_verify_small_grid():
    saved = metrics.METRICS_FILE
    metrics.METRICS_FILE = ""
    try:
        code, doc = _json("verify", "--grid", "q=3", "--budget", "27", "--samples", "20", "--quiet")
    finally:
        metrics.METRICS_FILE = saved
    assert code == 0 and doc["passed"] is True
    assert doc["summary"]["failed"] == 0
    names = {e["name"] for e in doc["errata"]}
    assert {"excess display", "root multiplicity display", "three-coefficient set exponent"} <= names
    assert all(c["expected_source"] in ("oracle", "published") for c in doc["checks"])


def test_classify():
    code, doc = _json("classify", "--q", "5")
    assert code == 0 and doc["class"] == "supersingular"


def test_qform():
    code, doc = _json("qform", "--q", "3", "--n", "6")
    assert code == 0
    assert {k: doc[k] for k in ("q", "n", "w", "rank", "N", "case")} == {
        "q": 3, "n": 6, "w": 2, "rank": 4, "N": 297, "case": "2p",
    }
    code, doc = _json("qform", "--q", "3", "--n", "4", "--value", "1", "--method", "brute")
    assert code == 0 and doc["count"] > 0


def test_curve():
    code, doc = _json("curve", "--q", "3", "--n", "5", "--method", "brute")
    assert code == 0 and doc["points"] == 190 and doc["excess"] == -54
    code, doc = _json("curve", "--q", "3", "--n", "1", "--curve", "c2")
    assert code == 1 and doc["error"]["type"] == "UnsupportedModelError"


def test_field_and_trace():
    code, doc = _json("field", "--q", "3", "--n", "2", "--op", "frobenius", "--a", "3", "--b", "1")
    assert code == 0 and doc["op"]["result"] == 6
    code, doc = _json("field", "--q", "5", "--irreducible", "2")
    assert doc["irreducible"]["coeffs"] == [2, 0, 1]
    code, doc = _json("trace", "--q", "3", "--n", "2", "--elem", "3")
    assert code == 0 and (doc["t1"], doc["t2"]) == (0, 1) and doc["char_poly"] == [1, 0, 1]


def test_field_spec_override():
    spec = json.dumps(tower(3, 4, skip=1).to_json())
    _, default = _json("count-f", "--q", "3", "--n", "4", "--method", "brute")
    code, override = _json("count-f", "--q", "3", "--n", "4", "--method", "brute", "--field-spec", spec)
    assert code == 0 and override["value"] == default["value"]
    code, doc = _json("count-f", "--q", "3", "--n", "3", "--method", "brute", "--field-spec", spec)
    assert code == 1 and doc["error"]["type"] == "FieldMismatchError"


def test_errors_exit_1():
    code, doc = _json("count-f", "--q", "3", "--n", "2", "--t1", "5")
    assert code == 1 and doc["error"]["type"] == "ValueError"
    code, doc = _json("count-f", "--q", "3", "--n", "6", "--method", "brute", "--budget", "10")
    assert code == 1 and doc["error"]["type"] == "BudgetExceededError"
    code, doc = _json("count-f", "--q", "4", "--n", "2")
    assert code == 1 and doc["error"]["type"] == "InvalidFieldError"


def test_usage_error_exits_1():
    try:
        _call("count-f", "--bogus")
    except SystemExit as e:
        assert e.code == 1
        return
    raise AssertionError("unknown flag accepted")


def test_table_format():
    code, text = _call("count-i", "--q", "3", "--n", "5", "--format", "table")
    assert code == 0
    rows = {k.strip(): v for k, v in (line.split(" : ", 1) for line in text.strip().splitlines())}
    assert rows["value"].strip() == "4"
    assert rows["schema"].strip() == '"ffcount/1"'


def test_out_file_and_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "doc.json")
        _, first = _call("lpoly", "--q", "3", "--out", path)
        _, second = _call("lpoly", "--q", "3")
        assert first == second
        with open(path, encoding="utf-8") as f:
            assert f.read() == first


def main():
    run_tests("cli", [
        test_count_i_closed,
        test_count_f,
        test_count_f_three_coefficients,
        test_lpoly_brute,
        test_lpoly_corollary,
        test_lpoly_other_q,
        test_verify_small_grid,
        test_classify,
        test_qform,
        test_curve,
        test_field_and_trace,
        test_field_spec_override,
        test_errors_exit_1,
        test_usage_error_exits_1,
        test_table_format,
        test_out_file_and_determinism,
    ])


if __name__ == "__main__":
    main()
