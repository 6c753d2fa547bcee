"""
Point counts, closed-form excess, L-polynomials, classification and root tables.

Run with:
    python -m tests.test_curves
"""

import sys
import os
import json

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from ffcount.curves import (
    L1_Q3, L2_Q3, L3_Q3_PRINTED, CountReport, CurveModel, InconsistentCountsError, LPolynomial,
    UnsupportedModelError, case_tag, classify, closed_form_excess, closed_lpoly, corollary_table,
    count_points, counts_from_lpoly, curve_lpoly, lpoly_from_counts, published_corollary_table,
    published_excess, root_descriptor, weil_check,
)
from ffcount.ffield import Poly, prime_field
from tests import run_tests


def test_models():
    assert CurveModel.c1(3).genus == 3
    assert CurveModel.c2(3).genus == 6
    assert CurveModel.named("c3", 3).genus == 6
    assert CurveModel.c1(9).genus == 36
    assert str(CurveModel.c1(3).f) == "x^4 + 2x^2"


def test_model_needs_degree_prime_to_p():
    try:
        CurveModel(3, Poly.from_terms(prime_field(3), {3: 1, 1: 1}))
    except UnsupportedModelError:
        return
    raise AssertionError("deg f = p accepted")


def test_case_tags():
    assert [case_tag(3, n) for n in (1, 2, 3, 6)] == ["1", "2", "p", "2p"]


def test_excess_anchors():
    assert closed_form_excess(3, 1) == 6
    assert closed_form_excess(3, 5) == -54
    assert closed_form_excess(3, 6) == 162
    assert count_points(CurveModel.c1(3), 1).value == 10
    assert count_points(CurveModel.c1(3), 5).value == 190


def test_excess_closed_vs_brute():
    grid = [(3, n) for n in range(1, 7)] + [(5, n) for n in range(1, 5)]
    grid += [(7, n) for n in range(1, 4)] + [(9, n) for n in range(1, 4)]
    for q, n in grid:
        c1 = CurveModel.c1(q)
        assert count_points(c1, n, "brute").value == count_points(c1, n, "closed").value, (q, n)


def test_closed_counts_only_for_c1():
    try:
        count_points(CurveModel.c2(3), 1, "closed")
    except UnsupportedModelError:
        return
    raise AssertionError("closed count for c2")


def test_hasse_weil_guard():
    try:
        CountReport(3, 1, "excess", 100, "brute", "1", genus=1)
    except InconsistentCountsError:
        pass
    else:
        raise AssertionError("excess 100 accepted for g = 1 over F_3")
    try:
        lpoly_from_counts(3, 1, [100])
    except InconsistentCountsError:
        return
    raise AssertionError("impossible count accepted")


def test_published_excess():
    assert published_excess(3, 6) is None
    assert published_excess(3, 2) == 0


def test_golden_l1():
    assert list(L1_Q3.coeffs) == [1, 6, 18, 36, 54, 54, 27]
    assert curve_lpoly(CurveModel.c1(3), "brute") == L1_Q3
    assert closed_lpoly(3) == L1_Q3
    assert counts_from_lpoly(L1_Q3, 1) == 10
    assert counts_from_lpoly(L1_Q3, 5) == 190


def test_golden_l2():
    assert list(L2_Q3.coeffs) == [1, 6, 27, 84, 225, 486, 927, 1458, 2025, 2268, 2187, 1458, 729]
    assert curve_lpoly(CurveModel.c2(3), "brute") == L2_Q3


def test_printed_l3_breaks_functional_equation():
    assert L3_Q3_PRINTED.functional_equation_violations() == [8]
    L3 = curve_lpoly(CurveModel.c3(3), "brute")
    assert L3.is_valid()
    assert L3.coeffs[8] == 567
    assert [i for i in range(13) if L3.coeffs[i] != L3_Q3_PRINTED.coeffs[i]] == [8]


def test_classify():
    assert classify(L1_Q3) == "supersingular"
    assert classify(L2_Q3) == "not-supersingular"
    assert classify(LPolynomial(9, 1, (1, 6, 9))) == "maximal"
    assert classify(LPolynomial(9, 1, (1, -6, 9))) == "minimal"
    for q in (3, 5, 7, 9):
        assert classify(closed_lpoly(q)) == "supersingular", q


def test_weil_check():
    assert weil_check(L1_Q3).passed
    assert weil_check(L2_Q3).passed
    assert weil_check(closed_lpoly(5)).passed
    report = weil_check(L3_Q3_PRINTED)
    assert not report.functional_equation and not report.passed


def test_weil_report_is_plain_json():
    for q in (5, 7, 9):
        report = weil_check(closed_lpoly(q))
        assert type(report.passed) is bool and report.passed, q
        assert type(report.max_deviation) is float
        json.dumps(report.to_dict())


def test_root_descriptors():
    assert [root_descriptor(j, 3) for j in (0, 3, 4, 6, 9)] == ["+1", "+i", "+w", "-1", "-i"]


def test_root_table_q3():
    table = corollary_table(3)
    expected = {"+i": 1, "-i": 1, "+i*w": 2, "-i*w": 0, "+i*w^2": 0, "-i*w^2": 2}
    assert table.to_dict()["entries"] == expected
    assert table.to_dict()["total"] == 6
    assert table.lpoly == L1_Q3
    assert published_corollary_table(3) == {k: float(v) for k, v in expected.items()}


def test_root_table_q9():
    entries = dict(corollary_table(9).entries())
    assert entries["+1"] == 4 and entries["-1"] == 20
    assert entries["+w"] == entries["+w^2"] == 16
    assert entries["-w"] == entries["-w^2"] == 8
    assert published_corollary_table(9)["+1"] == -6


def test_root_tables_rebuild():
    for q in (5, 7):
        table = corollary_table(q)
        assert sum(table.multiplicities) == q * (q - 1)
        assert table.lpoly == closed_lpoly(q)
        assert curve_lpoly(CurveModel.c1(q), "corollary") == closed_lpoly(q)


def main():
    run_tests("curves", [
        test_models,
        test_model_needs_degree_prime_to_p,
        test_case_tags,
        test_excess_anchors,
        test_excess_closed_vs_brute,
        test_closed_counts_only_for_c1,
        test_hasse_weil_guard,
        test_published_excess,
        test_golden_l1,
        test_golden_l2,
        test_printed_l3_breaks_functional_equation,
        test_classify,
        test_weil_check,
        test_weil_report_is_plain_json,
        test_root_descriptors,
        test_root_table_q3,
        test_root_table_q9,
        test_root_tables_rebuild,
    ])


if __name__ == "__main__":
    main()
