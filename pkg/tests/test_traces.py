"""
T1, T2, characteristic and minimal polynomials, and the trace identities.

Run with:
    python -m tests.test_traces
"""

import sys
import os
import itertools
from collections import Counter

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from ffcount.eligibility import BudgetExceededError
from ffcount.ffield import FieldElement, Poly, enumerate_field, prime_field, tower
from ffcount.traces import (
    additivity_holds, artin_schreier_holds, char_poly, linear_trace, min_poly,
    newton_identity_holds, power_by_digits, trace1, trace2, trace_pair, trace_table,
)
from tests import run_tests

SMALL = [(3, 2), (3, 3), (5, 2), (9, 2)]


def test_root_of_x2_plus_1():
    spec = tower(3, 2)
    t = FieldElement(spec, spec.basis(1))
    assert trace1(t).value == 0
    assert trace2(t).value == 1
    assert char_poly(t).to_list() == [1, 0, 1]
    assert min_poly(t).to_list() == [1, 0, 1]


def test_base_element():
    spec = tower(3, 3)
    two = FieldElement(spec, spec.embed(2))
    assert trace1(two).value == 0
    assert trace2(two).value == 0
    assert min_poly(two).to_list() == [1, 1]
    assert char_poly(two).to_list() == [1, 0, 0, 1]


def test_trace_is_balanced():
    counts = Counter(trace1(a).value for a in enumerate_field(tower(3, 3)))
    assert counts == {0: 9, 1: 9, 2: 9}


def test_fast_path_matches_conjugates():
    for q, n in SMALL:
        spec = tower(q, n)
        for a in enumerate_field(spec):
            assert trace_pair(a).codes == (trace1(a).value, trace2(a).value), repr(a)
            assert linear_trace(spec, a.value) == trace1(a).value


def test_power_by_digits():
    spec = tower(3, 3)
    for a in enumerate_field(spec):
        for k in (1, 4, 5, 7, 26):
            assert power_by_digits(spec, a.value, k) == (a ** k).value


def test_newton_and_artin_schreier_exhaustive():
    for q, n in SMALL:
        for c in enumerate_field(tower(q, n)):
            assert newton_identity_holds(c), repr(c)
            assert artin_schreier_holds(c), repr(c)


def test_additivity_exhaustive():
    elements = list(enumerate_field(tower(3, 3)))
    for a, b in itertools.product(elements, repeat=2):
        assert additivity_holds(a, b), f"{a!r}, {b!r}"


def test_additivity_over_gf9():
    elements = list(enumerate_field(tower(9, 2)))
    for a, b in itertools.product(elements, elements[::7]):
        assert additivity_holds(a, b), f"{a!r}, {b!r}"


def test_char_poly_annihilates_element():
    for q, n in SMALL:
        spec = tower(q, n)
        for a in enumerate_field(spec):
            f = char_poly(a)
            assert f.degree == n and f.is_monic()
            lifted = Poly(spec, tuple(spec.embed(c) for c in f.coeffs))
            assert lifted.evaluate(a.value) == spec.zero


def test_char_poly_is_power_of_min_poly():
    for q, n in [(3, 4), (5, 2), (9, 2)]:
        for a in enumerate_field(tower(q, n)):
            m = min_poly(a)
            assert n % m.degree == 0
            assert char_poly(a) == m ** (n // m.degree)


def test_traces_need_relative_elements():
    try:
        trace1(FieldElement(prime_field(3), 1))
    except ValueError:
        return
    raise AssertionError("absolute element accepted")


def test_trace_table_budget():
    assert len(trace_table(tower(3, 3))) == 27
    try:
        trace_table(tower(3, 4), budget=27)
    except BudgetExceededError:
        return
    raise AssertionError("budget ignored")


def main():
    run_tests("traces", [
        test_root_of_x2_plus_1,
        test_base_element,
        test_trace_is_balanced,
        test_fast_path_matches_conjugates,
        test_power_by_digits,
        test_newton_and_artin_schreier_exhaustive,
        test_additivity_exhaustive,
        test_additivity_over_gf9,
        test_char_poly_annihilates_element,
        test_char_poly_is_power_of_min_poly,
        test_traces_need_relative_elements,
        test_trace_table_budget,
    ])


if __name__ == "__main__":
    main()
