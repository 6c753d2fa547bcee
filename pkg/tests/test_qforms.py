"""
The quadratic form T1(x^(q+1) - x^2): radical, invariants and value counts.

Run with:
    python -m tests.test_qforms
"""

import sys
import os
import itertools

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from ffcount.ffield import enumerate_field, tower
from ffcount.qforms import (
    form_invariants, polarization, profile, qf_value_count, qf_zero_count, radical_dim,
)
from tests import run_tests

GRID = [(3, n) for n in range(1, 7)] + [(5, n) for n in range(1, 5)] + [(9, n) for n in range(1, 4)]


def test_radical_dimension():
    assert [radical_dim(3, n, budget=3**6) for n in range(1, 7)] == [1, 1, 2, 1, 1, 2]
    assert [radical_dim(5, n, budget=5**4) for n in range(1, 5)] == [1, 1, 1, 1]
    assert radical_dim(5, 5, budget=0) == 2


def test_invariants_agree_with_radical():
    for q, n in GRID:
        inv = form_invariants(tower(q, n))
        assert inv.w == radical_dim(q, n, budget=0), (q, n)
        assert inv.rank == n - inv.w


def test_zero_count_anchors():
    assert qf_zero_count(3, 1).value == 3
    assert qf_zero_count(3, 5).value == 63
    assert qf_zero_count(3, 6).value == 297


def test_zero_count_closed_vs_brute():
    for q, n in GRID:
        assert qf_zero_count(q, n, "closed").value == qf_zero_count(q, n, "brute").value, (q, n)


def test_value_counts_closed_vs_brute():
    for q, n in GRID:
        brute = [qf_value_count(q, n, c, "brute") for c in range(q)]
        closed = [qf_value_count(q, n, c, "closed") for c in range(q)]
        assert brute == closed, (q, n, brute, closed)
        assert sum(brute) == q ** n


def test_value_count_rejects_bad_code():
    try:
        qf_value_count(3, 2, 3)
    except ValueError:
        return
    raise AssertionError("c = 3 accepted over F_3")


def test_polarization_symmetric():
    elements = list(enumerate_field(tower(3, 3)))
    for x, y in itertools.product(elements, repeat=2):
        assert polarization(x, y) == polarization(y, x)


def test_profile():
    assert profile(3, 6).to_dict() == {"q": 3, "n": 6, "w": 2, "rank": 4, "N": 297, "case": "2p"}
    assert profile(3, 4, "brute").to_dict() == profile(3, 4, "closed").to_dict()
    assert profile(3, 1).rank == 0


def main():
    run_tests("qforms", [
        test_radical_dimension,
        test_invariants_agree_with_radical,
        test_zero_count_anchors,
        test_zero_count_closed_vs_brute,
        test_value_counts_closed_vs_brute,
        test_value_count_rejects_bad_code,
        test_polarization_symmetric,
        test_profile,
    ])


if __name__ == "__main__":
    main()
