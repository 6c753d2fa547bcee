"""
Field construction, arithmetic, Frobenius, enumeration and irreducibility.

Run with:
    python -m tests.test_ffield
"""

import sys
import os
import itertools

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from ffcount.eligibility import BudgetExceededError, check_enumeration
from ffcount.ffield import (
    FieldElement, FieldMismatchError, InvalidDegreeError, InvalidFieldError, NotMonicError, Poly,
    arith, enumerate_field, field, find_irreducible, frobenius, is_irreducible, prime_field,
    prime_power, resolve_tower, spec_from_json, tower,
)
from tests import run_tests


def _monic(F, d):
    """All monic polynomials of degree d over F."""
    for lower in itertools.product(range(F.order), repeat=d):
        yield Poly(F, lower + (F.one,))


def _has_factor(f):
    F = f.field
    for d in range(1, f.degree // 2 + 1):
        for g in _monic(F, d):
            if (f % g).is_zero():
                return True
    return False


def test_find_irreducible_first_in_order():
    assert find_irreducible(3, 1).coeffs == (0, 1)
    assert find_irreducible(3, 2).coeffs == (1, 0, 1)
    assert find_irreducible(5, 2).coeffs == (2, 0, 1)


def test_find_irreducible_skip():
    assert find_irreducible(3, 2, skip=1).coeffs == (2, 1, 1)
    assert tower(3, 2, skip=1).rel_modulus != tower(3, 2).rel_modulus


def test_find_irreducible_rejects_bad_degree():
    try:
        find_irreducible(3, 0)
    except InvalidDegreeError:
        return
    raise AssertionError("degree 0 accepted")


def test_is_irreducible_examples():
    F3 = prime_field(3)
    assert is_irreducible(Poly.x(F3))
    assert not is_irreducible(Poly(F3, (2, 0, 1)))
    assert is_irreducible(Poly(F3, (1, 0, 1)))


def test_is_irreducible_rejects_non_monic():
    try:
        is_irreducible(Poly(prime_field(3), (1, 0, 2)))
    except NotMonicError:
        return
    raise AssertionError("non-monic input accepted")


def test_is_irreducible_matches_trial_division():
    for p, top in ((3, 4), (5, 3)):
        F = prime_field(p)
        for d in range(2, top + 1):
            for f in _monic(F, d):
                assert is_irreducible(f) == (not _has_factor(f)), f"{f} over F_{p}"


def test_irreducible_counts():
    F3 = prime_field(3)
    assert sum(is_irreducible(f) for f in _monic(F3, 2)) == 3
    assert sum(is_irreducible(f) for f in _monic(F3, 3)) == 8
    assert sum(is_irreducible(f) for f in _monic(prime_field(5), 2)) == 10


def test_invalid_fields():
    for q in (2, 15, 1):
        try:
            prime_power(q)
        except InvalidFieldError:
            continue
        raise AssertionError(f"q = {q} accepted")


def test_gf9_codes():
    F9 = field(3, 2)
    assert F9.modulus == (1, 0, 1)
    # code 3 is the class of x, a square root of -1 (code 2)
    assert F9.mul(3, 3) == 2
    assert F9.mul(3, F9.inv(3)) == 1


def test_arithmetic_identities():
    spec = tower(3, 2)
    for a in enumerate_field(spec):
        assert arith("add", a, FieldElement(spec, spec.zero)) == a
        assert arith("pow", a, spec.order) == a
        if not a.is_zero():
            assert arith("mul", a, arith("inv", a)) == FieldElement(spec, spec.one)


def test_inverse_of_zero():
    spec = tower(3, 3)
    try:
        arith("inv", FieldElement(spec, spec.zero))
    except ZeroDivisionError:
        return
    raise AssertionError("inverse of zero returned a value")


def test_field_mismatch():
    a = FieldElement(tower(3, 2), (1, 1))
    b = FieldElement(tower(3, 3), (1, 1, 0))
    try:
        a + b
    except FieldMismatchError:
        return
    raise AssertionError("mixed fields were added")


def test_frobenius():
    spec = tower(3, 2)
    t = FieldElement(spec, spec.basis(1))
    assert frobenius(t, 1) == -t
    for a in enumerate_field(tower(3, 3)):
        assert frobenius(a, 0) == a
        assert frobenius(a, 3) == a


def test_frobenius_is_an_automorphism():
    spec = tower(3, 3)
    elements = list(enumerate_field(spec))
    for a, b in itertools.product(elements, elements[:9]):
        assert frobenius(a * b, 1) == frobenius(a, 1) * frobenius(b, 1)
        assert frobenius(a + b, 1) == frobenius(a, 1) + frobenius(b, 1)


def test_enumeration():
    assert [a.value for a in enumerate_field(prime_field(3))] == [0, 1, 2]
    assert len({a.value for a in enumerate_field(field(3, 2))}) == 9
    assert len({a.value for a in enumerate_field(tower(3, 5))}) == 243
    assert [a.index for a in enumerate_field(tower(5, 2))] == list(range(25))


def test_enumeration_budget():
    try:
        enumerate_field(tower(3, 5), budget=100)
    except BudgetExceededError as e:
        assert "243" in str(e)
        return
    raise AssertionError("budget ignored")


def test_check_enumeration():
    assert check_enumeration(10, 10)["eligible"]
    assert check_enumeration(11, 10) == {
        "eligible": False,
        "reason": "enumeration needs 11 items, budget is 10",
        "required": 11,
    }


def test_spec_serialization():
    for spec in (field(3, 2), tower(3, 4), tower(9, 2), tower(5, 3, skip=1)):
        assert spec_from_json(spec.to_json()) == spec
    assert spec_from_json('{"p": 3, "r": 2, "modulus": [1, 0, 1]}') == field(3, 2)


def test_reducible_modulus_rejected():
    try:
        spec_from_json({"p": 3, "r": 2, "modulus": [2, 0, 1]})
    except InvalidFieldError:
        return
    raise AssertionError("reducible modulus accepted")


def test_resolve_tower():
    assert resolve_tower(3, 4) == tower(3, 4)
    try:
        resolve_tower(3, 4, tower(3, 3))
    except FieldMismatchError:
        return
    raise AssertionError("mismatched spec accepted")


def test_poly_basics():
    F = prime_field(5)
    zero = Poly(F, (0, 0))
    assert zero.degree == -1
    f = Poly(F, (1, 1)) * Poly(F, (4, 1))     # (x+1)(x-1) = x^2 - 1
    assert f.coeffs == (4, 0, 1)
    q, r = f.divmod(Poly(F, (1, 1)))
    assert q.coeffs == (4, 1) and r.is_zero()
    assert f.evaluate(1) == 0 and f.evaluate(2) == 3
    assert str(f) == "x^2 + 4"


def main():
    run_tests("ffield", [
        test_find_irreducible_first_in_order,
        test_find_irreducible_skip,
        test_find_irreducible_rejects_bad_degree,
        test_is_irreducible_examples,
        test_is_irreducible_rejects_non_monic,
        test_is_irreducible_matches_trial_division,
        test_irreducible_counts,
        test_invalid_fields,
        test_gf9_codes,
        test_arithmetic_identities,
        test_inverse_of_zero,
        test_field_mismatch,
        test_frobenius,
        test_frobenius_is_an_automorphism,
        test_enumeration,
        test_enumeration_budget,
        test_check_enumeration,
        test_spec_serialization,
        test_reducible_modulus_rejected,
        test_resolve_tower,
        test_poly_basics,
    ])


if __name__ == "__main__":
    main()
