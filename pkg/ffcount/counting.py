"""
F_q(n, t1, t2): elements a of F_{q^n} with T1(a) = t1, T2(a) = t2.
I_q(n, t1, t2): monic irreducibles x^n + t1 x^(n-1) + t2 x^(n-2) + ... over F_q.

Each quantity has an enumeration oracle and a closed form; the closed forms go through
the point counts of y^q - y = x^(q+1) - x^2 (F = q^(n-2) + excess / q^2) and Moebius
inversion over the divisors of n prime to p.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Mapping

from sympy import divisors, factorint

from config import POLY_BUDGET
from ffcount.curves import L2_Q3_FACTOR, L3_Q3_PRINTED, LPolynomial, case_tag, closed_form_excess
from ffcount.curves import newton_power_sums, published_excess, root_power_sums
from ffcount.cyclotomic import field_for, sqrt_q
from ffcount.eligibility import require_enumeration
from ffcount.ffield import FieldElement, FieldSpec, InvalidDegreeError, Poly, RelativeSpec
from ffcount.ffield import field, is_irreducible, prime_power, resolve_tower
from ffcount.qforms import qf_value_count
from ffcount.traces import TracePair, char_poly, linear_trace, power_by_digits, trace_pair


class FormulaInconsistencyError(ArithmeticError):
    """A closed form produced a non-integral or negative count."""


class IncompleteInputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Moebius machinery
# ---------------------------------------------------------------------------

def mobius(m: int) -> int:
    if m < 1:
        raise ValueError(f"mobius needs m >= 1, got {m}")
    exponents = factorint(m).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


def _value(F: Mapping[int, int], key: int) -> int:
    if key not in F:
        raise IncompleteInputError(f"no value supplied for {key}")
    return F[key]


def p_free_transform(f: Mapping[int, int], n: int, p: int) -> int:
    """F(n) = sum over d | n, p not dividing d, of f(n/d)."""
    return sum(_value(f, n // d) for d in divisors(n) if d % p)


def p_free_invert(F: Mapping[int, int], n: int, p: int) -> int:
    """f(n) = sum over d | n, p not dividing d, of mu(d) F(n/d)."""
    return sum(mobius(d) * _value(F, n // d) for d in divisors(n) if d % p)


def published_p_free_invert(F: Mapping[int, int], n: int, p: int) -> int:
    """The inversion with the constant factor mu(n) in place of mu(d)."""
    return sum(mobius(n) * _value(F, n // d) for d in divisors(n) if d % p)


# ---------------------------------------------------------------------------
# Targets and results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffTarget:
    """Prescribed coefficients as F_q codes; t3 only for the three-coefficient count."""

    t1: int = 0
    t2: int = 0
    t3: int | None = None

    def check(self, q: int) -> CoeffTarget:
        for name, v in (("t1", self.t1), ("t2", self.t2), ("t3", self.t3)):
            if v is not None and not 0 <= v < q:
                raise ValueError(f"{name} = {v} is not an element code of F_{q}")
        return self

    def to_dict(self) -> dict:
        out = {"t1": self.t1, "t2": self.t2}
        if self.t3 is not None:
            out["t3"] = self.t3
        return out


@dataclass
class IrreducibleCount:
    q: int
    n: int
    target: CoeffTarget
    value: int
    method: str
    quantity: str = "F"
    case_tag: str = ""

    def __post_init__(self):
        if self.value < 0:
            raise FormulaInconsistencyError(f"negative {self.quantity} count {self.value}")
        if self.quantity == "I" and self.n >= 2 and self.value * self.n > self.q ** self.n - self.q:
            raise FormulaInconsistencyError(f"{self.value} irreducibles of degree {self.n} exceed the total")
        if not self.case_tag:
            self.case_tag = case_tag(self.q, self.n)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "quantity": self.quantity,
            "target": self.target.to_dict(),
            "value": self.value,
            "method": self.method,
            "case": self.case_tag,
        }


@dataclass(frozen=True)
class ReducedTarget:
    """
    An equivalent target with t1 = 0, or `uniform` when p | n and t1 != 0 (every t2 then has
    the same count). `published` is the target the printed reduction would give instead.
    """

    t1: int
    t2: int
    uniform: bool = False
    published: tuple[int, int] | None = None


def _reduction_factor(q: int, n: int) -> int:
    """(n - 1) / (2n) as an F_q code (n prime to p)."""
    p, _ = prime_power(q)
    return (n - 1) * pow(2 * n, -1, p) % p


def reduce_target(q: int, n: int, target: CoeffTarget) -> ReducedTarget:
    """
    Shifting a by t1/n kills T1 and moves T2 to t2 - (n-1)/(2n) t1^2. For p | n the shift
    by c in F_q keeps T1 and moves T2 by -c t1, so all t2 share one count.
    """
    target.check(q)
    p, r = prime_power(q)
    F = field(p, r)
    if target.t1 == 0:
        return ReducedTarget(0, target.t2)
    if n % p == 0:
        return ReducedTarget(target.t1, target.t2, uniform=True, published=(0, 1))
    factor = _reduction_factor(q, n)
    t2 = F.sub(target.t2, F.mul(factor, F.mul(target.t1, target.t1)))
    return ReducedTarget(0, t2, published=published_reduction(q, n, target))


def published_reduction(q: int, n: int, target: CoeffTarget) -> tuple[int, int] | None:
    """The printed shift t2 - (n-1)/(2n) t1, with t1 unsquared. None when p | n (no shift exists)."""
    p, r = prime_power(q)
    if n % p == 0:
        return None
    F = field(p, r)
    return 0, F.sub(target.t2, F.mul(_reduction_factor(q, n), target.t1))


# ---------------------------------------------------------------------------
# F_q(n, t1, t2)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _trace_pairs(spec: RelativeSpec) -> Counter:
    return Counter(trace_pair(FieldElement(spec, raw)).codes for raw in spec.raws())


def trace_distribution(spec: RelativeSpec, budget: int | None = None) -> Counter:
    """(t1, t2) -> number of a in F_{q^n} with those traces."""
    require_enumeration(spec.order, budget, f"trace distribution of {spec.label}")
    return _trace_pairs(spec)


def _three_trace_count(spec: RelativeSpec, target: CoeffTarget, budget: int | None) -> int:
    require_enumeration(spec.order, budget, f"three-trace count over {spec.label}")
    base = spec.base
    n = spec.n
    want = (base.neg(target.t1), target.t2, base.neg(target.t3))
    count = 0
    for raw in spec.raws():
        f = char_poly(FieldElement(spec, raw))
        if (f.coefficient(n - 1), f.coefficient(n - 2), f.coefficient(n - 3)) == want:
            count += 1
    return count


def count_f_brute(
    q: int,
    n: int,
    target: CoeffTarget = CoeffTarget(),
    budget: int | None = None,
    spec: RelativeSpec | None = None,
) -> IrreducibleCount:
    """Enumerates F_{q^n}. With t3 set, the x^(n-3) coefficient -t3 of the characteristic polynomial also has to match."""
    target.check(q)
    spec = resolve_tower(q, n, spec)
    if target.t3 is None:
        value = trace_distribution(spec, budget)[(target.t1, target.t2)]
    else:
        value = _three_trace_count(spec, target, budget)
    return IrreducibleCount(q, n, target, value, "brute")


def count_f_closed(q: int, n: int, target: CoeffTarget = CoeffTarget()) -> IrreducibleCount:
    """F_q(n, 0, 0) = q^(n-2) + excess / q^2; n = 1, 2 are enumerated (q^2 elements at most)."""
    if (target.t1, target.t2, target.t3) != (0, 0, None):
        raise ValueError("the closed F count covers t1 = t2 = 0; use count_f_general")
    if n < 1:
        raise InvalidDegreeError(f"n must be >= 1, got {n}")
    if n <= 2:
        return count_f_brute(q, n, target)
    total = q ** n + closed_form_excess(q, n)
    if total % (q * q):
        raise FormulaInconsistencyError(f"F_{q}({n},0,0) = {total}/{q * q} is not an integer")
    return IrreducibleCount(q, n, target, total // (q * q), "closed")


def count_f_general(
    q: int,
    n: int,
    target: CoeffTarget,
    gate: bool = False,
    budget: int | None = None,
) -> IrreducibleCount:
    """
    reduce_target, then F_q(n, 0, 0) or #{c : Q(c) = t2'} / q (a -> c^q - c is q-to-1 onto
    the trace-zero hyperplane and carries T2 to Q). With gate=True the value distribution
    is also enumerated and a disagreement raises.
    """
    reduced = reduce_target(q, n, target)
    if reduced.uniform:
        value = q ** (n - 2)
    elif reduced.t2 == 0:
        value = count_f_closed(q, n).value
    else:
        points = qf_value_count(q, n, reduced.t2, "closed")
        if gate:
            oracle = qf_value_count(q, n, reduced.t2, "brute", budget)
            if oracle != points:
                raise FormulaInconsistencyError(
                    f"closed #{{Q = {reduced.t2}}} over F_{q}^{n} is {points}, enumeration gives {oracle}"
                )
        if points % q:
            raise FormulaInconsistencyError(f"#{{Q = {reduced.t2}}} = {points} is not divisible by q = {q}")
        value = points // q
    return IrreducibleCount(q, n, target, value, "closed")


def published_f_theorem(q: int, n: int) -> Fraction | None:
    """F_q(n, 0, 0) from the printed theorem; None where its exponent is not an integer."""
    excess = published_excess(q, n)
    if excess is None:
        return None
    return Fraction(q ** n + excess, q * q)


# ---------------------------------------------------------------------------
# I_q(n, t1, t2)
# ---------------------------------------------------------------------------

def count_i_brute(
    q: int,
    n: int,
    target: CoeffTarget = CoeffTarget(),
    budget: int | None = None,
) -> IrreducibleCount:
    """Tests every x^n + t1 x^(n-1) + t2 x^(n-2) + (free lower terms) for irreducibility."""
    target.check(q)
    if n < 2:
        raise InvalidDegreeError(f"two prescribed coefficients need n >= 2, got {n}")
    free = n - 2
    require_enumeration(q ** free, POLY_BUDGET if budget is None else budget, f"degree-{n} candidates over F_{q}")
    F = field(*prime_power(q))
    count = 0
    for k in range(q ** free):
        lower = []
        for _ in range(free):
            k, c = divmod(k, q)
            lower.append(c)
        if is_irreducible(Poly(F, tuple(lower) + (target.t2, target.t1, F.one))):
            count += 1
    return IrreducibleCount(q, n, target, count, "brute", "I")


def count_i_closed(
    q: int,
    n: int,
    f_counter: Callable[[int, int], int] | None = None,
    method: str = "closed",
) -> IrreducibleCount:
    """
    I_q(n, 0, 0) = (1/n) sum over d | n, p not dividing d, of
    mu(d) (F_q(n/d, 0, 0) - [p | n] q^(n/(pd))).
    `f_counter(q, m)` supplies F_q(m, 0, 0); enumeration values isolate the inversion step.
    """
    if n < 2:
        raise InvalidDegreeError(f"n must be >= 2, got {n}")
    if f_counter is None:
        def f_counter(q_: int, m: int) -> int:
            return count_f_closed(q_, m).value
    p, _ = prime_power(q)
    total = 0
    for d in divisors(n):
        if d % p == 0:
            continue
        term = f_counter(q, n // d)
        if n % p == 0:
            term -= q ** (n // (p * d))
        total += mobius(d) * term
    if total % n:
        raise FormulaInconsistencyError(f"I_{q}({n},0,0) = {total}/{n} is not an integer")
    return IrreducibleCount(q, n, CoeffTarget(), total // n, method, "I")


# ---------------------------------------------------------------------------
# Coefficients of powers of polynomials
# ---------------------------------------------------------------------------

def poly_traces(P: Poly) -> TracePair:
    """(T1, T2) of a monic polynomial: minus the x^(m-1) coefficient, and the x^(m-2) coefficient."""
    F = P.field
    m = P.degree
    return TracePair(FieldElement(F, F.neg(P.coefficient(m - 1))), FieldElement(F, P.coefficient(m - 2)))


def power_coeff_transform(F: FieldSpec, d: int, t1: int, t2: int) -> TracePair:
    """Traces of P^d from those of P: (d t1, C(d,2) t1^2 + d t2)."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    new_t1 = F.mul(F.scalar(d), t1)
    new_t2 = F.add(F.mul(F.scalar(comb(d, 2)), F.mul(t1, t1)), F.mul(F.scalar(d), t2))
    return TracePair(FieldElement(F, new_t1), FieldElement(F, new_t2))


def unsquared_power_transform(F: FieldSpec, d: int, t1: int, t2: int) -> TracePair:
    """The printed variant, C(d,2) t1 + d t2."""
    new_t1 = F.mul(F.scalar(d), t1)
    new_t2 = F.add(F.mul(F.scalar(comb(d, 2)), t1), F.mul(F.scalar(d), t2))
    return TracePair(FieldElement(F, new_t1), FieldElement(F, new_t2))


# ---------------------------------------------------------------------------
# Three prescribed coefficients
# ---------------------------------------------------------------------------

def f3_set_size(
    q: int,
    n: int,
    printed: bool = False,
    budget: int | None = None,
    spec: RelativeSpec | None = None,
) -> int:
    """
    #{x : T1(x^(q+1) - x^2) = 0 and T1(x^(2q+1) - x^(q+2)) = 0}. `printed` swaps the first
    condition for T1(x^(q+2) - x^2) as it appears in print.
    """
    spec = resolve_tower(q, n, spec)
    require_enumeration(spec.order, budget, f"three-coefficient set over {spec.label}")
    first = q + 2 if printed else q + 1
    count = 0
    for raw in spec.raws():
        x_sq = spec.mul(raw, raw)
        a = linear_trace(spec, spec.sub(power_by_digits(spec, raw, first), x_sq))
        if a:
            continue
        b = linear_trace(spec, spec.sub(power_by_digits(spec, raw, 2 * q + 1), power_by_digits(spec, raw, q + 2)))
        if b == 0:
            count += 1
    return count


def count_f3_brute(
    q: int,
    n: int,
    budget: int | None = None,
    spec: RelativeSpec | None = None,
) -> IrreducibleCount:
    """F_q(n, 0, 0, 0) = (1/q) of the two-trace set size."""
    size = f3_set_size(q, n, budget=budget, spec=spec)
    if size % q:
        raise FormulaInconsistencyError(f"three-coefficient set over F_{q}^{n} has {size} elements, not a multiple of q")
    return IrreducibleCount(q, n, CoeffTarget(0, 0, 0), size // q, "brute", "F3")


def f3_from_lpolys(n: int, lpolys: tuple[LPolynomial, LPolynomial, LPolynomial]) -> Fraction:
    """
    q = 3 only: 3^(n-3) - 3^(-3) (S_n(L1) + S_n(L2) + 2 S_n(L3)), S_n the Weil power sums.
    The line through (1, 2) gives a curve isomorphic to C3 under x -> -x, hence the 2.
    """
    l1, l2, l3 = lpolys
    if {l1.q, l2.q, l3.q} != {3}:
        raise ValueError("the line decomposition is worked out for q = 3")
    s = [newton_power_sums(L.coeffs, n)[-1] for L in (l1, l2, l3)]
    return Fraction(3) ** (n - 3) - Fraction(s[0] + s[1] + 2 * s[2], 27)


@dataclass(frozen=True)
class FormulaValue:
    n: int
    value: Fraction | None   # None when the expression is irrational
    integral: bool

    def to_dict(self) -> dict:
        return {"n": self.n, "value": None if self.value is None else str(self.value), "integral": self.integral}


def published_formula_f3(n: int) -> FormulaValue:
    """
    The printed q = 3 expression for F_3(n, 0, 0, 0), evaluated exactly in Q(zeta_12):
    alpha_j are the roots of 27x^6 + ... + 3x + 1 and beta_j the roots of the printed L3.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    q = 3
    K = field_for(3)
    root3 = sqrt_q(3)
    i = K.zeta(3)
    half = K.const(Fraction(1, 2))
    u = K.mul(half, i - root3)
    u_bar = K.mul(half, -i - root3)
    alpha = root_power_sums(L2_Q3_FACTOR, n)[-1]
    beta = root_power_sums(L3_Q3_PRINTED.coeffs, n)[-1]
    bracket = (
        K.pow(i, n)
        + K.pow(K.const(-1) * i, n)
        + K.const(2) * K.pow(u, n)
        + K.const(2) * K.pow(u_bar, n)
        + K.const(2 * alpha + (q - 1) * beta)
    )
    total = K.const(Fraction(3) ** (n - 3)) + K.mul(K.mul(K.pow(root3, n), K.const(Fraction(1, 27))), bracket)
    total = total.rem(K.modulus)
    if not K.is_rational(total):
        return FormulaValue(n, None, False)
    value = K.rational(total)
    return FormulaValue(n, value, value.denominator == 1)
