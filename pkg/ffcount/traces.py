"""
Relative trace T1, subtrace T2, characteristic and minimal polynomials of elements of
F_{q^n} over F_q.

For a in F_{q^n} with conjugates a, a^q, ..., a^(q^(n-1)):
  T1(a) = sum of the conjugates
  T2(a) = sum over i < j of a^(q^i + q^j)
so the characteristic polynomial is x^n - T1(a) x^(n-1) + T2(a) x^(n-2) - ...
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ffcount.eligibility import require_enumeration
from ffcount.ffield import FieldElement, Poly, RelativeSpec


class TraceFault(ArithmeticError):
    """A symmetric function of conjugates fell outside F_q, or two computations disagreed."""


@dataclass(frozen=True)
class TracePair:
    t1: FieldElement
    t2: FieldElement

    @property
    def codes(self) -> tuple[int, int]:
        return self.t1.value, self.t2.value


def _relative(a: FieldElement) -> RelativeSpec:
    if not isinstance(a.spec, RelativeSpec):
        raise ValueError(f"traces need an element of a relative extension, got {a!r}")
    return a.spec


def _down(x: FieldElement, what: str) -> FieldElement:
    if not x.in_base():
        raise TraceFault(f"{what} = {x!r} does not lie in F_q")
    return x.to_base()


def conjugates(a: FieldElement) -> list[FieldElement]:
    spec = _relative(a)
    out = [a]
    for _ in range(spec.n - 1):
        out.append(out[-1] ** spec.q)
    return out


def _trace2_of(conj: list[FieldElement]) -> FieldElement:
    # both the double sum and 2*T2 = T1^2 - T1(a^2); they must agree
    double = conj[0] * 0
    for i in range(len(conj)):
        for j in range(i + 1, len(conj)):
            double = double + conj[i] * conj[j]
    t1 = sum(conj)
    halved = (t1 * t1 - sum(c * c for c in conj)) / 2
    if double != halved:
        raise TraceFault(f"T2 double sum {double!r} != halved identity {halved!r}")
    return _down(double, "T2")


def trace1(a: FieldElement) -> FieldElement:
    return _down(sum(conjugates(a)), "T1")


def trace2(a: FieldElement) -> FieldElement:
    return _trace2_of(conjugates(a))


def trace_pair(a: FieldElement) -> TracePair:
    """(T1, T2) without conjugates: T1 is linear, and 2*T2 = T1(a)^2 - T1(a^2)."""
    spec = _relative(a)
    base = spec.base
    t1 = linear_trace(spec, a.value)
    s2 = linear_trace(spec, spec.mul(a.value, a.value))
    t2 = base.mul(base.sub(base.mul(t1, t1), s2), base.inv(2))
    return TracePair(FieldElement(base, t1), FieldElement(base, t2))


def trace_table(spec: RelativeSpec, budget: int | None = None) -> dict[tuple, TracePair]:
    """raw element -> TracePair for every element of F_{q^n}."""
    require_enumeration(spec.order, budget, f"trace table of {spec.label}")
    return {raw: trace_pair(FieldElement(spec, raw)) for raw in spec.raws()}


def _product_of_linears(spec: RelativeSpec, roots: list[FieldElement]) -> Poly:
    prod = Poly.constant(spec, spec.one)
    for c in roots:
        prod = prod * Poly(spec, (spec.neg(c.value), spec.one))
    coeffs = []
    for k, c in enumerate(prod.coeffs):
        if not spec.is_base(c):
            raise TraceFault(f"coefficient of x^{k} is {c}, outside F_q")
        coeffs.append(c[0])
    return Poly(spec.base, tuple(coeffs))


def char_poly(a: FieldElement) -> Poly:
    """prod_i (x - a^(q^i)) over F_q, cross-checked against T1 and T2."""
    spec = _relative(a)
    conj = conjugates(a)
    f = _product_of_linears(spec, conj)
    base = spec.base
    n = spec.n
    t1 = _down(sum(conj), "T1")
    if f.coefficient(n - 1) != base.neg(t1.value):
        raise TraceFault(f"x^{n - 1} coefficient of {f} is not -T1 = -{t1.value}")
    if n >= 2:
        t2 = _trace2_of(conj)
        if f.coefficient(n - 2) != t2.value:
            raise TraceFault(f"x^{n - 2} coefficient of {f} is not T2 = {t2.value}")
    return f


def min_poly(a: FieldElement) -> Poly:
    """Product over the distinct conjugates; its degree is the orbit length, a divisor of n."""
    spec = _relative(a)
    conj = conjugates(a)
    d = next((k for k in range(1, spec.n) if conj[k] == a), spec.n)
    return _product_of_linears(spec, conj[:d])


# ---------------------------------------------------------------------------
# Identities (the property suites evaluate these over whole fields or samples)
# ---------------------------------------------------------------------------

def additivity_holds(alpha: FieldElement, beta: FieldElement) -> bool:
    """T2(a+b) = T2(a) + T2(b) + T1(a)T1(b) - T1(ab)."""
    lhs = trace2(alpha + beta)
    rhs = trace2(alpha) + trace2(beta) + trace1(alpha) * trace1(beta) - trace1(alpha * beta)
    return lhs == rhs


def artin_schreier_holds(c: FieldElement) -> bool:
    """T2(c^q - c) = T1(c^(q+1) - c^2)."""
    q = _relative(c).q
    return trace2(c ** q - c) == trace1(c ** (q + 1) - c * c)


def newton_identity_holds(c: FieldElement) -> bool:
    """2 T2(c) = T1(c)^2 - T1(c^2)."""
    return 2 * trace2(c) == trace1(c) ** 2 - trace1(c * c)


# ---------------------------------------------------------------------------
# F_q-linear fast paths for the brute-force oracles
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def trace_functional(spec: RelativeSpec) -> tuple[int, ...]:
    """T1 on the power basis; T1 is F_q-linear so this determines it."""
    return tuple(trace1(FieldElement(spec, spec.basis(i))).value for i in range(spec.n))


@lru_cache(maxsize=None)
def frobenius_images(spec: RelativeSpec) -> tuple[tuple[int, ...], ...]:
    """x -> x^q on the power basis."""
    return tuple(spec.pow(spec.basis(i), spec.q) for i in range(spec.n))


def linear_trace(spec: RelativeSpec, raw: tuple[int, ...]) -> int:
    base = spec.base
    acc = 0
    for x, t in zip(raw, trace_functional(spec)):
        if x and t:
            acc = base.add(acc, base.mul(x, t))
    return acc


def linear_frobenius(spec: RelativeSpec, raw: tuple[int, ...]) -> tuple[int, ...]:
    base = spec.base
    out = [0] * spec.n
    for x, image in zip(raw, frobenius_images(spec)):
        if x:
            for k, c in enumerate(image):
                if c:
                    out[k] = base.add(out[k], base.mul(x, c))
    return tuple(out)


def power_by_digits(spec: RelativeSpec, raw: tuple[int, ...], k: int) -> tuple[int, ...]:
    """raw^k as the product of (raw^(q^i))^(d_i) over the base-q digits d_i of k."""
    q = spec.q
    result, cur = spec.one, raw
    while k:
        k, d = divmod(k, q)
        if d:
            result = spec.mul(result, spec.pow(cur, d))
        if k:
            cur = linear_frobenius(spec, cur)
    return result
