"""
The quadratic form Q(x) = T1(x^(q+1) - x^2) on F_{q^n}, seen as an n-dimensional space
over F_q: polarization, radical, rank, discriminant and the number of x with Q(x) = c.

Q vanishes on its radical W, so every count is q^w times the count of the
nondegenerate form induced on F_{q^n}/W, whose rank is m = n - w.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from config import VERIFY_BUDGET
from ffcount.curves import CountReport, case_tag, closed_form_excess
from ffcount.eligibility import require_enumeration
from ffcount.ffield import FieldElement, FieldSpec, RelativeSpec, prime_power, resolve_tower
from ffcount.traces import TraceFault, linear_frobenius, linear_trace, power_by_digits, trace1


# ---------------------------------------------------------------------------
# The form
# ---------------------------------------------------------------------------

def quadratic_form(x: FieldElement) -> FieldElement:
    q = x.spec.q
    return trace1(x ** (q + 1) - x * x)


def qform_raw(spec: RelativeSpec, raw: tuple[int, ...]) -> int:
    """Q on a raw element through the linear trace and Frobenius; used by the enumerations."""
    value = spec.sub(power_by_digits(spec, raw, spec.q + 1), spec.mul(raw, raw))
    return linear_trace(spec, value)


def polarization(x: FieldElement, y: FieldElement) -> FieldElement:
    """B(x, y) = Q(x+y) - Q(x) - Q(y), checked against T1(y^q (x^(q^2) - 2x^q + x))."""
    q = x.spec.q
    direct = quadratic_form(x + y) - quadratic_form(x) - quadratic_form(y)
    rewritten = trace1(y ** q * (x ** (q * q) - 2 * x ** q + x))
    if direct != rewritten:
        raise TraceFault(f"B({x!r}, {y!r}): {direct!r} != {rewritten!r}")
    return direct


def _radical_map(spec: RelativeSpec, raw: tuple[int, ...]) -> tuple[int, ...]:
    f1 = linear_frobenius(spec, raw)
    f2 = linear_frobenius(spec, f1)
    return spec.add(spec.sub(f2, spec.add(f1, f1)), raw)


def radical_dim(q: int, n: int, budget: int | None = None, spec: RelativeSpec | None = None) -> int:
    """
    w = 1 if gcd(n, p) = 1 else 2. When q^n fits the budget (default VERIFY_BUDGET) the
    kernel of x -> x^(q^2) - 2x^q + x is also enumerated and must have q^w elements.
    """
    p, _ = prime_power(q)
    w = 1 if gcd(n, p) == 1 else 2
    limit = VERIFY_BUDGET if budget is None else budget
    if q ** n <= limit:
        spec = resolve_tower(q, n, spec)
        kernel = sum(1 for raw in spec.raws() if _radical_map(spec, raw) == spec.zero)
        if kernel != q ** w:
            raise TraceFault(f"radical of Q over F_{q}^{n} has {kernel} elements, expected {q ** w}")
    return w


# ---------------------------------------------------------------------------
# Invariants by linear algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FormInvariants:
    rank: int
    w: int
    discriminant: int   # product of the nonzero diagonal entries, an F_q code (1 if rank 0)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "w": self.w, "discriminant": self.discriminant}


def gram_matrix(spec: RelativeSpec) -> list[list[int]]:
    """B on the power basis of F_{q^n} over F_q, as F_q codes."""
    basis = [FieldElement(spec, spec.basis(i)) for i in range(spec.n)]
    return [[polarization(x, y).value for y in basis] for x in basis]


def _diagonal(matrix: list[list[int]], base: FieldSpec) -> list[int]:
    """Congruence diagonalization of a symmetric matrix over F_q (odd characteristic)."""
    a = [row[:] for row in matrix]
    size = len(a)

    def add_multiple(dst: int, src: int, factor: int) -> None:
        # row dst += factor * row src, then the same on columns
        for k in range(size):
            a[dst][k] = base.add(a[dst][k], base.mul(factor, a[src][k]))
        for k in range(size):
            a[k][dst] = base.add(a[k][dst], base.mul(factor, a[k][src]))

    for i in range(size):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, size) if a[j][j] != 0), None)
            if j is not None:
                a[i], a[j] = a[j], a[i]
                for row in a:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, size) if a[i][j] != 0), None)
                if j is None:
                    continue
                add_multiple(i, j, 1)
        pivot_inv = base.inv(a[i][i])
        for j in range(i + 1, size):
            if a[j][i] != 0:
                add_multiple(j, i, base.neg(base.mul(a[j][i], pivot_inv)))
    return [a[i][i] for i in range(size) if a[i][i] != 0]


def form_invariants(spec: RelativeSpec) -> FormInvariants:
    """Rank and discriminant of Q itself (matrix B/2), with no enumeration."""
    base = spec.base
    half = base.inv(2)
    matrix = [[base.mul(half, b) for b in row] for row in gram_matrix(spec)]
    diagonal = _diagonal(matrix, base)
    disc = 1
    for d in diagonal:
        disc = base.mul(disc, d)
    return FormInvariants(len(diagonal), spec.n - len(diagonal), disc)


def _eta(base: FieldSpec, a: int) -> int:
    if a == 0:
        return 0
    return 1 if base.is_square(a) else -1


def _sign_power(base: FieldSpec, k: int) -> int:
    return 1 if k % 2 == 0 else base.neg(1)


def invariant_value_count(inv: FormInvariants, base: FieldSpec, c: int) -> int:
    """#{x : Q(x) = c} from rank and discriminant."""
    q = base.order
    m = inv.rank
    if m == 0:
        core = 1 if c == 0 else 0
    elif m % 2 == 0:
        v = q - 1 if c == 0 else -1
        sign = _eta(base, base.mul(_sign_power(base, m // 2), inv.discriminant))
        core = q ** (m - 1) + v * q ** ((m - 2) // 2) * sign
    elif c == 0:
        core = q ** (m - 1)
    else:
        cls = base.mul(base.mul(_sign_power(base, (m - 1) // 2), c), inv.discriminant)
        core = q ** (m - 1) + q ** ((m - 1) // 2) * _eta(base, cls)
    return q ** inv.w * core


# ---------------------------------------------------------------------------
# Counts
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _value_distribution(spec: RelativeSpec) -> Counter:
    return Counter(qform_raw(spec, raw) for raw in spec.raws())


def value_distribution(spec: RelativeSpec, budget: int | None = None) -> Counter:
    """c -> #{x : Q(x) = c} by enumeration; the counts partition F_{q^n}."""
    require_enumeration(spec.order, budget, f"quadratic form over {spec.label}")
    dist = _value_distribution(spec)
    if sum(dist.values()) != spec.order:
        raise TraceFault(f"value counts over {spec.label} do not add up to {spec.order}")
    return dist


def qf_zero_count(
    q: int,
    n: int,
    method: str = "brute",
    budget: int | None = None,
    spec: RelativeSpec | None = None,
) -> CountReport:
    if method == "brute":
        value = value_distribution(resolve_tower(q, n, spec), budget)[0]
    elif method == "closed":
        excess = closed_form_excess(q, n)
        if excess % q:
            raise TraceFault(f"excess {excess} is not divisible by q = {q}")
        value = q ** (n - 1) + excess // q
    else:
        raise ValueError(f"unknown method {method!r}")
    return CountReport(q, n, "N", value, method, case_tag(q, n))


def qf_value_count(
    q: int,
    n: int,
    c: int,
    method: str = "brute",
    budget: int | None = None,
    spec: RelativeSpec | None = None,
) -> int:
    """
    #{x : Q(x) = c}. The closed path for c != 0 uses N(0) alone when the rank is even and
    the discriminant character when it is odd.
    """
    if not 0 <= c < q:
        raise ValueError(f"c = {c} is not an element code of F_{q}")
    if method == "brute":
        return value_distribution(resolve_tower(q, n, spec), budget)[c]
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    zero = qf_zero_count(q, n, "closed").value
    if c == 0:
        return zero
    w = radical_dim(q, n, budget=0)
    if (n - w) % 2 == 0:
        if (q ** n - zero) % (q - 1):
            raise TraceFault(f"nonzero values over F_{q}^{n} do not split evenly")
        return (q ** n - zero) // (q - 1)
    spec = resolve_tower(q, n, spec)
    return invariant_value_count(form_invariants(spec), spec.base, c)


@dataclass(frozen=True)
class QuadraticFormProfile:
    q: int
    n: int
    w: int
    rank: int
    zero_count: int
    case_tag: str

    def __post_init__(self):
        if self.rank + self.w != self.n:
            raise TraceFault(f"rank {self.rank} + w {self.w} != n {self.n}")
        base = self.q ** (self.n - 1)
        if self.rank % 2:
            allowed = {base}
        else:
            spread = (self.q - 1) * self.q ** ((self.n - 2 + self.w) // 2)
            allowed = {base + spread, base - spread}
        if self.zero_count not in allowed:
            raise TraceFault(f"N = {self.zero_count} is not one of {sorted(allowed)} for rank {self.rank}")

    def to_dict(self) -> dict:
        return {"q": self.q, "n": self.n, "w": self.w, "rank": self.rank, "N": self.zero_count, "case": self.case_tag}


def profile(
    q: int,
    n: int,
    method: str = "closed",
    budget: int | None = None,
    spec: RelativeSpec | None = None,
) -> QuadraticFormProfile:
    w = radical_dim(q, n, budget=budget if method == "brute" else 0, spec=spec)
    zero = qf_zero_count(q, n, method, budget, spec).value
    return QuadraticFormProfile(q, n, w, n - w, zero, case_tag(q, n))
