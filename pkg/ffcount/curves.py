"""
Artin-Schreier curves y^q - y = f(x) over F_{q^n}: point counts, L-polynomials, the
closed-form excess of y^q - y = x^(q+1) - x^2, classification, and the table of
normalized Weil numbers among the 4p-th roots of unity.

Point counting uses the q-to-1 fibration: for each x with T1(f(x)) = 0 there are q
values of y, and gcd(deg f, p) = 1 leaves a single point at infinity, so
#C(F_{q^n}) = q * #{x : T1(f(x)) = 0} + 1.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Sequence

import numpy as np
from sympy import Poly as SymPoly
from sympy import legendre_symbol, multiplicity, sqf_list, symbols

from config import ROOT_TOLERANCE
from ffcount.cyclotomic import field_for, sqrt_q
from ffcount.eligibility import require_enumeration
from ffcount.ffield import FieldMismatchError, Poly, RelativeSpec, field, prime_power, resolve_tower
from ffcount.traces import linear_trace, power_by_digits

_T = symbols("T")

QUANTITIES = ("affine", "projective", "N", "excess")
METHODS = ("brute", "closed")


class UnsupportedModelError(ValueError):
    pass


class InconsistentCountsError(ValueError):
    """Counts that no L-polynomial can produce (Hasse-Weil, integrality, functional equation)."""


class DerivationFailure(ArithmeticError):
    pass


def case_tag(q: int, n: int) -> str:
    """gcd(n, 2p) spelled as one of "1", "2", "p", "2p"."""
    p, _ = prime_power(q)
    g = gcd(n, 2 * p)
    return {1: "1", 2: "2", p: "p", 2 * p: "2p"}[g]


@dataclass
class CountReport:
    q: int
    n: int
    quantity: str
    value: int
    method: str
    case_tag: str
    genus: int | None = None

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.quantity != "excess" and self.value < 0:
            raise InconsistentCountsError(f"negative {self.quantity} count {self.value}")
        if self.quantity == "excess" and self.genus is not None:
            # |excess| <= 2g q^(n/2), squared to stay in integers
            if self.value ** 2 > 4 * self.genus ** 2 * self.q ** self.n:
                raise InconsistentCountsError(
                    f"excess {self.value} breaks the Hasse-Weil bound for g={self.genus}, q^n={self.q}^{self.n}"
                )

    def to_dict(self) -> dict:
        out = asdict(self)
        if out["genus"] is None:
            del out["genus"]
        return out


# ---------------------------------------------------------------------------
# Curve models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveModel:
    q: int
    f: Poly
    name: str = "custom"

    def __post_init__(self):
        p, _ = prime_power(self.q)
        if self.f.field.order != self.q:
            raise FieldMismatchError(f"f has coefficients in {self.f.field.label}, expected F_{self.q}")
        if self.f.degree < 1 or gcd(self.f.degree, p) != 1:
            raise UnsupportedModelError(
                f"deg f = {self.f.degree} must be >= 1 and prime to p = {p} (single point at infinity)"
            )

    @property
    def genus(self) -> int:
        return (self.q - 1) * (self.f.degree - 1) // 2

    @classmethod
    def c1(cls, q: int) -> CurveModel:
        """y^q - y = x^(q+1) - x^2"""
        F = field(*prime_power(q))
        return cls(q, Poly.from_terms(F, {q + 1: 1, 2: F.neg(1)}), "c1")

    @classmethod
    def c2(cls, q: int) -> CurveModel:
        """y^q - y = x^(2q+1) - x^(q+2)"""
        F = field(*prime_power(q))
        return cls(q, Poly.from_terms(F, {2 * q + 1: 1, q + 2: F.neg(1)}), "c2")

    @classmethod
    def c3(cls, q: int) -> CurveModel:
        """y^q - y = x^(2q+1) - x^(q+2) + x^(q+1) - x^2"""
        F = field(*prime_power(q))
        m1 = F.neg(1)
        return cls(q, Poly.from_terms(F, {2 * q + 1: 1, q + 2: m1, q + 1: 1, 2: m1}), "c3")

    @classmethod
    def named(cls, name: str, q: int) -> CurveModel:
        builders = {"c1": cls.c1, "c2": cls.c2, "c3": cls.c3}
        if name not in builders:
            raise UnsupportedModelError(f"unknown curve {name!r}; expected one of {sorted(builders)}")
        return builders[name](q)

    def to_dict(self) -> dict:
        return {"q": self.q, "curve": self.name, "f": str(self.f), "genus": self.genus}


def trace_zero_count(f: Poly, spec: RelativeSpec, budget: int | None = None) -> int:
    """#{x in F_{q^n} : T1(f(x)) = 0} for f with coefficients in F_q."""
    require_enumeration(spec.order, budget, f"counting over {spec.label}")
    base = spec.base
    terms = f.terms()
    count = 0
    for raw in spec.raws():
        acc = 0
        for k, c in terms:
            acc = base.add(acc, base.mul(c, linear_trace(spec, power_by_digits(spec, raw, k))))
        if acc == 0:
            count += 1
    return count


def count_points(
    curve: CurveModel,
    n: int,
    method: str = "brute",
    budget: int | None = None,
    spec: RelativeSpec | None = None,
) -> CountReport:
    """Projective #C(F_{q^n}); "closed" is only available for c1."""
    q = curve.q
    if method == "closed":
        if curve.name != "c1":
            raise UnsupportedModelError(f"no closed form for curve {curve.name}")
        value = q ** n + 1 + closed_form_excess(q, n)
    elif method == "brute":
        value = q * trace_zero_count(curve.f, resolve_tower(q, n, spec), budget) + 1
    else:
        raise ValueError(f"unknown method {method!r}")
    # the excess report enforces Hasse-Weil on every count we hand out
    CountReport(q, n, "excess", value - q ** n - 1, method, case_tag(q, n), curve.genus)
    return CountReport(q, n, "projective", value, method, case_tag(q, n), curve.genus)


# ---------------------------------------------------------------------------
# Closed form for y^q - y = x^(q+1) - x^2
# ---------------------------------------------------------------------------

def closed_form_excess(q: int, n: int) -> int:
    """#C(F_{q^n}) - (q^n + 1), by the gcd(n, 2p) case analysis."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p, r = prime_power(q)
    g = gcd(n, 2 * p)
    if g in (2, p):
        return 0
    if g == 2 * p:
        if q % 4 == 1:
            sign = -1
        else:
            # maximal when n/(2p) is odd, minimal when even
            sign = 1 if (n // (2 * p)) % 2 == 1 else -1
        return sign * (q - 1) * q ** (n // 2 + 1)
    if r % 2 == 0:
        s = 1
    else:
        leg = int(legendre_symbol(n % p, p))
        if q % 4 == 1:
            s = leg
        else:
            s = leg if n % 4 == 1 else -leg
    return s * (q - 1) * q ** ((n + 1) // 2)


def published_excess(q: int, n: int) -> int | None:
    """
    The excess exactly as the theorem statement prints it. None where the printed
    exponent (n-1)/2 is not an integer (every gcd(n, 2p) = 2p case).
    """
    p, r = prime_power(q)
    g = gcd(n, 2 * p)
    if g in (2, p):
        return 0
    if g == 2 * p:
        if (n - 1) % 2:
            return None
        return (-1) ** ((n - 1) // 2) * (q - 1) * q ** (n // 2 + 1)
    return int(legendre_symbol(-n % p, p)) ** r * (q - 1) * q ** ((n + 1) // 2)


# ---------------------------------------------------------------------------
# L-polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LPolynomial:
    """c_0 + c_1 T + ... + c_{2g} T^(2g); not validated on construction (printed vectors may be wrong)."""

    q: int
    genus: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != 2 * self.genus + 1:
            raise ValueError(f"an L-polynomial of genus {self.genus} has {2 * self.genus + 1} coefficients")

    def functional_equation_violations(self) -> list[int]:
        g, q, c = self.genus, self.q, self.coeffs
        return [2 * g - i for i in range(g + 1) if c[2 * g - i] != q ** (g - i) * c[i]]

    def violations(self) -> list[str]:
        out = []
        if self.coeffs[0] != 1:
            out.append(f"c_0 = {self.coeffs[0]} != 1")
        if self.coeffs[-1] != self.q ** self.genus:
            out.append(f"c_{2 * self.genus} = {self.coeffs[-1]} != q^g = {self.q ** self.genus}")
        for k in self.functional_equation_violations():
            i = 2 * self.genus - k
            out.append(f"c_{k} = {self.coeffs[k]} != q^{self.genus - i} * c_{i} = {self.q ** (self.genus - i) * self.coeffs[i]}")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def to_dict(self) -> dict:
        return {"q": self.q, "genus": self.genus, "lpoly": list(self.coeffs)}


def _from_factors(q: int, factors: list[tuple[list[int], int]]) -> LPolynomial:
    """Expand a product of ascending integer factors with multiplicities."""
    prod = SymPoly(1, _T)
    for asc, mult in factors:
        prod = prod * SymPoly(list(reversed(asc)), _T) ** mult
    coeffs = [int(c) for c in reversed(prod.all_coeffs())]
    return LPolynomial(q, (len(coeffs) - 1) // 2, tuple(coeffs))


# q = 3 golden values: (3x^2+1)(3x^2+3x+1)^2, (27x^6+...+3x+1)^2, and the printed L3
L1_Q3 = _from_factors(3, [([1, 0, 3], 1), ([1, 3, 3], 2)])
L2_Q3 = _from_factors(3, [([1, 3, 9, 15, 27, 27, 27], 2)])
L2_Q3_FACTOR = (1, 3, 9, 15, 27, 27, 27)
L3_Q3_PRINTED = LPolynomial(3, 6, (1, 6, 18, 39, 63, 81, 117, 243, 576, 1053, 1458, 1458, 729))


def newton_power_sums(coeffs: Sequence, count: int) -> list:
    """
    Power sums S_1..S_count of the eta_i in c_0 + c_1 T + ... = prod (1 - eta_i T), c_0 = 1.
    Works over int or Fraction coefficients.
    """
    if not coeffs or coeffs[0] != 1:
        raise ValueError("power sums need a constant coefficient of 1")

    def c(i):
        return coeffs[i] if i < len(coeffs) else 0

    sums = []
    for k in range(1, count + 1):
        s = -k * c(k)
        for j in range(1, k):
            s -= sums[j - 1] * c(k - j)
        sums.append(s)
    return sums


def root_power_sums(ascending: Sequence[int], count: int) -> list[Fraction]:
    """Power sums of the roots of a0 + a1 x + ... + ad x^d (any nonzero leading term)."""
    rev = [Fraction(c) for c in reversed(ascending)]
    lead = rev[0]
    return newton_power_sums([c / lead for c in rev], count)


def lpoly_from_counts(q: int, g: int, counts: Sequence[int]) -> LPolynomial:
    """Projective counts over F_{q^1}..F_{q^g} (extra counts are checked) -> L-polynomial."""
    if len(counts) < g:
        raise InconsistentCountsError(f"genus {g} needs {g} counts, got {len(counts)}")
    for n, count in enumerate(counts, start=1):
        excess = count - (q ** n + 1)
        if excess ** 2 > 4 * g * g * q ** n:
            raise InconsistentCountsError(f"#C(F_{q}^{n}) = {count} breaks the Hasse-Weil bound")
    sums = [q ** n + 1 - counts[n - 1] for n in range(1, g + 1)]
    c = [1]
    for k in range(1, g + 1):
        total = sum(sums[j - 1] * c[k - j] for j in range(1, k + 1))
        if total % k:
            raise InconsistentCountsError(f"Newton step {k} is not integral ({total}/{k})")
        c.append(-total // k)
    for i in range(g + 1, 2 * g + 1):
        c.append(q ** (i - g) * c[2 * g - i])
    L = LPolynomial(q, g, tuple(c))
    for n in range(g + 1, len(counts) + 1):
        if counts_from_lpoly(L, n) != counts[n - 1]:
            raise InconsistentCountsError(f"count over F_{q}^{n} disagrees with the functional equation")
    return L


def counts_from_lpoly(L: LPolynomial, n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    s_n = newton_power_sums(L.coeffs, n)[-1]
    return L.q ** n + 1 - s_n


def curve_lpoly(curve: CurveModel, method: str = "brute", budget: int | None = None) -> LPolynomial:
    """brute: counts over F_{q^1..q^g}; closed / corollary: c1 only."""
    g = curve.genus
    if method == "brute":
        counts = [count_points(curve, n, "brute", budget).value for n in range(1, g + 1)]
        return lpoly_from_counts(curve.q, g, counts)
    if curve.name != "c1":
        raise UnsupportedModelError(f"no {method} L-polynomial for curve {curve.name}")
    if method == "closed":
        return closed_lpoly(curve.q)
    if method == "corollary":
        return corollary_table(curve.q).lpoly
    raise ValueError(f"unknown method {method!r}")


@lru_cache(maxsize=None)
def closed_lpoly(q: int) -> LPolynomial:
    g = q * (q - 1) // 2
    counts = [q ** n + 1 + closed_form_excess(q, n) for n in range(1, g + 1)]
    return lpoly_from_counts(q, g, counts)


def classify(L: LPolynomial) -> str:
    """maximal > minimal > supersingular > not-supersingular."""
    p, r = prime_power(L.q)
    g = L.genus
    if r % 2 == 0 and g > 0:
        s = p ** (r // 2)
        if all(L.coeffs[i] == comb(2 * g, i) * s ** i for i in range(2 * g + 1)):
            return "maximal"
        if all(L.coeffs[i] == comb(2 * g, i) * (-s) ** i for i in range(2 * g + 1)):
            return "minimal"
    for i in range(1, 2 * g + 1):
        c = L.coeffs[i]
        if c and 2 * multiplicity(p, abs(c)) < i * r:
            return "not-supersingular"
    return "supersingular"


@dataclass
class WeilReport:
    q: int
    genus: int
    endpoints: bool
    functional_equation: bool
    max_deviation: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def weil_check(L: LPolynomial) -> WeilReport:
    """Exact functional equation, then |eta| = sqrt(q) numerically on each square-free factor."""
    g, q = L.genus, L.q
    endpoints = L.coeffs[0] == 1 and L.coeffs[-1] == q ** g
    functional = not L.functional_equation_violations()
    deviation = 0.0
    if g > 0:
        # read highest-first, c_0..c_{2g} is the reciprocal polynomial whose roots are the eta_i
        _, factors = sqf_list(SymPoly(list(L.coeffs), _T))
        for factor, _mult in factors:
            a = [int(c) for c in factor.all_coeffs()]
            scaled = [c / q ** (k / 2) for k, c in enumerate(a)]
            for u in np.roots(scaled):
                deviation = max(deviation, abs(abs(u) - 1.0))
    passed = bool(endpoints and functional and deviation <= ROOT_TOLERANCE)
    return WeilReport(q, g, bool(endpoints), bool(functional), float(deviation), passed)


# ---------------------------------------------------------------------------
# Normalized Weil numbers among the 4p-th roots of unity
# ---------------------------------------------------------------------------

def root_descriptor(j: int, p: int) -> str:
    """zeta_{4p}^j written as +/- i^a w^k with i = zeta^p, w = zeta^4."""
    u = j * pow(p, -1, 4) % 4
    k = j * pow(4, -1, p) % p
    sign = "-" if u >= 2 else "+"
    parts = (["i"] if u % 2 else []) + ([("w" if k == 1 else f"w^{k}")] if k else [])
    return sign + ("*".join(parts) or "1")


@dataclass(frozen=True)
class RootMultiplicityTable:
    q: int
    p: int
    multiplicities: tuple[int, ...]   # indexed by j for zeta_{4p}^j
    lpoly: LPolynomial

    def entries(self) -> list[tuple[str, int]]:
        """Entries of every quarter-turn class that carries a root, in exponent order."""
        live = {self._quarter(j) for j, m in enumerate(self.multiplicities) if m}
        return [
            (root_descriptor(j, self.p), m)
            for j, m in enumerate(self.multiplicities)
            if self._quarter(j) in live
        ]

    def _quarter(self, j: int) -> int:
        return (j * pow(self.p, -1, 4) % 4) % 2

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "p": self.p,
            "entries": dict(self.entries()),
            "total": sum(self.multiplicities),
        }


@lru_cache(maxsize=None)
def corollary_table(q: int) -> RootMultiplicityTable:
    """
    Multiplicities by inverse DFT over the 4p-th roots of unity of the normalized power sums
    S_n / q^(n/2), then an exact rebuild of the L-polynomial in Q(zeta_{4p}) that must match
    the one from closed_form_excess.
    """
    p, _ = prime_power(q)
    g = q * (q - 1) // 2
    size = 4 * p
    normalized = [2 * g] + [-closed_form_excess(q, k) / q ** (k / 2) for k in range(1, size)]
    spectrum = np.fft.fft(np.array(normalized, dtype=complex)) / size
    mults = []
    for j, m in enumerate(spectrum):
        rounded = round(m.real)
        if abs(m - rounded) > ROOT_TOLERANCE or rounded < 0:
            raise DerivationFailure(f"multiplicity of zeta^{j} for q={q} is {m}, not a non-negative integer")
        mults.append(int(rounded))
    if sum(mults) != 2 * g:
        raise DerivationFailure(f"multiplicities for q={q} sum to {sum(mults)}, expected {2 * g}")
    rebuilt = _rebuild_lpoly(q, p, mults)
    if rebuilt != closed_lpoly(q):
        raise DerivationFailure(f"root table for q={q} does not rebuild the closed-form L-polynomial")
    return RootMultiplicityTable(q, p, tuple(mults), rebuilt)


def _rebuild_lpoly(q: int, p: int, mults: list[int]) -> LPolynomial:
    K = field_for(p)
    root = sqrt_q(q)
    g = q * (q - 1) // 2
    size = 4 * p
    sums = []
    root_power = K.const(1)
    for n in range(1, 2 * g + 1):
        root_power = K.mul(root_power, root)
        exponents = [0] * size
        for j, m in enumerate(mults):
            if m:
                exponents[j * n % size] += m
        unit_sum = K.from_exponents({e: m for e, m in enumerate(exponents) if m})
        value = K.mul(unit_sum, root_power)
        if not K.is_rational(value) or K.rational(value).denominator != 1:
            raise DerivationFailure(f"power sum {n} for q={q} is not a rational integer")
        sums.append(int(K.rational(value)))
    c = [1]
    for k in range(1, 2 * g + 1):
        total = sum(sums[j - 1] * c[k - j] for j in range(1, k + 1))
        if total % k:
            raise DerivationFailure(f"Newton step {k} for q={q} is not integral")
        c.append(-total // k)
    return LPolynomial(q, g, tuple(c))


def published_corollary_table(q: int) -> dict[str, float]:
    """Multiplicities from the printed case formulas (floats; may be negative or fractional)."""
    p, r = prime_power(q)
    half = (q - 1) / 2
    base = q / p
    root_q = q ** 0.5
    table: dict[str, float] = {}
    if r % 2 == 0:
        table[root_descriptor(0, p)] = (base - root_q * p / (p - 1)) * half
        table[root_descriptor(2 * p, p)] = (base + root_q * p / (p - 1)) * half
        for k in range(1, p):
            table[root_descriptor(4 * k % (4 * p), p)] = (base + root_q / p) * half
            table[root_descriptor((4 * k + 2 * p) % (4 * p), p)] = (base - root_q / p) * half
        return table
    ratio = (q / p) ** 0.5
    if q % 4 == 1:
        table[root_descriptor(0, p)] = base * half
        table[root_descriptor(2 * p, p)] = base * half
        for k in range(1, p):
            leg = int(legendre_symbol(k, p))
            table[root_descriptor(4 * k % (4 * p), p)] = (base - leg * ratio) * half
            table[root_descriptor((4 * k + 2 * p) % (4 * p), p)] = (base + leg * ratio) * half
        return table
    table[root_descriptor(p, p)] = base * half
    table[root_descriptor(3 * p, p)] = base * half
    for k in range(1, p):
        leg = int(legendre_symbol(k, p))
        table[root_descriptor((p + 4 * k) % (4 * p), p)] = (base + leg * ratio) * half
        table[root_descriptor((3 * p + 4 * k) % (4 * p), p)] = (base - leg * ratio) * half
    return table
