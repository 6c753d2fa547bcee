"""
Exact arithmetic in F_p, F_q = F_{p^r} and F_{q^n}, the two-level tower every count runs on.

  FieldSpec     F_q = F_p[x]/(modulus). Elements are carried as their canonical base-p
                code 0..q-1 (constant term is the lowest digit), so an F_p constant k
                has code k.
  RelativeSpec  F_{q^n} = F_q[y]/(rel_modulus). Elements are tuples of n F_q codes,
                constant term first.
  Poly          dense polynomial over either level, little-endian.

Moduli are chosen deterministically (smallest irreducible in base-q counting order), so
every count is reproducible bit-for-bit.
"""

from __future__ import annotations

import itertools
import json
import operator
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, NamedTuple

from sympy import factorint, isprime

from config import TABLE_LIMIT
from ffcount.eligibility import require_enumeration


class InvalidFieldError(ValueError):
    """Not an odd prime / prime power, or a modulus that is not monic irreducible."""


class InvalidDegreeError(ValueError):
    pass


class FieldMismatchError(ValueError):
    pass


class NotMonicError(ValueError):
    pass


class _Tables(NamedTuple):
    add: list[list[int]]
    mul: list[list[int]]
    neg: list[int]
    inv: list[int]


# ---------------------------------------------------------------------------
# F_q = F_{p^r}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """F_{p^r}; `modulus` is little-endian over F_p, monic of degree r."""

    p: int
    r: int = 1
    modulus: tuple[int, ...] = (0, 1)

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 3 or not isprime(self.p):
            raise InvalidFieldError(f"p must be an odd prime, got {self.p}")
        if self.r < 1:
            raise InvalidDegreeError(f"extension degree must be >= 1, got {self.r}")
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.r + 1 or mod[-1] != 1:
            raise InvalidFieldError(f"modulus {list(mod)} is not monic of degree {self.r}")
        if self.r > 1 and not is_irreducible(Poly(prime_field(self.p), mod)):
            raise InvalidFieldError(f"modulus {list(mod)} is reducible over F_{self.p}")

    # -- shape -------------------------------------------------------------

    @cached_property
    def order(self) -> int:
        return self.p ** self.r

    @property
    def degree(self) -> int:
        return self.r

    @property
    def base_order(self) -> int:
        return self.p

    @property
    def label(self) -> str:
        return f"F_{self.order}"

    zero = 0
    one = 1

    def digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.r):
            a, d = divmod(a, self.p)
            out.append(d)
        return tuple(out)

    def from_digits(self, digits) -> int:
        code = 0
        for d in reversed(list(digits)):
            code = code * self.p + int(d) % self.p
        return code

    def index(self, a: int) -> int:
        return a

    def from_index(self, k: int) -> int:
        if not 0 <= k < self.order:
            raise ValueError(f"index {k} outside {self.label}")
        return k

    def raws(self) -> Iterator[int]:
        return iter(range(self.order))

    def scalar(self, k: int) -> int:
        return k % self.p

    def element(self, raw: int) -> FieldElement:
        return FieldElement(self, raw)

    # -- arithmetic on codes ---------------------------------------------------

    @cached_property
    def _tables(self) -> _Tables | None:
        if self.r == 1 or self.order > TABLE_LIMIT:
            return None
        q = self.order
        neg = [self._neg_direct(a) for a in range(q)]
        add = [[self._add_direct(a, b) for b in range(q)] for a in range(q)]
        mul = [[self._mul_direct(a, b) for b in range(q)] for a in range(q)]
        inv = [0] + [self._inv_direct(a) for a in range(1, q)]
        return _Tables(add, mul, neg, inv)

    def _add_direct(self, a: int, b: int) -> int:
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def _neg_direct(self, a: int) -> int:
        return self.from_digits(-d for d in self.digits(a))

    def _mul_direct(self, a: int, b: int) -> int:
        p, r, mod = self.p, self.r, self.modulus
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * r - 2, r - 1, -1):
            c = prod[k]
            if c:
                for t in range(r):
                    prod[k - r + t] = (prod[k - r + t] - c * mod[t]) % p
        return self.from_digits(prod[:r])

    def _inv_direct(self, a: int) -> int:
        fp = prime_field(self.p)
        s = inverse_mod(Poly(fp, self.digits(a)), Poly(fp, self.modulus))
        return self.from_digits(s.coeffs)

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        t = self._tables
        return t.add[a][b] if t else self._add_direct(a, b)

    def neg(self, a: int) -> int:
        if self.r == 1:
            return -a % self.p
        t = self._tables
        return t.neg[a] if t else self._neg_direct(a)

    def sub(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        t = self._tables
        return t.mul[a][b] if t else self._mul_direct(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self.label}")
        if self.r == 1:
            return pow(a, -1, self.p)
        t = self._tables
        return t.inv[a] if t else self._inv_direct(a)

    def pow(self, a: int, e: int) -> int:
        return _square_and_multiply(self, a, e)

    def is_square(self, a: int) -> bool:
        """Quadratic character on F_q: a^((q-1)/2) == 1 (zero counts as a square)."""
        return a == 0 or self.pow(a, (self.order - 1) // 2) == 1

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}


# ---------------------------------------------------------------------------
# F_{q^n} over F_q
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelativeSpec:
    """F_{q^n} = F_q[y]/(rel_modulus); coefficients are F_q codes, little-endian."""

    base: FieldSpec
    n: int
    rel_modulus: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidDegreeError(f"relative degree must be >= 1, got {self.n}")
        mod = tuple(int(c) for c in self.rel_modulus)
        object.__setattr__(self, "rel_modulus", mod)
        if any(not 0 <= c < self.base.order for c in mod):
            raise InvalidFieldError(f"relative modulus {list(mod)} has coefficients outside {self.base.label}")
        if len(mod) != self.n + 1 or mod[-1] != 1:
            raise InvalidFieldError(f"relative modulus {list(mod)} is not monic of degree {self.n}")
        if self.n > 1 and not is_irreducible(Poly(self.base, mod)):
            raise InvalidFieldError(f"relative modulus {list(mod)} is reducible over {self.base.label}")

    @property
    def q(self) -> int:
        return self.base.order

    @cached_property
    def order(self) -> int:
        return self.base.order ** self.n

    @property
    def degree(self) -> int:
        return self.n

    @property
    def base_order(self) -> int:
        return self.base.order

    @property
    def label(self) -> str:
        return f"F_{self.q}^{self.n}"

    @cached_property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.n

    @cached_property
    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.n - 1)

    def basis(self, i: int) -> tuple[int, ...]:
        return tuple(1 if k == i else 0 for k in range(self.n))

    def embed(self, c: int) -> tuple[int, ...]:
        return (c,) + (0,) * (self.n - 1)

    def scalar(self, k: int) -> tuple[int, ...]:
        return self.embed(k % self.base.p)

    def is_base(self, a: tuple[int, ...]) -> bool:
        return not any(a[1:])

    def index(self, a: tuple[int, ...]) -> int:
        k = 0
        for c in reversed(a):
            k = k * self.q + c
        return k

    def from_index(self, k: int) -> tuple[int, ...]:
        if not 0 <= k < self.order:
            raise ValueError(f"index {k} outside {self.label}")
        out = []
        for _ in range(self.n):
            k, c = divmod(k, self.q)
            out.append(c)
        return tuple(out)

    def raws(self) -> Iterator[tuple[int, ...]]:
        # constant term varies fastest: the base-q counting order
        for digits in itertools.product(range(self.q), repeat=self.n):
            yield digits[::-1]

    def element(self, raw: tuple[int, ...]) -> FieldElement:
        return FieldElement(self, tuple(raw))

    def add(self, a, b):
        return tuple(map(self.base.add, a, b))

    def sub(self, a, b):
        return tuple(map(self.base.sub, a, b))

    def neg(self, a):
        return tuple(map(self.base.neg, a))

    def mul(self, a, b):
        base = self.base
        add, mul, sub = base.add, base.mul, base.sub
        n = self.n
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] = add(prod[i + j], mul(x, y))
        mod = self.rel_modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                for t in range(n):
                    if mod[t]:
                        prod[k - n + t] = sub(prod[k - n + t], mul(c, mod[t]))
        return tuple(prod[:n])

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError(f"inverse of zero in {self.label}")
        s = inverse_mod(Poly(self.base, a), Poly(self.base, self.rel_modulus))
        return s.coeffs + (0,) * (self.n - len(s.coeffs))

    def pow(self, a, e: int):
        return _square_and_multiply(self, a, e)

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "n": self.n, "relModulus": list(self.rel_modulus)}


def _square_and_multiply(spec, a, e: int):
    if e < 0:
        a, e = spec.inv(a), -e
    result = spec.one
    while e:
        if e & 1:
            result = spec.mul(result, a)
        e >>= 1
        if e:
            a = spec.mul(a, a)
    return result


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec | RelativeSpec
    value: int | tuple[int, ...]

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldMismatchError(f"{self.spec.label} vs {other.spec.label}")
            return other.value
        if isinstance(other, int):
            return self.spec.scalar(other)
        return None

    def _wrap(self, raw) -> FieldElement:
        return FieldElement(self.spec, raw)

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self._wrap(self.spec.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self._wrap(self.spec.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self._wrap(self.spec.sub(v, self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self._wrap(self.spec.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is None else self._wrap(self.spec.mul(self.value, self.spec.inv(v)))

    def __neg__(self):
        return self._wrap(self.spec.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.spec.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return self._wrap(self.spec.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == self.spec.zero

    @property
    def index(self) -> int:
        return self.spec.index(self.value)

    @property
    def coeffs(self) -> tuple:
        if isinstance(self.spec, FieldSpec):
            return self.spec.digits(self.value)
        return tuple(FieldElement(self.spec.base, c) for c in self.value)

    def in_base(self) -> bool:
        return isinstance(self.spec, FieldSpec) or self.spec.is_base(self.value)

    def to_base(self) -> FieldElement:
        if isinstance(self.spec, FieldSpec):
            return self
        if not self.spec.is_base(self.value):
            raise ValueError(f"{self!r} does not lie in {self.spec.base.label}")
        return FieldElement(self.spec.base, self.value[0])

    def __repr__(self):
        return f"<{self.spec.label} {self.value}>"


def arith(op: str, a: FieldElement, b: FieldElement | int | None = None) -> FieldElement:
    """add / sub / mul / pow, or inv (b unused)."""
    if op == "inv":
        return a.inverse()
    ops = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "pow": operator.pow}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    if op == "pow" and not isinstance(b, int):
        raise ValueError("pow needs an integer exponent")
    return ops[op](a, b)


def frobenius(a: FieldElement, k: int) -> FieldElement:
    """a^(q^k) by k applications of x -> x^q."""
    if k < 0:
        raise ValueError(f"frobenius power must be >= 0, got {k}")
    q = a.spec.base_order
    for _ in range(k):
        a = a ** q
    return a


def enumerate_field(spec: FieldSpec | RelativeSpec, budget: int | None = None) -> Iterator[FieldElement]:
    """Every element exactly once, in base-q counting order."""
    require_enumeration(spec.order, budget, f"enumerating {spec.label}")
    return (FieldElement(spec, raw) for raw in spec.raws())


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Dense polynomial over a FieldSpec or RelativeSpec; raw coefficients, little-endian."""

    field: FieldSpec | RelativeSpec
    coeffs: tuple = ()

    def __post_init__(self):
        coeffs = [c.value if isinstance(c, FieldElement) else c for c in self.coeffs]
        if isinstance(self.field, FieldSpec) and self.field.r == 1:
            coeffs = [c % self.field.p for c in coeffs]
        zero = self.field.zero
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def x(cls, field) -> Poly:
        return cls(field, (field.zero, field.one))

    @classmethod
    def constant(cls, field, c) -> Poly:
        return cls(field, (c,))

    @classmethod
    def from_terms(cls, field, terms: dict[int, object]) -> Poly:
        """Sparse constructor, e.g. {q + 1: 1, 2: p - 1} for x^(q+1) - x^2."""
        if not terms:
            return cls(field, ())
        coeffs = [field.zero] * (max(terms) + 1)
        for k, c in terms.items():
            coeffs[k] = c
        return cls(field, tuple(coeffs))

    @property
    def degree(self) -> int:
        """-1 stands in for the zero polynomial's -infinity."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def coefficient(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def terms(self) -> list[tuple[int, object]]:
        zero = self.field.zero
        return [(k, c) for k, c in enumerate(self.coeffs) if c != zero]

    def _check(self, other: Poly) -> None:
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatchError(f"{self.field.label} vs {other.field.label}")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        f = self.field
        size = max(len(self.coeffs), len(other.coeffs))
        return Poly(f, tuple(f.add(self.coefficient(k), other.coefficient(k)) for k in range(size)))

    def __sub__(self, other: Poly) -> Poly:
        self._check(other)
        f = self.field
        size = max(len(self.coeffs), len(other.coeffs))
        return Poly(f, tuple(f.sub(self.coefficient(k), other.coefficient(k)) for k in range(size)))

    def __neg__(self) -> Poly:
        return Poly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __mul__(self, other: Poly) -> Poly:
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly(self.field, ())
        f = self.field
        prod = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == f.zero:
                continue
            for j, b in enumerate(other.coeffs):
                prod[i + j] = f.add(prod[i + j], f.mul(a, b))
        return Poly(f, tuple(prod))

    def __pow__(self, e: int) -> Poly:
        result = Poly.constant(self.field, self.field.one)
        for _ in range(e):
            result = result * self
        return result

    def scale(self, c) -> Poly:
        return Poly(self.field, tuple(self.field.mul(c, a) for a in self.coeffs))

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading))

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(f, ()), self
        quo = [f.zero] * (dq + 1)
        lead_inv = f.inv(other.leading)
        m = other.degree
        for k in range(len(rem) - 1, m - 1, -1):
            c = rem[k]
            if c == f.zero:
                continue
            factor = f.mul(c, lead_inv)
            quo[k - m] = factor
            for t, b in enumerate(other.coeffs):
                rem[k - m + t] = f.sub(rem[k - m + t], f.mul(factor, b))
        return Poly(f, tuple(quo)), Poly(f, tuple(rem[:m]))

    def __mod__(self, other: Poly) -> Poly:
        return self.divmod(other)[1]

    def __floordiv__(self, other: Poly) -> Poly:
        return self.divmod(other)[0]

    def gcd(self, other: Poly) -> Poly:
        """Monic gcd (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def pow_mod(self, e: int, modulus: Poly) -> Poly:
        result = Poly.constant(self.field, self.field.one) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            e >>= 1
            if e:
                base = (base * base) % modulus
        return result

    def evaluate(self, x):
        """Horner at a raw value of the coefficient field."""
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def to_list(self) -> list:
        return [list(c) if isinstance(c, tuple) else c for c in self.coeffs]

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in reversed(self.terms()):
            coef = "" if (c == self.field.one and k) else str(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            parts.append(coef + mono)
        return " + ".join(parts)


def inverse_mod(a: Poly, m: Poly) -> Poly:
    """Extended Euclid: s with a*s = 1 mod m."""
    f = m.field
    r0, r1 = m, a % m
    s0, s1 = Poly(f, ()), Poly.constant(f, f.one)
    while not r1.is_zero():
        quo, rem = r0.divmod(r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
    if r0.degree != 0:
        raise ZeroDivisionError("element is not invertible modulo the field polynomial")
    return s0.scale(f.inv(r0.coeffs[0]))


def is_irreducible(f: Poly) -> bool:
    """gcd(f, x^(q^i) - x) = 1 for all 1 <= i <= deg(f)/2."""
    if f.degree < 1:
        raise InvalidDegreeError(f"irreducibility needs degree >= 1, got {f.degree}")
    if not f.is_monic():
        raise NotMonicError(f"{f} is not monic")
    if f.degree == 1:
        return True
    q = f.field.order
    x = Poly.x(f.field)
    h = x
    for _ in range(f.degree // 2):
        h = h.pow_mod(q, f)
        if (h - x).gcd(f).degree > 0:
            return False
    return True


def find_irreducible(field_or_p: FieldSpec | RelativeSpec | int, d: int, skip: int = 0) -> Poly:
    """
    The monic irreducible of degree d whose (c_0, ..., c_{d-1}) is smallest read as the
    base-q integer c_0 + c_1 q + ...; `skip` selects the (skip+1)-th one instead.
    """
    coefficient_field = prime_field(field_or_p) if isinstance(field_or_p, int) else field_or_p
    if d < 1:
        raise InvalidDegreeError(f"degree must be >= 1, got {d}")
    q = coefficient_field.order
    found = 0
    for k in range(q ** d):
        coeffs = []
        for _ in range(d):
            k, c = divmod(k, q)
            coeffs.append(coefficient_field.from_index(c))
        f = Poly(coefficient_field, tuple(coeffs) + (coefficient_field.one,))
        if is_irreducible(f):
            if found == skip:
                return f
            found += 1
    raise InvalidFieldError(f"fewer than {skip + 1} irreducibles of degree {d} over {coefficient_field.label}")


# ---------------------------------------------------------------------------
# Deterministic construction
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def prime_power(q: int) -> tuple[int, int]:
    if q < 3:
        raise InvalidFieldError(f"q must be an odd prime power, got {q}")
    factors = factorint(q)
    if len(factors) != 1:
        raise InvalidFieldError(f"q = {q} is not a prime power")
    ((p, r),) = factors.items()
    if p == 2:
        raise InvalidFieldError("characteristic 2 is not supported")
    return int(p), int(r)


@lru_cache(maxsize=None)
def prime_field(p: int) -> FieldSpec:
    return FieldSpec(p)


@lru_cache(maxsize=None)
def field(p: int, r: int, skip: int = 0) -> FieldSpec:
    if r == 1 and skip == 0:
        return prime_field(p)
    return FieldSpec(p, r, find_irreducible(p, r, skip).coeffs)


@lru_cache(maxsize=None)
def extension(base: FieldSpec, n: int, skip: int = 0) -> RelativeSpec:
    return RelativeSpec(base, n, find_irreducible(base, n, skip).coeffs)


def tower(q: int, n: int, skip: int = 0) -> RelativeSpec:
    """F_{q^n} over F_q with the lexicographically first moduli (skip shifts the relative one)."""
    p, r = prime_power(q)
    return extension(field(p, r), n, skip)


def spec_from_json(obj: dict | str) -> FieldSpec | RelativeSpec:
    """{"p":3,"r":2,"modulus":[1,0,1]} or {"base":{...},"n":5,"relModulus":[...]}."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        if "base" in obj:
            base = spec_from_json(obj["base"])
            if not isinstance(base, FieldSpec):
                raise InvalidFieldError("a relative spec's base must be an absolute field spec")
            return RelativeSpec(base, int(obj["n"]), tuple(int(c) for c in obj["relModulus"]))
        return FieldSpec(int(obj["p"]), int(obj.get("r", 1)), tuple(int(c) for c in obj["modulus"]))
    except (KeyError, TypeError) as e:
        raise InvalidFieldError(f"malformed field spec: {e}") from e


def resolve_tower(q: int, n: int, spec: RelativeSpec | None = None) -> RelativeSpec:
    """The default tower for (q, n), or an override spec after checking it describes F_{q^n}."""
    if spec is None:
        return tower(q, n)
    if spec.q != q or spec.n != n:
        raise FieldMismatchError(f"field spec {spec.label} does not describe F_{q}^{n}")
    return spec
