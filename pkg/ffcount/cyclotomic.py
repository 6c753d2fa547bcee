"""
Exact arithmetic in Q(zeta_N).

Elements are sympy Polys in z over QQ, kept reduced modulo the N-th cyclotomic polynomial.
The curve and counting modules use it for two things: sqrt(q) realised as a Gauss sum
inside Q(zeta_{4p}), and power sums of roots of unity that must come out as rational
integers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from sympy import QQ, Poly, Rational, cyclotomic_poly, legendre_symbol, symbols

from ffcount.ffield import prime_power

_z = symbols("z")


class CyclotomicField:
    def __init__(self, order: int):
        if order < 1:
            raise ValueError(f"cyclotomic order must be >= 1, got {order}")
        self.order = order
        self.modulus = Poly(cyclotomic_poly(order, _z), _z, domain=QQ)

    def __repr__(self):
        return f"CyclotomicField({self.order})"

    def const(self, c: int | Fraction) -> Poly:
        if isinstance(c, Fraction):
            c = Rational(c.numerator, c.denominator)
        return Poly(c, _z, domain=QQ)

    def zeta(self, k: int = 1) -> Poly:
        """zeta_N^k with zeta_N = exp(2*pi*i/N)."""
        return Poly(_z ** (k % self.order), _z, domain=QQ).rem(self.modulus)

    def from_exponents(self, multiplicities: dict[int, int]) -> Poly:
        """sum of m * zeta^e over the given exponents."""
        if not multiplicities:
            return self.const(0)
        terms = {(e % self.order,): m for e, m in multiplicities.items()}
        return Poly.from_dict(terms, _z, domain=QQ).rem(self.modulus)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return (a * b).rem(self.modulus)

    def pow(self, a: Poly, e: int) -> Poly:
        if e < 0:
            raise ValueError("negative powers are not needed here")
        result = self.const(1)
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def is_rational(self, a: Poly) -> bool:
        return a.is_zero or a.degree() == 0

    def rational(self, a: Poly) -> Fraction:
        if not self.is_rational(a):
            raise ValueError(f"{a.as_expr()} is not rational in Q(zeta_{self.order})")
        value = Rational(a.as_expr())
        return Fraction(int(value.p), int(value.q))


@lru_cache(maxsize=None)
def field_for(p: int) -> CyclotomicField:
    """Q(zeta_{4p}): holds i = zeta^p, the p-th roots of unity w^k = zeta^{4k}, and sqrt(p)."""
    return CyclotomicField(4 * p)


@lru_cache(maxsize=None)
def sqrt_p(p: int) -> Poly:
    """
    sqrt(p) as the quadratic Gauss sum G = sum_k (k/p) w^k, which is sqrt(p) for p = 1 mod 4
    and i*sqrt(p) for p = 3 mod 4. Under zeta -> exp(2*pi*i/4p) it maps to the positive root.
    """
    K = field_for(p)
    gauss = Poly(0, _z, domain=QQ)
    for k in range(1, p):
        gauss = gauss + K.const(int(legendre_symbol(k, p))) * K.zeta(4 * k)
    gauss = gauss.rem(K.modulus)
    if p % 4 == 1:
        return gauss
    return K.mul(-K.zeta(p), gauss)


@lru_cache(maxsize=None)
def sqrt_q(q: int) -> Poly:
    """sqrt(q) in Q(zeta_{4p}) for q = p^r."""
    p, r = prime_power(q)
    K = field_for(p)
    if r % 2 == 0:
        return K.const(p ** (r // 2))
    return K.mul(K.const(p ** ((r - 1) // 2)), sqrt_p(p))
