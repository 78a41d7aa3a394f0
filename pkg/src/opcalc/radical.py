"""Exact complex scalars of the form (x + iy) * sqrt(s).

The class is closed under product, conjugation, inversion and modulus, which
is all the monomial operator calculus needs (sums of symbols never occur).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Union

Rational = Union[int, Fraction]


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return (m, t) with n = m**2 * t and t square-free (n > 0)."""
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    if _is_square(n):
        return isqrt(n), 1
    m, t = 1, 1
    p = 2
    # trial division up to the cube root; the leftover cofactor has at most
    # two prime factors and is a square only if it is p**2
    limit = int(round(n ** (1.0 / 3.0))) + 2
    if limit > 2_000_000:
        from sympy import factorint

        for prime, e in factorint(n).items():
            m *= prime ** (e // 2)
            if e % 2:
                t *= prime
        return m, t
    while p <= limit and n > 1:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            m *= p ** (e // 2)
            if e % 2:
                t *= p
        p += 1 if p == 2 else 2
    if n > 1:
        if _is_square(n):
            m *= isqrt(n)
        else:
            t *= n
    return m, t


class RadicalComplex:
    """The number (x + i*y) * sqrt(s) with rational x, y and square-free integer s.

    Zero is always stored as x = y = 0, s = 1, so structural equality is value
    equality.
    """

    __slots__ = ("x", "y", "s", "_hash")

    def __init__(self, x: Rational = 0, y: Rational = 0, s: Rational = 1):
        x = Fraction(x)
        y = Fraction(y)
        s = Fraction(s)
        if s <= 0:
            raise ValueError(f"radicand must be positive, got {s}")
        if x == 0 and y == 0:
            self.x, self.y, self.s = Fraction(0), Fraction(0), 1
            self._hash = None
            return
        # sqrt(p/q) = sqrt(p*q) / q
        num, den = s.numerator * s.denominator, s.denominator
        m, t = squarefree_split(num)
        scale = Fraction(m, den)
        self.x = x * scale
        self.y = y * scale
        self.s = t
        self._hash = None

    @classmethod
    def _raw(cls, x: Fraction, y: Fraction, s: int) -> "RadicalComplex":
        obj = cls.__new__(cls)
        if x == 0 and y == 0:
            obj.x, obj.y, obj.s = Fraction(0), Fraction(0), 1
        else:
            obj.x, obj.y, obj.s = x, y, s
        obj._hash = None
        return obj

    @classmethod
    def sqrt_of(cls, r: Rational) -> "RadicalComplex":
        """Nonnegative square root of a nonnegative rational."""
        r = Fraction(r)
        if r < 0:
            raise ValueError("square root of a negative rational")
        if r == 0:
            return ZERO
        return cls(1, 0, r)

    @classmethod
    def rational_power(cls, base: Rational, exponent: Rational) -> "RadicalComplex":
        """base**exponent for base > 0 and exponent a multiple of 1/2."""
        base = Fraction(base)
        exponent = Fraction(exponent)
        if base <= 0:
            raise ValueError("rational_power needs a positive base")
        twice = exponent * 2
        if twice.denominator != 1:
            raise ValueError(f"exponent {exponent} is not a half-integer")
        whole, half = divmod(twice.numerator, 2)
        value = base**whole
        if half:
            return cls(value, 0, base)
        return cls(value, 0, 1)

    # -- arithmetic ------------------------------------------------------

    def __mul__(self, other: "RadicalComplex | Rational") -> "RadicalComplex":
        if not isinstance(other, RadicalComplex):
            other = Fraction(other)
            return RadicalComplex._raw(self.x * other, self.y * other, self.s)
        if self.is_zero() or other.is_zero():
            return ZERO
        g = gcd(self.s, other.s)
        s = (self.s // g) * (other.s // g)
        x = (self.x * other.x - self.y * other.y) * g
        y = (self.x * other.y + self.y * other.x) * g
        return RadicalComplex._raw(x, y, s)

    __rmul__ = __mul__

    def __neg__(self) -> "RadicalComplex":
        return RadicalComplex._raw(-self.x, -self.y, self.s)

    def conjugate(self) -> "RadicalComplex":
        return RadicalComplex._raw(self.x, -self.y, self.s)

    def abs2(self) -> Fraction:
        """Squared modulus, always rational."""
        return self.s * (self.x * self.x + self.y * self.y)

    def modulus(self) -> "RadicalComplex":
        return RadicalComplex.sqrt_of(self.abs2())

    def inverse(self) -> "RadicalComplex":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # 1/((x+iy)sqrt s) = (x-iy) sqrt s / (s (x^2+y^2))
        d = self.abs2()
        return RadicalComplex._raw(self.x / d, -self.y / d, self.s)

    def __truediv__(self, other: "RadicalComplex | Rational") -> "RadicalComplex":
        if not isinstance(other, RadicalComplex):
            other = RadicalComplex(other)
        return self * other.inverse()

    def phase(self) -> "RadicalComplex":
        """z / |z|, or 0 for z = 0."""
        if self.is_zero():
            return ZERO
        return self * self.modulus().inverse()

    def __pow__(self, k: int) -> "RadicalComplex":
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates ------------------------------------------------------

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0 and self.s == 1

    def is_real_nonnegative(self) -> bool:
        return self.y == 0 and self.x >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RadicalComplex(other)
        if not isinstance(other, RadicalComplex):
            return NotImplemented
        return self.x == other.x and self.y == other.y and self.s == other.s

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.x, self.y, self.s))
        return self._hash

    def __complex__(self) -> complex:
        r = self.s**0.5
        return complex(float(self.x) * r, float(self.y) * r)

    def __repr__(self) -> str:
        return f"RadicalComplex({self.x}, {self.y}, {self.s})"

    def __str__(self) -> str:
        return f"coeff({_q(self.x)},{_q(self.y)},{self.s})"

    def literal(self) -> str:
        """Short literal: a bare rational when possible, else coeff(x,y,s)."""
        if self.is_rational():
            return _q(self.x)
        return str(self)


def _q(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def product(a: RadicalComplex, b: RadicalComplex) -> RadicalComplex:
    return a * b


def conjugate(a: RadicalComplex) -> RadicalComplex:
    return a.conjugate()


def modulus(a: RadicalComplex) -> RadicalComplex:
    return a.modulus()


def equals(a: RadicalComplex, b: RadicalComplex) -> bool:
    return a == b


ZERO = RadicalComplex._raw(Fraction(0), Fraction(0), 1)
ONE = RadicalComplex._raw(Fraction(1), Fraction(0), 1)
I = RadicalComplex._raw(Fraction(0), Fraction(1), 1)


def modulus_geq(a2: Fraction, k: Rational, m2: Fraction) -> bool:
    """Decide sqrt(a2) >= k * (1 + sqrt(m2)) exactly (a2, m2 >= 0, k > 0)."""
    k = Fraction(k)
    lhs = a2 - k * k * (1 + m2)
    if lhs < 0:
        return False
    return lhs * lhs >= 4 * k**4 * m2


def sqrt_upper(r: Fraction) -> Fraction:
    """A rational u with sqrt(r) < u <= sqrt(r) + 2 (u = 0 for r = 0)."""
    if r <= 0:
        return Fraction(0)
    return Fraction(isqrt(r.numerator // r.denominator + 1) + 1)
