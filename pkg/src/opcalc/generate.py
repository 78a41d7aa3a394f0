"""Seeded random symbols and monomial operators for the property suites."""

from __future__ import annotations

import random
from fractions import Fraction

from .operators import MonomialOperator
from .radical import RadicalComplex
from .sequences import GrowthSymbol, Space

_RATIONALS = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(2, 3), Fraction(5, 4)]
_POLYS = [(1, 1), (2, 1), (Fraction(1, 2), 1), (3, 1), (1, 0, 1), (2, 1, 1)]
_BASES = [Fraction(1), Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2)]


def random_scalar(rng: random.Random, allow_zero: bool = False) -> RadicalComplex:
    if allow_zero and rng.random() < 0.15:
        return RadicalComplex(0)
    x = rng.choice([0, 1, -1, 2, Fraction(1, 2), Fraction(-3, 2)])
    y = rng.choice([0, 0, 1, -1, Fraction(1, 3)])
    if x == 0 and y == 0:
        x = 1
    return RadicalComplex(x, y, rng.choice([1, 1, 1, 2, 3, Fraction(1, 2)]))


def random_symbol(rng: random.Random, space: Space | str, *, zeros: bool = True,
                  growth: bool = True) -> GrowthSymbol:
    """A random symbol; `zeros=False` avoids vanishing entries, `growth=False` keeps it bounded
    above and below."""
    space = Space(space)
    q = rng.choice([1, 1, 1, 2, 3])
    residues = [random_scalar(rng, allow_zero=zeros and q > 1) for _ in range(q)]
    if all(r.is_zero() for r in residues):
        residues[0] = RadicalComplex(1)
    poly, base = [], Fraction(1)
    if growth:
        if space is Space.UNILATERAL:
            for _ in range(rng.choice([0, 0, 1, 1, 2])):
                coeffs = rng.choice(_POLYS)
                poly.append((coeffs, Fraction(rng.choice([-4, -2, -1, 1, 2, 3, 4]), 2)))
        base = rng.choice(_BASES)
    overrides = {}
    lo = 0 if space is Space.UNILATERAL else -4
    for _ in range(rng.choice([0, 0, 1, 2])):
        overrides[rng.randint(lo, 5)] = random_scalar(rng, allow_zero=zeros)
    return GrowthSymbol.build(space, random_scalar(rng), residues, poly, base, overrides)


def random_operator(rng: random.Random, space: Space | str | None = None, *,
                    max_shift: int = 2, constraints: bool = True,
                    zeros: bool = True) -> MonomialOperator:
    if space is None:
        space = rng.choice([Space.UNILATERAL, Space.BILATERAL])
    space = Space(space)
    a = random_symbol(rng, space, zeros=zeros)
    k = rng.randint(-max_shift, max_shift)
    extra = []
    if constraints and rng.random() < 0.4:
        for _ in range(rng.choice([1, 1, 2])):
            extra.append(random_symbol(rng, space))
    return MonomialOperator.make(a, k, extra)


def random_invertible_bounded(rng: random.Random, space: Space | str) -> MonomialOperator:
    """Bounded with bounded inverse: no zeros, symbol bounded above and below."""
    space = Space(space)
    a = random_symbol(rng, space, zeros=False, growth=False)
    k = rng.randint(-2, 2) if space is Space.BILATERAL else 0
    return MonomialOperator.make(a, k)


def random_pair(rng: random.Random, **kw) -> tuple[MonomialOperator, MonomialOperator]:
    space = rng.choice([Space.UNILATERAL, Space.BILATERAL])
    return random_operator(rng, space, **kw), random_operator(rng, space, **kw)
