"""Symbolic sequences over N or Z with exact values and decidable growth.

A symbol is

    n -> coeff * residues[n mod q] * prod_i P_i(n)**p_i * b**n

with monic rational polynomials P_i (unilateral space only), half-integer
exponents p_i, a positive rational base b, and finitely many overridden
indices.  The base formula is defined at n when every P_i(n) > 0; every other
index must be overridden.

Shifts follow the convention (shift(a, j))_n = a_{n-j}, and indices that fall
off the left edge of N read as 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache, reduce
from math import ceil, lcm
from typing import Iterable, Mapping, Sequence

from .radical import ONE, ZERO, RadicalComplex, Rational, modulus_geq, sqrt_upper

MAX_OVERRIDES = 64
MAX_ROOT_SCAN = 4096

Poly = tuple  # ascending Fraction coefficients, trimmed


class Space(str, Enum):
    UNILATERAL = "unilateral"
    BILATERAL = "bilateral"

    def __str__(self) -> str:
        return self.value


class SymbolError(ValueError):
    """Invalid symbol construction or operation."""


class OverrideOverflow(SymbolError):
    pass


# -- polynomial helpers -----------------------------------------------------


def poly_trim(coeffs: Iterable[Rational]) -> Poly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_eval(p: Poly, n: Rational) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * n + c
    return acc


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly_trim(out)


def poly_pow(p: Poly, k: int) -> Poly:
    out: Poly = (Fraction(1),)
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_sub(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly_trim(
        (p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)
    )


def poly_deriv(p: Poly) -> Poly:
    return poly_trim(i * c for i, c in enumerate(p) if i > 0)


def poly_translate(p: Poly, j: Rational) -> Poly:
    """Coefficients of n -> p(n + j)."""
    out: Poly = ()
    for c in reversed(p):
        out = poly_mul(out, (Fraction(j), Fraction(1)))
        head = list(out) or [Fraction(0)]
        head[0] += c
        out = poly_trim(head)
    return out


def root_bound(p: Poly) -> float:
    """Fujiwara bound on the moduli of the roots of p."""
    d = len(p) - 1
    if d <= 0:
        return 0.0
    lc = p[-1]
    best = 0.0
    for i in range(1, d + 1):
        c = abs(p[d - i] / lc)
        if c:
            term = float(c / 2 if i == d else c) ** (1.0 / i)
            best = max(best, term)
    return 2.0 * best


@lru_cache(maxsize=8192)
def nonpositive_points(p: Poly) -> tuple[int, ...]:
    """Indices n >= 0 with p(n) <= 0, for p with positive leading coefficient."""
    bound = root_bound(p)
    if bound > MAX_ROOT_SCAN:
        raise SymbolError(f"polynomial root bound {bound:.3g} exceeds scan limit")
    return tuple(n for n in range(0, int(ceil(bound)) + 1) if poly_eval(p, n) <= 0)


def poly_literal(p: Poly, exponent: Fraction) -> str:
    from .radical import _q

    if len(p) == 2 and p[1] == 1:
        return f"pow({_q(p[0])},{_q(exponent)})"
    return "poly(" + ",".join(_q(c) for c in p) + f"; {_q(exponent)})"


def _half_integer(p: Rational) -> Fraction:
    p = Fraction(p)
    if (2 * p).denominator != 1:
        raise SymbolError(f"exponent {p} is not a multiple of 1/2")
    return p


def _rc(v) -> RadicalComplex:
    return v if isinstance(v, RadicalComplex) else RadicalComplex(v)


# -- the symbol -------------------------------------------------------------


@dataclass(frozen=True)
class ClassProfile:
    """Asymptotic data of a symbol along one residue class."""

    residue: int
    modulus: int
    zero: bool
    base: Fraction
    degree: Fraction


@dataclass(frozen=True)
class GrowthSymbol:
    space: Space
    coeff: RadicalComplex
    residues: tuple
    poly: tuple  # ((monic Poly, exponent), ...)
    expbase: Fraction
    overrides: tuple  # ((index, RadicalComplex), ...) sorted by index
    _override_map: dict = field(default=None, compare=False, repr=False, hash=False)
    _hash: int = field(default=None, compare=False, repr=False, hash=False)

    # -- construction ----------------------------------------------------

    @classmethod
    def build(
        cls,
        space: Space | str = Space.UNILATERAL,
        coeff=ONE,
        residues: Sequence = (ONE,),
        poly: Sequence = (),
        expbase: Rational = 1,
        overrides: Mapping[int, object] | None = None,
    ) -> "GrowthSymbol":
        space = Space(space)
        coeff = _rc(coeff)
        residues = tuple(_rc(r) for r in residues) or (ONE,)
        expbase = Fraction(expbase)
        if expbase <= 0:
            raise SymbolError("exponential base must be positive")
        if space is Space.BILATERAL and poly:
            raise SymbolError("bilateral symbols carry no polynomial factors")

        merged: dict[Poly, Fraction] = {}
        for coeffs, p in poly:
            p = _half_integer(p)
            P = poly_trim(coeffs)
            if not P:
                raise SymbolError("zero polynomial factor")
            if len(P) == 1:
                if P[0] <= 0:
                    raise SymbolError("constant polynomial factor must be positive")
                coeff = coeff * RadicalComplex.rational_power(P[0], p)
                continue
            lc = P[-1]
            if lc <= 0:
                raise SymbolError("polynomial factor must have positive leading coefficient")
            coeff = coeff * RadicalComplex.rational_power(lc, p)
            M = tuple(c / lc for c in P)
            merged[M] = merged.get(M, Fraction(0)) + p
        factors = tuple(sorted(((M, p) for M, p in merged.items() if p != 0),
                               key=lambda mp: (len(mp[0]), mp[0], mp[1])))

        raw_over = {}
        for k, v in (overrides or {}).items():
            k = int(k)
            if space is Space.UNILATERAL and k < 0:
                raise SymbolError(f"override index {k} outside N")
            raw_over[k] = _rc(v)

        if coeff.is_zero() or all(r.is_zero() for r in residues):
            coeff, residues, factors, expbase = ZERO, (ONE,), (), Fraction(1)
        else:
            residues = _reduce_period(residues)
            first = next(r for r in residues if not r.is_zero())
            coeff = coeff * first
            inv = first.inverse()
            residues = tuple(r * inv for r in residues)

        proto = cls(space, coeff, residues, factors, expbase, ())
        undefined = proto._undefined_points()
        kept = {}
        for k, v in raw_over.items():
            if k not in undefined and proto._generic(k) == v:
                continue
            kept[k] = v
        missing = [n for n in undefined if n not in kept]
        if missing:
            raise SymbolError(f"symbol undefined at indices {missing[:8]}")
        if len(kept) > MAX_OVERRIDES:
            raise OverrideOverflow(f"{len(kept)} overrides exceed the cap of {MAX_OVERRIDES}")
        return cls(space, coeff, residues, factors, expbase, tuple(sorted(kept.items())))

    @classmethod
    def constant(cls, value=1, space: Space | str = Space.UNILATERAL) -> "GrowthSymbol":
        return cls.build(space, coeff=value)

    def __post_init__(self):
        object.__setattr__(self, "_override_map", dict(self.overrides))
        object.__setattr__(self, "_hash", hash((self.space, self.coeff, self.residues,
                                                self.poly, self.expbase, self.overrides)))

    def __hash__(self) -> int:
        return self._hash

    # -- evaluation ------------------------------------------------------

    @property
    def period(self) -> int:
        return len(self.residues)

    @lru_cache(maxsize=1 << 16)
    def _undefined_points(self) -> frozenset:
        pts: set[int] = set()
        for P, _ in self.poly:
            pts.update(nonpositive_points(P))
        return frozenset(pts)

    def _generic(self, n: int) -> RadicalComplex:
        base = self.coeff * self.residues[n % self.period]
        if base.is_zero():
            return ZERO
        for P, p in self.poly:
            base = base * RadicalComplex.rational_power(poly_eval(P, n), p)
        if self.expbase != 1:
            base = base * (self.expbase**n)
        return base

    def in_space(self, n: int) -> bool:
        return self.space is Space.BILATERAL or n >= 0

    def __call__(self, n: int) -> RadicalComplex:
        if not self.in_space(n):
            raise IndexError(f"index {n} outside {self.space} index set")
        v = self._override_map.get(n)
        if v is not None:
            return v
        return self._generic(n)

    value = __call__

    def is_zero_symbol(self) -> bool:
        return self.coeff.is_zero() and not self.overrides

    # -- class data ------------------------------------------------------

    @property
    def degree(self) -> Fraction:
        return sum((Fraction(len(P) - 1) * p for P, p in self.poly), Fraction(0))

    def profile(self, residue: int, modulus: int) -> ClassProfile:
        if modulus % self.period:
            raise ValueError("modulus must be a multiple of the period")
        zero = self.coeff.is_zero() or self.residues[residue % self.period].is_zero()
        return ClassProfile(residue, modulus, zero, self.expbase, self.degree)

    def directions(self) -> tuple[int, ...]:
        return (1,) if self.space is Space.UNILATERAL else (1, -1)

    # -- combinations ----------------------------------------------------

    def _same_space(self, other: "GrowthSymbol") -> None:
        if self.space is not other.space:
            raise SymbolError("symbols live on different index spaces")

    @lru_cache(maxsize=1 << 16)
    def __mul__(self, other: "GrowthSymbol") -> "GrowthSymbol":
        self._same_space(other)
        q = lcm(self.period, other.period)
        residues = [self.residues[i % self.period] * other.residues[i % other.period]
                    for i in range(q)]
        poly = list(self.poly) + list(other.poly)
        idx = set(self._override_map) | set(other._override_map)
        over = {n: self(n) * other(n) for n in idx}
        return GrowthSymbol.build(self.space, self.coeff * other.coeff, residues, poly,
                                  self.expbase * other.expbase, over)

    def scale(self, c) -> "GrowthSymbol":
        c = _rc(c)
        return GrowthSymbol.build(self.space, self.coeff * c, self.residues, self.poly,
                                  self.expbase, {n: v * c for n, v in self.overrides})

    @lru_cache(maxsize=1 << 16)
    def conj(self) -> "GrowthSymbol":
        return GrowthSymbol.build(self.space, self.coeff.conjugate(),
                                  [r.conjugate() for r in self.residues], self.poly,
                                  self.expbase, {n: v.conjugate() for n, v in self.overrides})

    @lru_cache(maxsize=1 << 16)
    def abs(self) -> "GrowthSymbol":
        return GrowthSymbol.build(self.space, self.coeff.modulus(),
                                  [r.modulus() for r in self.residues], self.poly,
                                  self.expbase, {n: v.modulus() for n, v in self.overrides})

    @lru_cache(maxsize=1 << 16)
    def phase(self) -> "GrowthSymbol":
        """n -> a_n / |a_n| (0 where a_n = 0)."""
        over = {n: v.phase() for n, v in self.overrides}
        for n in self._undefined_points():
            over.setdefault(n, self(n).phase())
        return GrowthSymbol.build(self.space, self.coeff.phase(),
                                  [r.phase() for r in self.residues], (), 1, over)

    @lru_cache(maxsize=1 << 16)
    def reciprocal(self) -> "GrowthSymbol":
        zs = self.zero_set()
        if not zs.is_empty():
            raise SymbolError("reciprocal of a symbol with zeros")
        return GrowthSymbol.build(self.space, self.coeff.inverse(),
                                  [r.inverse() for r in self.residues],
                                  [(P, -p) for P, p in self.poly], 1 / self.expbase,
                                  {n: v.inverse() for n, v in self.overrides})

    @lru_cache(maxsize=1 << 16)
    def shift(self, j: int) -> "GrowthSymbol":
        """(shift(a, j))_n = a_{n-j}; on N, indices n < j read as 0."""
        if j == 0:
            return self
        q = self.period
        residues = [self.residues[(i - j) % q] for i in range(q)]
        coeff = self.coeff * RadicalComplex(self.expbase ** (-j))
        over: dict[int, RadicalComplex] = {}
        for n, v in self.overrides:
            if self.in_space(n + j):
                over[n + j] = v
        poly = [(poly_translate(P, -j), p) for P, p in self.poly]
        if self.space is Space.UNILATERAL and j > 0:
            for n in range(j):
                over[n] = ZERO
        return GrowthSymbol.build(self.space, coeff, residues, poly, self.expbase, over)

    # -- structure -------------------------------------------------------

    @lru_cache(maxsize=1 << 16)
    def zero_set(self) -> "ZeroSet":
        q = self.period
        classes = frozenset(r for r in range(q)
                            if (self.coeff * self.residues[r]).is_zero())
        added, removed = set(), set()
        for n, v in self.overrides:
            in_class = (n % q) in classes
            if v.is_zero() and not in_class:
                added.add(n)
            elif not v.is_zero() and in_class:
                removed.add(n)
        return ZeroSet(self.space, q, classes, frozenset(added), frozenset(removed))

    def equals_pointwise(self, other: "GrowthSymbol") -> bool:
        return same_values(self, other)

    def __str__(self) -> str:
        return symbol_literal(self)


def _reduce_period(residues: tuple) -> tuple:
    q = len(residues)
    for d in range(1, q + 1):
        if q % d == 0 and all(residues[i] == residues[i % d] for i in range(q)):
            return residues[:d]
    return residues


def symbol_literal(a: GrowthSymbol) -> str:
    parts = [str(a.coeff)]
    if a.period > 1:
        parts.append(f"per({a.period}; " + ", ".join(r.literal() for r in a.residues) + ")")
    parts.extend(poly_literal(P, p) for P, p in a.poly)
    if a.expbase != 1:
        from .radical import _q

        parts.append(f"exp({_q(a.expbase)})")
    text = " * ".join(parts)
    if a.overrides:
        text += " @ {" + ", ".join(f"{n}: {v}" for n, v in a.overrides) + "}"
    return text


# -- zero sets --------------------------------------------------------------


@dataclass(frozen=True)
class ZeroSet:
    """Indices in the given residue classes, plus `added`, minus `removed`."""

    space: Space
    modulus: int
    classes: frozenset
    added: frozenset
    removed: frozenset

    def __contains__(self, n: int) -> bool:
        if self.space is Space.UNILATERAL and n < 0:
            return False
        if n in self.added:
            return True
        if n in self.removed:
            return False
        return (n % self.modulus) in self.classes

    def is_empty(self) -> bool:
        return not self.classes and not self.added

    def is_finite(self) -> bool:
        return not self.classes

    def count(self) -> float:
        return len(self.added) if self.is_finite() else float("inf")

    def finite_members(self) -> tuple[int, ...]:
        if not self.is_finite():
            raise ValueError("zero set is infinite")
        return tuple(sorted(self.added))

    def describe(self) -> str:
        if self.is_empty():
            return "{}"
        bits = []
        if self.classes:
            cls_ = ",".join(str(c) for c in sorted(self.classes))
            bits.append(f"n = {cls_} mod {self.modulus}")
        if self.added:
            bits.append("{" + ",".join(str(n) for n in sorted(self.added)) + "}")
        text = " | ".join(bits)
        if self.removed:
            text += " except {" + ",".join(str(n) for n in sorted(self.removed)) + "}"
        return text


# -- pointwise equality -----------------------------------------------------


@lru_cache(maxsize=1 << 16)
def same_values(a: GrowthSymbol, b: GrowthSymbol) -> bool:
    """Decide a_n = b_n for every index n.

    Off the finitely many overridden indices each side is c * P(n) * base**n
    with P(n) > 0, so equality along a residue class forces equal bases, and
    the squared ratio is a rational function: agreement at more points than
    its degree settles the whole class.
    """
    if a.space is not b.space:
        return False
    if a == b:
        return True
    exceptional = set(a._override_map) | set(b._override_map)
    exceptional |= a._undefined_points() | b._undefined_points()
    for n in exceptional:
        if a(n) != b(n):
            return False
    q = lcm(a.period, b.period)
    start = max(exceptional, default=-1) + 1
    if a.space is Space.UNILATERAL:
        start = max(start, 0)
    deg = sum(abs(2 * p) * (len(P) - 1) for P, p in a.poly + b.poly)
    samples = int(deg) + 2
    for rho in range(q):
        za = (a.coeff * a.residues[rho % a.period]).is_zero()
        zb = (b.coeff * b.residues[rho % b.period]).is_zero()
        if za and zb:
            continue
        if za != zb or a.expbase != b.expbase:
            return False
        n = start + ((rho - start) % q)
        for _ in range(samples):
            if a._generic(n) != b._generic(n):
                return False
            n += q
    return True


# -- growth comparison ------------------------------------------------------


def _bounded(p: ClassProfile, direction: int) -> bool:
    if p.zero:
        return True
    if direction > 0:
        return p.base < 1 or (p.base == 1 and p.degree <= 0)
    return p.base >= 1


def _bounded_below(p: ClassProfile, direction: int) -> bool:
    if direction > 0:
        return p.base > 1 or (p.base == 1 and p.degree >= 0)
    return p.base <= 1


def _leq(pa: ClassProfile, pb: ClassProfile, direction: int) -> bool:
    if pb.zero:
        return _bounded(pa, direction)
    if direction > 0:
        return pa.base < pb.base or (pa.base == pb.base and pa.degree <= pb.degree)
    return pa.base >= pb.base


@dataclass(frozen=True)
class GrowthWitness:
    """Residue class and direction along which |a_n| / (1 + max_i |b_i,n|) is unbounded."""

    numerator: GrowthSymbol
    dominators: tuple
    residue: int
    modulus: int
    direction: int

    def _index(self, m: int) -> int:
        if self.direction > 0:
            return self.residue + self.modulus * m
        return self.residue - self.modulus * (m + 1)

    def _squares(self, n: int) -> tuple[Fraction, Fraction]:
        a2 = self.numerator(n).abs2()
        m2 = max((b(n).abs2() for b in self.dominators), default=Fraction(0))
        return a2, m2

    def subsequence(self, count: int, budget: int = 200_000) -> list[int]:
        """Indices n_1, n_2, ... (strictly moving outward) with ratio >= k at n_k."""
        out: list[int] = []
        m, step, misses, spent = 0, 1, 0, 0
        for k in range(1, count + 1):
            while True:
                spent += 1
                if spent > budget:
                    raise RuntimeError("growth witness search exhausted its budget")
                n = self._index(m)
                a2, m2 = self._squares(n)
                if modulus_geq(a2, k, m2):
                    out.append(n)
                    m += 1
                    misses, step = 0, 1
                    break
                misses += 1
                if misses > 256:
                    step *= 2
                m += step
        return out

    def vector(self, count: int) -> list[tuple[int, Fraction]]:
        """Entries of x with x in D(dominators) but not in D(numerator).

        x_{n_k} = 1 / (k (1 + u_k)) with u_k a rational upper bound of the
        dominating modulus: the weighted norms stay summable while
        |numerator * x| stays bounded below.
        """
        entries = []
        for k, n in enumerate(self.subsequence(count), start=1):
            _, m2 = self._squares(n)
            entries.append((n, Fraction(1, k) / (1 + sqrt_upper(m2))))
        return entries

    def describe(self) -> str:
        side = "+inf" if self.direction > 0 else "-inf"
        return f"n = {self.residue} mod {self.modulus}, n -> {side}"


@dataclass(frozen=True)
class GrowthResult:
    holds: bool
    witness: GrowthWitness | None = None

    def __bool__(self) -> bool:
        return self.holds


def dominated(a: GrowthSymbol, others: Sequence[GrowthSymbol]) -> GrowthResult:
    """Decide whether |a_n| <= C (1 + max_i |others_i(n)|) for all n."""
    return _dominated(a, tuple(others))


@lru_cache(maxsize=1 << 16)
def _dominated(a: GrowthSymbol, others: tuple) -> GrowthResult:
    for b in others:
        a._same_space(b)
    q = reduce(lcm, (b.period for b in others), a.period)
    for rho in range(q):
        pa = a.profile(rho, q)
        if pa.zero:
            continue
        pbs = [b.profile(rho, q) for b in others]
        for direction in a.directions():
            if _bounded(pa, direction):
                continue
            if any(_leq(pa, pb, direction) for pb in pbs):
                continue
            return GrowthResult(False, GrowthWitness(a, others, rho, q, direction))
    return GrowthResult(True)


def growth_leq(a: GrowthSymbol, b: GrowthSymbol) -> GrowthResult:
    """Decide whether |a_n| <= C (1 + |b_n|) for all n, with a witness when not."""
    return dominated(a, (b,))


# -- classification ---------------------------------------------------------


def _live_profiles(a: GrowthSymbol):
    q = a.period
    for rho in range(q):
        p = a.profile(rho, q)
        for direction in a.directions():
            yield p, direction


def is_bounded(a: GrowthSymbol) -> bool:
    return all(_bounded(p, d) for p, d in _live_profiles(a))


def is_bounded_below(a: GrowthSymbol) -> bool:
    """inf of |a_n| over the support of a is positive."""
    has_support = any(not a.profile(r, a.period).zero for r in range(a.period)) or any(
        not v.is_zero() for _, v in a.overrides)
    return has_support and all(p.zero or _bounded_below(p, d) for p, d in _live_profiles(a))


@dataclass(frozen=True)
class SymbolClass:
    bounded: bool
    inf_positive: bool
    infimum: RadicalComplex | None
    zero_set: ZeroSet
    growth: tuple  # ((residue, modulus, direction, base, degree) | zero, ...)


@lru_cache(maxsize=1 << 14)
def classify(a: GrowthSymbol) -> SymbolClass:
    growth = []
    for p, direction in _live_profiles(a):
        if p.zero:
            growth.append((p.residue, p.modulus, direction, "zero"))
        else:
            growth.append((p.residue, p.modulus, direction, p.base, p.degree))
    below = is_bounded_below(a)
    infimum = _infimum(a) if below else ZERO
    return SymbolClass(is_bounded(a), below, infimum, a.zero_set(), tuple(growth))


def _infimum(a: GrowthSymbol) -> RadicalComplex | None:
    """Exact inf of |a_n| over the support, when every live class has base 1."""
    q = a.period
    live = [r for r in range(q) if not a.profile(r, q).zero]
    if any(a.expbase != 1 for _ in live):
        return None
    candidates = [v.abs2() for _, v in a.overrides if not v.is_zero()]
    num: Poly = (Fraction(1),)
    den: Poly = (Fraction(1),)
    for P, p in a.poly:
        k = int(abs(2 * p))
        if p > 0:
            num = poly_mul(num, poly_pow(P, k))
        else:
            den = poly_mul(den, poly_pow(P, k))
    crit = poly_sub(poly_mul(poly_deriv(num), den), poly_mul(num, poly_deriv(den)))
    bound = max(root_bound(num), root_bound(den), root_bound(crit) if crit else 0.0)
    if bound > MAX_ROOT_SCAN:
        return None
    if a.space is Space.UNILATERAL:
        top = int(ceil(bound)) + 2 * q
        scan = range(0, top + 1)
    else:
        scan = range(-q, q)
    for n in scan:
        if n in a._override_map:
            continue
        v = a(n)
        if not v.is_zero():
            candidates.append(v.abs2())
    if a.degree == 0:
        for r in live:
            candidates.append((a.coeff * a.residues[r]).abs2())
    if not candidates:
        return None
    return RadicalComplex.sqrt_of(min(candidates))
