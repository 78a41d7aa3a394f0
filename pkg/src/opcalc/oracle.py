"""Truncated-matrix oracles that check the symbolic operations independently.

Basis vectors lie in every domain, so <T e_i, e_j> is exact even for
unbounded T.  Composite expressions are built from the matrices of their
factors (conjugate transpose for adjoints, matrix products for compositions),
never from the symbolic result, and compared on the interior of the window
where truncation at the edges cannot interfere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .operators import MonomialOperator, NotRepresentable, op_polar
from .radical import RadicalComplex
from .sequences import Space
from .terms import Adj, Atom, Cl, Comp, Inv, Lit, Restrict, Term, evaluate

MAX_EXACT = 128
MAX_FLOAT = 4096
REL_TOL = 1e-9


class WindowError(ValueError):
    pass


# -- exact sums of radicals -------------------------------------------------


class RadicalSum:
    """Finite sum of (x + iy) sqrt(s) over distinct square-free s.

    Square roots of distinct square-free integers are linearly independent
    over Q(i), so the dictionary form is canonical.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, tuple] | None = None):
        self.terms = {s: v for s, v in (terms or {}).items() if v[0] or v[1]}

    @classmethod
    def of(cls, z: RadicalComplex) -> "RadicalSum":
        return cls({z.s: (z.x, z.y)})

    def __add__(self, other: "RadicalSum") -> "RadicalSum":
        out = dict(self.terms)
        for s, (x, y) in other.terms.items():
            x0, y0 = out.get(s, (Fraction(0), Fraction(0)))
            out[s] = (x0 + x, y0 + y)
        return RadicalSum(out)

    def __mul__(self, other: "RadicalSum") -> "RadicalSum":
        out: dict[int, tuple] = {}
        for s, (x, y) in self.terms.items():
            for t, (u, v) in other.terms.items():
                g = gcd(s, t)
                r = (s // g) * (t // g)
                re, im = (x * u - y * v) * g, (x * v + y * u) * g
                x0, y0 = out.get(r, (Fraction(0), Fraction(0)))
                out[r] = (x0 + re, y0 + im)
        return RadicalSum(out)

    def conjugate(self) -> "RadicalSum":
        return RadicalSum({s: (x, -y) for s, (x, y) in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RadicalComplex):
            other = RadicalSum.of(other)
        if not isinstance(other, RadicalSum):
            return NotImplemented
        return self.terms == other.terms

    def __complex__(self) -> complex:
        return sum((complex(float(x), float(y)) * s**0.5 for s, (x, y) in self.terms.items()),
                   0j)

    def __str__(self) -> str:
        if not self.terms:
            return "(0,0,1)"
        return "+".join(f"({_q(x)},{_q(y)},{s})" for s, (x, y) in sorted(self.terms.items()))


def _q(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


# -- windows and matrices ---------------------------------------------------


@dataclass(frozen=True)
class Window:
    space: Space
    n: int

    @property
    def indices(self) -> range:
        if self.space is Space.UNILATERAL:
            return range(0, self.n)
        return range(-self.n, self.n + 1)

    @property
    def size(self) -> int:
        return len(self.indices)

    def pos(self, index: int) -> int:
        return index - self.indices.start

    def interior(self, margin: int) -> range:
        """Indices whose matrix entries cannot be disturbed by the window edges."""
        idx = self.indices
        lo = idx.start if self.space is Space.UNILATERAL else idx.start + margin
        return range(lo, idx.stop - margin)


@dataclass
class TruncatedMatrix:
    window: Window
    mode: str
    entries: object  # dict (j, i) -> RadicalSum in exact mode, scipy CSR in float mode
    source: str
    margin: int

    def entry(self, j: int, i: int):
        if self.mode == "exact":
            return self.entries.get((j, i), RadicalSum())
        w = self.window
        return complex(self.entries[w.pos(j), w.pos(i)])

    def dense(self) -> np.ndarray:
        if self.mode == "exact":
            w = self.window
            out = np.zeros((w.size, w.size), dtype=complex)
            for (j, i), v in self.entries.items():
                out[w.pos(j), w.pos(i)] = complex(v)
            return out
        return self.entries.toarray()

    def interior_indices(self) -> range:
        return self.window.interior(self.margin)

    def rows(self):
        """Row-major (j, i, value) over the full window."""
        for j in self.window.indices:
            for i in self.window.indices:
                yield j, i, self.entry(j, i)


def _check(space: Space, n: int, mode: str, margin: int) -> Window:
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    limit = MAX_EXACT if mode == "exact" else MAX_FLOAT
    if n < 1 or n > limit:
        raise WindowError(f"N = {n} outside 1..{limit} for {mode} mode")
    if margin >= n:
        raise WindowError(f"window N = {n} too small for total shift {margin}")
    return Window(space, n)


def _leaf_exact(T: MonomialOperator, w: Window) -> dict:
    out = {}
    for i in w.indices:
        j = i + T.shift
        if j in w.indices and T.symbol.in_space(j):
            v = T.symbol(j)
            if not v.is_zero():
                out[(j, i)] = RadicalSum.of(v)
    return out


def _inverse_exact(T: MonomialOperator, w: Window) -> dict:
    # T e_n = a_{n+k} e_{n+k}, so T^{-1} e_m = e_{m-k} / a_m
    out = {}
    for m in w.indices:
        i = m - T.shift
        if i in w.indices and T.symbol.in_space(m):
            v = T.symbol(m)
            if v.is_zero():
                raise NotRepresentable("operator is not injective")
            out[(i, m)] = RadicalSum.of(v.inverse())
    return out


def _matmul_exact(X: dict, Y: dict) -> dict:
    by_row: dict[int, list] = {}
    for (m, i), v in Y.items():
        by_row.setdefault(m, []).append((i, v))
    out: dict = {}
    for (j, m), u in X.items():
        for i, v in by_row.get(m, ()):
            acc = out.get((j, i))
            prod = u * v
            out[(j, i)] = prod if acc is None else acc + prod
    return {k: v for k, v in out.items() if not v.is_zero()}


def _to_float(v) -> complex:
    try:
        return complex(v)
    except OverflowError:
        return complex(float("inf"))


def _leaf_float(T: MonomialOperator, w: Window):
    rows, cols, vals = [], [], []
    for (j, i), v in _leaf_exact_values(T, w):
        rows.append(w.pos(j))
        cols.append(w.pos(i))
        vals.append(_to_float(v))
    return sp.csr_matrix((vals, (rows, cols)), shape=(w.size, w.size), dtype=complex)


def _leaf_exact_values(T: MonomialOperator, w: Window):
    for i in w.indices:
        j = i + T.shift
        if j in w.indices and T.symbol.in_space(j):
            yield (j, i), T.symbol(j)


def _margin(t: Term, env) -> int:
    if isinstance(t, (Atom, Lit)):
        return abs(evaluate(t, env).shift)
    if isinstance(t, Comp):
        return _margin(t.left, env) + _margin(t.right, env)
    return _margin(t.term, env)


def _build(t: Term, env, w: Window, mode: str):
    if isinstance(t, (Atom, Lit)):
        T = evaluate(t, env)
        return _leaf_exact(T, w) if mode == "exact" else _leaf_float(T, w)
    if isinstance(t, (Cl, Restrict)):
        # closure and restriction keep every matrix element
        return _build(t.term, env, w, mode)
    if isinstance(t, Adj):
        X = _build(t.term, env, w, mode)
        if mode == "exact":
            return {(i, j): v.conjugate() for (j, i), v in X.items()}
        return X.conj().T.tocsr()
    if isinstance(t, Comp):
        X, Y = _build(t.left, env, w, mode), _build(t.right, env, w, mode)
        return _matmul_exact(X, Y) if mode == "exact" else (X @ Y).tocsr()
    if isinstance(t, Inv):
        X = _inverse_exact(evaluate(t.term, env), w)
        if mode == "exact":
            return X
        return _exact_to_csr(X, w)
    raise TypeError(f"not a term: {t!r}")


def _exact_to_csr(X: dict, w: Window):
    rows = [w.pos(j) for j, _ in X]
    cols = [w.pos(i) for _, i in X]
    vals = [_to_float(v) for v in X.values()]
    return sp.csr_matrix((vals, (rows, cols)), shape=(w.size, w.size), dtype=complex)


def matrix_of(expr: Term | MonomialOperator, n: int, mode: str = "exact",
              env: Mapping[str, MonomialOperator] | None = None) -> TruncatedMatrix:
    """Truncated matrix of an expression, built from the matrices of its factors."""
    env = dict(env or {})
    if isinstance(expr, MonomialOperator):
        expr = Lit(expr)
    space = _space_of(expr, env)
    margin = _margin(expr, env)
    w = _check(space, n, mode, margin)
    return TruncatedMatrix(w, mode, _build(expr, env, w, mode), str(expr), margin)


def symbolic_matrix(T: MonomialOperator, n: int, mode: str = "exact",
                    margin: int = 0) -> TruncatedMatrix:
    """Matrix of a single monomial straight from its symbol."""
    w = _check(T.space, n, mode, margin)
    entries = _leaf_exact(T, w) if mode == "exact" else _leaf_float(T, w)
    return TruncatedMatrix(w, mode, entries, str(T), margin)


def _space_of(t: Term, env) -> Space:
    if isinstance(t, (Atom, Lit)):
        return evaluate(t, env).space
    if isinstance(t, Comp):
        return _space_of(t.left, env)
    return _space_of(t.term, env)


# -- comparison -------------------------------------------------------------


@dataclass(frozen=True)
class CrossCheck:
    passed: bool
    mismatch: tuple | None = None  # (row j, column i, oracle value, symbolic value)
    max_deviation: float = 0.0

    def __bool__(self) -> bool:
        return self.passed


def compare_interior(oracle: TruncatedMatrix, symbolic: TruncatedMatrix) -> CrossCheck:
    idx = oracle.interior_indices()
    if oracle.mode == "exact":
        X, Y = oracle.entries, symbolic.entries
        keys = sorted({k for k in list(X) + list(Y) if k[0] in idx and k[1] in idx})
        for j, i in keys:
            u, v = X.get((j, i), RadicalSum()), Y.get((j, i), RadicalSum())
            if u != v:
                return CrossCheck(False, (j, i, str(u), str(v)))
        return CrossCheck(True)
    w = oracle.window
    sl = slice(w.pos(idx.start), w.pos(idx.start) + len(idx))
    a = oracle.entries[sl, sl].toarray()
    b = symbolic.entries[sl, sl].toarray()
    diff = np.abs(a - b)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    rel = diff / scale
    worst = float(rel.max()) if rel.size else 0.0
    if worst > REL_TOL or not np.isfinite(worst):
        r, c = np.unravel_index(int(np.nanargmax(rel)), rel.shape)
        return CrossCheck(False, (idx[r], idx[c], complex(a[r, c]), complex(b[r, c])), worst)
    return CrossCheck(True, None, worst)


def oracle_crosscheck(op_name: str, inputs: tuple, symbolic_result, n: int,
                      mode: str = "exact") -> CrossCheck:
    """Check a symbolic result against matrices built from its inputs.

    op_name is one of adjoint, compose, closure, polar, inverse.  For polar the
    symbolic result is the pair (W, |T|), checked through T = W |T| and
    |T|^2 = T* T.
    """
    names = [f"x{i}" for i in range(len(inputs))]
    env = dict(zip(names, inputs))
    atoms = [Atom(nm) for nm in names]
    if op_name == "adjoint":
        expr = Adj(atoms[0])
    elif op_name == "compose":
        expr = Comp(atoms[0], atoms[1])
    elif op_name == "closure":
        expr = Cl(atoms[0])
    elif op_name == "inverse":
        expr = Inv(atoms[0])
    elif op_name == "polar":
        W, absT = symbolic_result
        env.update(W=W, P=absT)
        first = _agree(Comp(Atom("W"), Atom("P")), Lit(inputs[0]), env, n, mode)
        if not first.passed:
            return first
        return _agree(Comp(Atom("P"), Atom("P")), Comp(Adj(atoms[0]), atoms[0]), env, n, mode)
    else:
        raise ValueError(f"unknown operation {op_name!r}")
    return _agree(expr, Lit(symbolic_result), env, n, mode)


def _agree(expr: Term, target: Term, env, n: int, mode: str) -> CrossCheck:
    oracle = matrix_of(expr, n, mode, env)
    other = matrix_of(target, n, mode, env)
    margin = max(oracle.margin, other.margin)
    oracle.margin = other.margin = margin
    if margin >= n:
        raise WindowError(f"window N = {n} too small for total shift {margin}")
    return compare_interior(oracle, other)


# -- residuals --------------------------------------------------------------


@dataclass(frozen=True)
class Residual:
    absolute: float
    relative: float


@dataclass(frozen=True)
class Residuals:
    normality: Residual
    selfadjointness: Residual
    polar: Residual


def _residual(X, Y, idx: range, w: Window) -> Residual:
    sl = slice(w.pos(idx.start), w.pos(idx.start) + len(idx))
    a, b = X[sl, sl].toarray(), Y[sl, sl].toarray()
    if a.size == 0:
        return Residual(0.0, 0.0)
    diff = np.abs(a - b)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    with np.errstate(invalid="ignore"):
        return Residual(float(diff.max()), float((diff / scale).max()))


def residuals(expr: Term | MonomialOperator, n: int,
              env: Mapping[str, MonomialOperator] | None = None) -> Residuals:
    """Interior max-entry residuals of [T*, T], T - T* and T - W|T| in float mode."""
    env = dict(env or {})
    if isinstance(expr, MonomialOperator):
        expr = Lit(expr)
    T = evaluate(expr, env)
    pol = op_polar(T)
    env.update(__W=pol.partial_isometry, __P=pol.modulus)
    margin = 2 * _margin(expr, env)
    win = _check(T.space, n, "float", margin)
    X = _build(expr, env, win, "float")
    Xs = X.conj().T.tocsr()
    idx = win.interior(margin)
    normal = _residual((Xs @ X).tocsr(), (X @ Xs).tocsr(), idx, win)
    selfadj = _residual(X, Xs, idx, win)
    polar = _residual(X, _build(Comp(Atom("__W"), Atom("__P")), env, win, "float"), idx, win)
    return Residuals(normal, selfadj, polar)


def svd_polar_deviation(T: MonomialOperator, n: int) -> float:
    """Max interior deviation between the SVD polar factors of a truncation and the
    symbolic (W, |T|); meaningful for bounded symbols only."""
    margin = abs(T.shift)
    w = _check(T.space, n, "float", margin)
    M = _leaf_float(T, w).toarray()
    U, P = scipy.linalg.polar(M)
    pol = op_polar(T)
    Ws = _leaf_float(pol.partial_isometry, w).toarray()
    Ps = _leaf_float(pol.modulus, w).toarray()
    # stay well inside the window: the truncation disturbs entries near both edges
    inner = w.interior(max(margin, n // 4))
    sl = slice(w.pos(inner.start), w.pos(inner.start) + len(inner))
    dev_p = np.abs(P[sl, sl] - Ps[sl, sl]).max() if len(inner) else 0.0
    dev_u = np.abs(U[sl, sl] - Ws[sl, sl]).max() if len(inner) else 0.0
    return float(max(dev_p, dev_u))
