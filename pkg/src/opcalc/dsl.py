"""Lexer, parser and printer for operator scripts and facts files.

A script is a sequence of line statements:

    space unilateral | bilateral
    sym NAME = <symbol>
    op NAME = <expr>
    cmp <expr>, <expr>
    props <expr>
    state <expr>
    polar <expr>
    matrix <expr> [N] [exact|float]
    assume <fact>
    derive [--conjectural] [--depth K]
    explain <fact>
    expect cmp <expr>, <expr> = <verdict>
    expect state <expr> = <state>
    expect <fact> = true | false

Symbols are products of coeff(x,y,s), rationals, per(q; c0, ...), pow(r,p),
poly(c0, ..., cd; p), exp(b) and symbol names, optionally followed by
overrides @ {i: value, ...}.  Expressions combine diag(<symbol>),
shift(k), diag(<symbol>).shift(k), names, adj(e), cl(e), inv(e), e * e and
e on dom(<symbol>) & dom(<symbol>).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .facts import ARITY, SUGAR, Fact, FactError, make_fact
from .operators import MonomialOperator, OperatorError, Verdict
from .radical import RadicalComplex
from .sequences import GrowthSymbol, Space, SymbolError
from .states import parse_state
from .terms import Adj, Atom, Cl, Comp, Inv, Lit, Restrict, Term, normalize


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        text = f"{line}:{col}: {message}"
        if self.expected:
            text += " (expected one of: " + ", ".join(self.expected) + ")"
        super().__init__(text)


class BindingError(ParseError):
    pass


# -- lexer ------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, FLAG, OP, NL, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<flag>--[A-Za-z][A-Za-z_-]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<op>[()\[\],;*/@{}:=.&+-])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            tokens.append(Token("NL", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind == "name":
            tokens.append(Token("NAME", m.group(), line, col))
        elif kind == "int":
            tokens.append(Token("INT", m.group(), line, col))
        elif kind == "flag":
            tokens.append(Token("FLAG", m.group(), line, col))
        elif kind == "op":
            tokens.append(Token("OP", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# -- statements -------------------------------------------------------------


def _q(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


@dataclass(frozen=True)
class SpaceDecl:
    space: Space

    def __str__(self) -> str:
        return f"space {self.space}"


@dataclass(frozen=True)
class SymDef:
    name: str
    symbol: GrowthSymbol

    def __str__(self) -> str:
        return f"sym {self.name} = {self.symbol}"


@dataclass(frozen=True)
class OpDef:
    name: str
    term: Term

    def __str__(self) -> str:
        return f"op {self.name} = {self.term}"


@dataclass(frozen=True)
class Query:
    kind: str  # cmp, props, state, polar, matrix
    terms: tuple
    n: int | None = None
    mode: str | None = None

    def __str__(self) -> str:
        text = f"{self.kind} " + ", ".join(str(t) for t in self.terms)
        if self.n is not None:
            text += f" {self.n}"
        if self.mode is not None:
            text += f" {self.mode}"
        return text


@dataclass(frozen=True)
class Assume:
    fact: Fact

    def __str__(self) -> str:
        return f"assume {self.fact}"


@dataclass(frozen=True)
class Derive:
    conjectural: bool = False
    depth: int | None = None

    def __str__(self) -> str:
        text = "derive"
        if self.conjectural:
            text += " --conjectural"
        if self.depth is not None:
            text += f" --depth {self.depth}"
        return text


@dataclass(frozen=True)
class Explain:
    fact: Fact

    def __str__(self) -> str:
        return f"explain {self.fact}"


@dataclass(frozen=True)
class Expect:
    kind: str  # cmp, state, fact
    subject: tuple  # terms, or (Fact,)
    value: str

    def __str__(self) -> str:
        if self.kind == "fact":
            return f"expect {self.subject[0]} = {self.value}"
        return f"expect {self.kind} " + ", ".join(str(t) for t in self.subject) + f" = {self.value}"


@dataclass
class Statement:
    node: object
    line: int


@dataclass
class Program:
    space: Space = Space.UNILATERAL
    statements: list = field(default_factory=list)
    symbols: dict = field(default_factory=dict)
    operators: dict = field(default_factory=dict)  # name -> Term

    def __str__(self) -> str:
        return "".join(f"{s.node}\n" for s in self.statements)


# -- parser -----------------------------------------------------------------

QUERY_KINDS = ("cmp", "props", "state", "polar", "matrix")
STATEMENT_KEYWORDS = ("space", "sym", "op", "assume", "derive", "explain", "expect") + QUERY_KINDS
RESERVED = {"diag", "shift", "adj", "cl", "inv", "on", "dom", "coeff", "per", "pow", "poly", "exp"}
VERDICTS = tuple(v.value for v in Verdict)


class Parser:
    def __init__(self, text: str, space: Space = Space.UNILATERAL, *,
                 symbols: dict | None = None, operators: dict | None = None,
                 free_atoms: bool = True):
        self.tokens = tokenize(text)
        self.i = 0
        self.space = Space(space)
        self.symbols = dict(symbols or {})
        self.operators = dict(operators or {})
        # whether unbound names in expressions denote abstract atoms
        self.free_atoms = free_atoms

    # -- token helpers ----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("OP", "NAME", "FLAG") and t.text == text

    def error(self, message: str, expected=(), tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col, expected)

    def describe(self, tok: Token) -> str:
        if tok.kind == "EOF":
            return "end of input"
        if tok.kind == "NL":
            return "end of line"
        return repr(tok.text)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"unexpected {self.describe(self.tok)}", [repr(text)])
        return self.advance()

    def expect_name(self, what: str = "name") -> Token:
        if self.tok.kind != "NAME":
            raise self.error(f"unexpected {self.describe(self.tok)}", [what])
        return self.advance()

    def skip_newlines(self) -> None:
        while self.tok.kind == "NL":
            self.advance()

    def end_of_statement(self) -> None:
        if self.tok.kind not in ("NL", "EOF"):
            raise self.error(f"unexpected {self.describe(self.tok)}", ["end of line"])

    # -- numbers ----------------------------------------------------------

    def integer(self) -> int:
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "INT":
            raise self.error(f"unexpected {self.describe(self.tok)}", ["integer"])
        return sign * int(self.advance().text)

    def rational(self) -> Fraction:
        num = self.integer()
        if self.at("/"):
            self.advance()
            tok = self.tok
            den = self.integer()
            if den == 0:
                raise self.error("zero denominator", tok=tok)
            return Fraction(num, den)
        return Fraction(num)

    def scalar(self) -> RadicalComplex:
        if self.at("coeff"):
            return self.coeff()
        return RadicalComplex(self.rational())

    def coeff(self) -> RadicalComplex:
        self.expect("coeff")
        self.expect("(")
        x = self.rational()
        self.expect(",")
        y = self.rational()
        self.expect(",")
        tok = self.tok
        s = self.rational()
        self.expect(")")
        if s <= 0:
            raise self.error("radicand must be positive", tok=tok)
        return RadicalComplex(x, y, s)

    # -- symbols ----------------------------------------------------------

    SYMBOL_FACTORS = ["coeff", "per", "pow", "poly", "exp", "rational", "symbol name"]

    def symbol(self) -> GrowthSymbol:
        start = self.tok
        coeff = RadicalComplex(1)
        residues: list = [RadicalComplex(1)]
        poly: list = []
        expbase = Fraction(1)
        named: list[GrowthSymbol] = []
        while True:
            t = self.tok
            if self.at("coeff") or t.kind == "INT" or self.at("-"):
                coeff = coeff * self.scalar()
            elif self.at("per"):
                self.advance()
                self.expect("(")
                q = self.integer()
                self.expect(";")
                vals = [self.scalar()]
                while self.at(","):
                    self.advance()
                    vals.append(self.scalar())
                self.expect(")")
                if q < 1 or q != len(vals):
                    raise self.error(f"per({q}; ...) needs exactly {q} values", tok=t)
                lcm_ = len(residues) * q
                residues = [residues[i % len(residues)] * vals[i % q] for i in range(lcm_)]
            elif self.at("pow"):
                self.advance()
                self.expect("(")
                r = self.rational()
                self.expect(",")
                p = self.rational()
                self.expect(")")
                poly.append(((r, 1), p))
            elif self.at("poly"):
                self.advance()
                self.expect("(")
                cs = [self.rational()]
                while self.at(","):
                    self.advance()
                    cs.append(self.rational())
                self.expect(";")
                p = self.rational()
                self.expect(")")
                poly.append((tuple(cs), p))
            elif self.at("exp"):
                self.advance()
                self.expect("(")
                expbase *= self.rational()
                self.expect(")")
            elif t.kind == "NAME" and t.text not in RESERVED:
                if t.text not in self.symbols:
                    raise BindingError(f"unbound symbol name {t.text!r}", t.line, t.col)
                named.append(self.symbols[t.text])
                self.advance()
            else:
                raise self.error(f"unexpected {self.describe(t)}", self.SYMBOL_FACTORS)
            if self.at("*"):
                self.advance()
                continue
            break
        overrides = {}
        if self.at("@"):
            self.advance()
            self.expect("{")
            while not self.at("}"):
                idx = self.integer()
                self.expect(":")
                overrides[idx] = self.scalar()
                if self.at(","):
                    self.advance()
                elif not self.at("}"):
                    raise self.error(f"unexpected {self.describe(self.tok)}", ["','", "'}'"])
            self.expect("}")
        try:
            base = GrowthSymbol.build(self.space, coeff, residues, poly, expbase)
            for other in named:
                base = base * other
            if overrides:
                over = dict(base.overrides)
                over.update(overrides)
                base = GrowthSymbol.build(self.space, base.coeff, base.residues, base.poly,
                                          base.expbase, over)
        except SymbolError as exc:
            raise self.error(str(exc), tok=start) from None
        return base

    # -- expressions ------------------------------------------------------

    EXPR_START = ["diag", "shift", "adj", "cl", "inv", "'('", "operator name"]

    def expr(self) -> Term:
        t = self.product()
        if self.at("on"):
            self.advance()
            cons = [self.dom()]
            while self.at("&"):
                self.advance()
                cons.append(self.dom())
            t = Restrict(t, tuple(cons))
            if isinstance(t.term, Lit):
                t = Lit(t.term.op.restrict(*cons))
        return t

    def dom(self) -> GrowthSymbol:
        self.expect("dom")
        self.expect("(")
        s = self.symbol()
        self.expect(")")
        return s

    def product(self) -> Term:
        t = self.primary()
        while self.at("*"):
            self.advance()
            t = Comp(t, self.primary())
        return t

    def primary(self) -> Term:
        t = self.tok
        if self.at("diag"):
            self.advance()
            self.expect("(")
            sym = self.symbol()
            self.expect(")")
            k = 0
            if self.at("."):
                self.advance()
                self.expect("shift")
                self.expect("(")
                k = self.integer()
                self.expect(")")
            return self._literal(sym, k, t)
        if self.at("shift"):
            self.advance()
            self.expect("(")
            k = self.integer()
            self.expect(")")
            return self._literal(GrowthSymbol.constant(1, self.space), k, t)
        for word, cls in (("adj", Adj), ("cl", Cl), ("inv", Inv)):
            if self.at(word):
                self.advance()
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return cls(inner)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "NAME" and t.text not in RESERVED:
            self.advance()
            if t.text in self.operators or self.free_atoms:
                return Atom(t.text)
            raise BindingError(f"unbound operator name {t.text!r}", t.line, t.col)
        raise self.error(f"unexpected {self.describe(t)}", self.EXPR_START)

    def _literal(self, sym: GrowthSymbol, k: int, tok: Token) -> Lit:
        try:
            return Lit(MonomialOperator.make(sym, k))
        except (SymbolError, OperatorError) as exc:
            raise self.error(str(exc), tok=tok) from None

    # -- facts ------------------------------------------------------------

    def fact(self) -> Fact:
        t = self.expect_name("predicate")
        pred = t.text
        if pred not in ARITY and pred not in SUGAR:
            raise ParseError(f"unknown predicate {pred!r}", t.line, t.col,
                             sorted(ARITY) + sorted(SUGAR))
        self.expect("(")
        args = [self.expr()]
        while self.at(","):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        try:
            return make_fact(pred, *args)
        except FactError as exc:
            raise ParseError(str(exc), t.line, t.col) from None

    # -- statements -------------------------------------------------------

    def program(self) -> Program:
        prog = Program(self.space)
        seen_space = False
        self.skip_newlines()
        while self.tok.kind != "EOF":
            line = self.tok.line
            node = self.statement(prog, seen_space)
            if isinstance(node, SpaceDecl):
                seen_space = True
            prog.statements.append(Statement(node, line))
            self.end_of_statement()
            self.skip_newlines()
        prog.space = self.space
        prog.symbols = dict(self.symbols)
        prog.operators = dict(self.operators)
        return prog

    def statement(self, prog: Program, seen_space: bool):
        t = self.tok
        if t.kind != "NAME" or t.text not in STATEMENT_KEYWORDS:
            raise self.error(f"unexpected {self.describe(t)}", STATEMENT_KEYWORDS)
        word = self.advance().text
        if word == "space":
            if seen_space or prog.statements:
                raise ParseError("space must be declared once, before other statements",
                                 t.line, t.col)
            v = self.expect_name("unilateral or bilateral")
            if v.text not in ("unilateral", "bilateral"):
                raise ParseError(f"unknown space {v.text!r}", v.line, v.col,
                                 ["unilateral", "bilateral"])
            self.space = Space(v.text)
            return SpaceDecl(self.space)
        if word == "sym":
            name = self.expect_name("symbol name")
            self.expect("=")
            sym = self.symbol()
            self.symbols[name.text] = sym
            return SymDef(name.text, sym)
        if word == "op":
            name = self.expect_name("operator name")
            if name.text in RESERVED:
                raise ParseError(f"{name.text!r} is reserved", name.line, name.col)
            self.expect("=")
            term = normalize(self.bound_expr())
            self.operators[name.text] = term
            return OpDef(name.text, term)
        if word in QUERY_KINDS:
            return self.query(word)
        if word in ("assume", "explain"):
            # facts may mention abstract atoms that no op statement binds
            saved = self.free_atoms
            self.free_atoms = True
            try:
                f = self.fact()
            finally:
                self.free_atoms = saved
            return Assume(f) if word == "assume" else Explain(f)
        if word == "derive":
            conj, depth = False, None
            while self.tok.kind == "FLAG":
                f = self.advance()
                if f.text == "--conjectural":
                    conj = True
                elif f.text == "--depth":
                    depth = self.integer()
                else:
                    raise ParseError(f"unknown flag {f.text!r}", f.line, f.col,
                                     ["--conjectural", "--depth"])
            return Derive(conj, depth)
        return self.expect_stmt()

    def bound_expr(self) -> Term:
        saved = self.free_atoms
        self.free_atoms = False
        try:
            return self.expr()
        finally:
            self.free_atoms = saved

    def query(self, kind: str) -> Query:
        if kind == "cmp":
            a = self.bound_expr()
            if self.at(","):
                self.advance()
            b = self.bound_expr()
            return Query("cmp", (normalize(a), normalize(b)))
        term = normalize(self.bound_expr())
        if kind != "matrix":
            return Query(kind, (term,))
        n, mode = None, None
        if self.tok.kind == "INT":
            n = int(self.advance().text)
        if self.at("exact") or self.at("float"):
            mode = self.advance().text
        return Query("matrix", (term,), n, mode)

    def expect_stmt(self) -> Expect:
        if self.at("cmp"):
            self.advance()
            a = self.bound_expr()
            if self.at(","):
                self.advance()
            b = self.bound_expr()
            self.expect("=")
            v = self.verdict_word()
            return Expect("cmp", (normalize(a), normalize(b)), v)
        if self.at("state"):
            self.advance()
            a = normalize(self.bound_expr())
            self.expect("=")
            tok = self.tok
            words = []
            while self.tok.kind in ("NAME", "INT"):
                words.append(self.advance().text)
            try:
                st = parse_state(" ".join(words))
            except (StopIteration, ValueError):
                raise ParseError("malformed state (e.g. III_1 I_3)", tok.line, tok.col) from None
            return Expect("state", (a,), str(st))
        saved = self.free_atoms
        self.free_atoms = False
        try:
            f = self.fact()
        finally:
            self.free_atoms = saved
        self.expect("=")
        v = self.expect_name("true or false")
        if v.text not in ("true", "false"):
            raise ParseError(f"unexpected {v.text!r}", v.line, v.col, ["true", "false"])
        return Expect("fact", (f,), v.text)

    def verdict_word(self) -> str:
        tok = self.tok
        parts = [self.expect_name("verdict").text]
        while self.at("-"):
            self.advance()
            parts.append(self.expect_name("verdict").text)
        word = "-".join(parts)
        if word not in VERDICTS:
            raise ParseError(f"unknown verdict {word!r}", tok.line, tok.col, VERDICTS)
        return word


# -- entry points -----------------------------------------------------------


def parse_program(text: str) -> Program:
    return Parser(text, free_atoms=False).program()


def parse_symbol(text: str, space: Space | str = Space.UNILATERAL,
                 symbols: dict | None = None) -> GrowthSymbol:
    p = Parser(text, space, symbols=symbols)
    s = p.symbol()
    p.skip_newlines()
    if p.tok.kind != "EOF":
        raise p.error(f"unexpected {p.describe(p.tok)}", ["end of input"])
    return s


def parse_term(text: str, space: Space | str = Space.UNILATERAL) -> Term:
    p = Parser(text, space)
    t = p.expr()
    p.skip_newlines()
    if p.tok.kind != "EOF":
        raise p.error(f"unexpected {p.describe(p.tok)}", ["end of input", "'*'", "'on'"])
    return normalize(t)


def parse_fact(text: str, space: Space | str = Space.UNILATERAL) -> Fact:
    p = Parser(text, space)
    f = p.fact()
    p.skip_newlines()
    if p.tok.kind != "EOF":
        raise p.error(f"unexpected {p.describe(p.tok)}", ["end of input"])
    return f


def print_program(prog: Program) -> str:
    return str(prog)
