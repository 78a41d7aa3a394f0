"""Command line entry point.

    opcalc check FILE              run a script's queries and expectations
    opcalc catalog [--json PATH]   run the witness catalog
    opcalc infer FILE              saturate a facts file
    opcalc matrix EXPR             print a truncated matrix
    opcalc state EXPR              print the range/inverse state of an operator

Exit status: 0 when every expectation holds, 1 when one fails, 2 on usage,
parse or evaluation errors.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .catalog import catalog, run_catalog
from .dsl import (Assume, Derive, Expect, Explain, OpDef, ParseError, Program, Query,
                  parse_program, parse_term)
from .engine import InferenceError, explain, infer_fixpoint
from .operators import PROPERTY_TESTS, OperatorError, op_polar
from .oracle import WindowError, matrix_of
from .semantics import Model
from .sequences import Space, SymbolError
from .states import parse_state, state_classify
from .terms import D_MAX, DepthOverflow, UnboundName, evaluate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- formatting -------------------------------------------------------------


def _value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if v == float("inf"):
        return "inf"
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


def _float_text(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def matrix_lines(M, fmt: str = "text") -> list[str]:
    idx = M.window.indices
    rows = []
    for j in idx:
        cells = []
        for i in idx:
            v = M.entry(j, i)
            cells.append(str(v) if M.mode == "exact" else _float_text(v))
        rows.append(cells)
    if fmt == "csv":
        return [",".join(f'"{c}"' if "," in c else c for c in row) for row in rows]
    width = max((len(c) for row in rows for c in row), default=1)
    return [" ".join(c.rjust(width) for c in row) for row in rows]


def _fact_lines(fx, facts) -> list[str]:
    return [f"{f}  [{fx.derivations[f].rule}]" for f in facts]


def derivation_lines(fx, plain=None) -> list[str]:
    """Derived facts sorted canonically; facts that need a CONJECTURAL rule
    (absent from `plain`) are listed in their own section."""
    derived = fx.derived()
    if plain is None:
        return _fact_lines(fx, derived)
    main = [f for f in derived if f in plain]
    conj = [f for f in derived if f not in plain]
    lines = _fact_lines(fx, main)
    lines.append("conjectural:")
    lines.extend("  " + s for s in _fact_lines(fx, conj))
    return lines


# -- scripts ----------------------------------------------------------------


class ScriptRun:
    """Executes a parsed program statement by statement."""

    def __init__(self, prog: Program, *, conjectural: bool = False, depth: int | None = None):
        self.prog = prog
        self.conjectural = conjectural
        self.depth = depth
        self.env: dict = {}
        self.model = Model({})
        self.assumed: list = []
        self.fixpoint = None
        self.failures = 0
        self.lines: list[str] = []

    def emit(self, text: str) -> None:
        self.lines.append(text)

    def run(self) -> list[str]:
        for st in self.prog.statements:
            node = st.node
            try:
                self.step(node)
            except (OperatorError, SymbolError, WindowError, UnboundName, DepthOverflow,
                    InferenceError) as exc:
                raise UsageError(f"line {st.line}: {exc}") from None
        return self.lines

    def step(self, node) -> None:
        if isinstance(node, OpDef):
            self.env[node.name] = evaluate(node.term, self.env)
            self.model = Model(self.env)
        elif isinstance(node, Query):
            self.query(node)
        elif isinstance(node, Expect):
            self.expect(node)
        elif isinstance(node, Assume):
            self.assumed.append(node.fact)
            self.fixpoint = None
        elif isinstance(node, Derive):
            self.derive(node.conjectural or self.conjectural, node.depth or self.depth)
        elif isinstance(node, Explain):
            if self.fixpoint is None:
                self.fixpoint = self._saturate(self.conjectural, self.depth)
            self.emit(explain(node.fact, self.fixpoint))

    def _saturate(self, conjectural: bool, depth: int | None):
        return infer_fixpoint(self.assumed, d_max=depth or D_MAX, conjectural=conjectural)

    def derive(self, conjectural: bool, depth: int | None) -> None:
        fx = self._saturate(conjectural, depth)
        self.fixpoint = fx
        plain = self._saturate(False, depth).facts if conjectural else None
        self.lines.extend(derivation_lines(fx, plain))
        if fx.truncated:
            print(f"note: {len(fx.truncated)} facts exceeded the depth bound", file=sys.stderr)

    def query(self, q: Query) -> None:
        m = self.model
        if q.kind == "cmp":
            cmp = m.compare(*q.terms)
            self.emit(str(cmp.verdict))
            if cmp.witness is not None:
                vec = ", ".join(f"{n}: {v}" for n, v in cmp.witness.vector(6))
                self.emit(f"  witness x = {{{vec}, ...}}")
            return
        T = m.op(q.terms[0])
        if q.kind == "props":
            for name in PROPERTY_TESTS:
                self.emit(f"{name}: {_value(m.property(q.terms[0], name))}")
        elif q.kind == "state":
            self.emit(str(state_classify(T)))
        elif q.kind == "polar":
            pol = op_polar(T)
            self.emit(f"W = {pol.partial_isometry}")
            self.emit(f"|T| = {pol.modulus}")
        elif q.kind == "matrix":
            M = matrix_of(q.terms[0], q.n or 8, q.mode or "exact", self.env)
            self.lines.extend(matrix_lines(M))

    def expect(self, e: Expect) -> None:
        m = self.model
        if e.kind == "cmp":
            got = str(m.compare(*e.subject).verdict)
        elif e.kind == "state":
            got = str(state_classify(m.op(e.subject[0])).state)
            ok = parse_state(got) == parse_state(e.value)
            self._verdict(e, got, ok)
            return
        else:
            v = m.truth(e.subject[0]).value
            got = "opaque" if v is None else str(v).lower()
        self._verdict(e, got, got == e.value)

    def _verdict(self, e: Expect, got: str, ok: bool) -> None:
        if ok:
            self.emit(f"PASS {e}")
        else:
            self.failures += 1
            self.emit(f"FAIL {e}  (got {got})")


# -- commands ---------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _parse(path: str) -> Program:
    text = _read(path)
    try:
        return parse_program(text)
    except ParseError as exc:
        raise UsageError(f"{path}:{exc}") from None


def cmd_check(args) -> int:
    run = ScriptRun(_parse(args.file), conjectural=args.conjectural, depth=args.depth)
    lines = run.run()
    sys.stdout.write("".join(line + "\n" for line in lines))
    return EXIT_FAIL if run.failures else EXIT_OK


def cmd_infer(args) -> int:
    prog = _parse(args.file)
    run = ScriptRun(prog, conjectural=args.conjectural, depth=args.depth)
    lines = run.run()
    if not any(isinstance(s.node, Derive) for s in prog.statements):
        # a bare facts file: saturate once at the end
        run.lines = []
        run.derive(args.conjectural, args.depth)
        lines = lines + run.lines
    sys.stdout.write("".join(line + "\n" for line in lines))
    return EXIT_FAIL if run.failures else EXIT_OK


def cmd_catalog(args) -> int:
    report = run_catalog(catalog(args.seed), conjectural=args.conjectural)
    if args.json:
        if args.json == "-":
            sys.stdout.write(report.dumps())
        else:
            Path(args.json).write_text(report.dumps(), encoding="utf-8")
            sys.stdout.write(report.render())
    else:
        sys.stdout.write(report.render())
    return EXIT_FAIL if report.failed else EXIT_OK


def _expr(args):
    try:
        term = parse_term(args.expr, args.space)
    except ParseError as exc:
        raise UsageError(f"expression:{exc}") from None
    return term


def cmd_matrix(args) -> int:
    term = _expr(args)
    try:
        M = matrix_of(term, args.n, args.mode)
    except (WindowError, OperatorError, UnboundName) as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write("".join(line + "\n" for line in matrix_lines(M, args.format)))
    return EXIT_OK


def cmd_state(args) -> int:
    term = _expr(args)
    try:
        report = state_classify(evaluate(term, {}))
    except (OperatorError, UnboundName) as exc:
        raise UsageError(str(exc)) from None
    print(report.state)
    if report.from_closure:
        print("note: the operator is not closed; its closure was classified", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opcalc",
                                     description="Exact calculus of monomial operators on l2.")
    sub = parser.add_subparsers(dest="command", required=True)

    def inference_flags(p):
        p.add_argument("--conjectural", action="store_true",
                       help="also apply rules that are stated without proof")
        p.add_argument("--depth", type=int, default=None, help=f"term depth bound (default {D_MAX})")

    p = sub.add_parser("check", help="run a script")
    p.add_argument("file")
    inference_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("infer", help="derive facts from a facts file")
    p.add_argument("file")
    inference_flags(p)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("catalog", help="run the witness catalog")
    p.add_argument("--json", metavar="PATH", help="write the machine-readable report ('-' for stdout)")
    p.add_argument("--conjectural", action="store_true", help="include entries for conjectural rules")
    p.add_argument("--seed", type=int, default=0, help="seed for randomly drawn witnesses")
    p.set_defaults(func=cmd_catalog)

    spaces = [s.value for s in Space]
    p = sub.add_parser("matrix", help="truncated matrix of an expression")
    p.add_argument("expr")
    p.add_argument("--n", type=int, default=8, help="window size (bilateral: indices -n..n)")
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--space", choices=spaces, default="unilateral")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("state", help="range/inverse state of an operator and its adjoint")
    p.add_argument("expr")
    p.add_argument("--space", choices=spaces, default="unilateral")
    p.set_defaults(func=cmd_state)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"opcalc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
