"""Range / inverse state classification of a closed operator and its adjoint.

Range class: I when R(T) is the whole space, II when it is dense but not
closed, III when its closure is a proper subspace.  Inverse class: 1 when T is
injective with bounded inverse on its range, 2 when injective with unbounded
inverse, 3 when T has a kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

from .operators import MonomialOperator, is_closed, op_adjoint, op_closure
from .sequences import classify


class StateTableViolation(AssertionError):
    """A classification fell outside the allowed tables (a model bug)."""


@dataclass(frozen=True, order=True)
class StateClass:
    t_range: str
    t_inverse: int
    tstar_range: str
    tstar_inverse: int

    def code(self) -> str:
        return f"{self.t_range}{self.t_inverse}{self.tstar_range}{self.tstar_inverse}"

    def __str__(self) -> str:
        return f"{self.t_range}_{self.t_inverse} {self.tstar_range}_{self.tstar_inverse}"


def _state(code: str) -> StateClass:
    # codes like "III1I3": range letters, digit, range letters, digit
    i = next(k for k, ch in enumerate(code) if ch.isdigit())
    j = next(k for k, ch in enumerate(code[i + 1:], i + 1) if ch.isdigit())
    return StateClass(code[:i], int(code[i]), code[i + 1:j], int(code[j]))


# For closed densely defined T: N(T*) is the orthogonal complement of R(T), and
# R(T) is closed iff R(T*) is closed, iff the reduced inverse is bounded.  The
# pairs consistent with both facts are exactly these seven.
CLOSED_STATES = frozenset(_state(c) for c in (
    "I1I1", "I3III1", "II2II2", "II3III2", "III1I3", "III2II3", "III3III3",
))

SELFADJOINT_STATES = frozenset(_state(c) for c in ("I1I1", "II2II2", "III3III3"))

# closed and injective
INJECTIVE_STATES = frozenset(_state(c) for c in ("I1I1", "II2II2", "III1I3", "III2II3"))


def range_class(T: MonomialOperator) -> str:
    T = op_closure(T)
    a = classify(T.symbol)
    if not a.zero_set.is_empty():
        return "III"
    return "I" if a.inf_positive else "II"


def inverse_class(T: MonomialOperator) -> int:
    T = op_closure(T)
    w = classify(T.weight)
    if not w.zero_set.is_empty():
        return 3
    return 1 if w.inf_positive else 2


@dataclass(frozen=True)
class StateReport:
    state: StateClass
    from_closure: bool

    def __str__(self) -> str:
        return str(self.state) + (" (of the closure)" if self.from_closure else "")


def state_classify(T: MonomialOperator) -> StateReport:
    flagged = not is_closed(T)
    C = op_closure(T)
    Ts = op_adjoint(C)
    state = StateClass(range_class(C), inverse_class(C), range_class(Ts), inverse_class(Ts))
    if state not in CLOSED_STATES:
        raise StateTableViolation(f"state {state} of {T} is outside the allowed table")
    if state.t_inverse != 3 and state not in INJECTIVE_STATES:
        raise StateTableViolation(f"injective operator {T} in state {state}")
    return StateReport(state, flagged)


def parse_state(text: str) -> StateClass:
    """Accepts "III_1 I_3" or "III1I3"."""
    return _state(text.replace("_", "").replace(" ", ""))
