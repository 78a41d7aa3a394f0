import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from opcalc.dsl import parse_symbol, parse_term
from opcalc.generate import random_operator, random_symbol
from opcalc.sequences import Space
from opcalc.terms import evaluate

settings.register_profile(
    "opcalc", deadline=None, max_examples=60, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("opcalc")

UNI, BI = Space.UNILATERAL, Space.BILATERAL

seeds = st.integers(min_value=0, max_value=2**32 - 1)
spaces = st.sampled_from([UNI, BI])
symbols = st.builds(lambda s, sp: random_symbol(random.Random(s), sp), seeds, spaces)
operators = st.builds(lambda s, sp: random_operator(random.Random(s), sp), seeds, spaces)


@st.composite
def symbol_pairs(draw):
    sp = draw(spaces)
    rng = random.Random(draw(seeds))
    return random_symbol(rng, sp), random_symbol(rng, sp)


@st.composite
def operator_pairs(draw):
    sp = draw(spaces)
    rng = random.Random(draw(seeds))
    return random_operator(rng, sp), random_operator(rng, sp)


def op(text, space=UNI):
    """Operator from an expression literal."""
    return evaluate(parse_term(text, space), {})


def sym(text, space=UNI):
    return parse_symbol(text, space)


@pytest.fixture
def ex1():
    return op("diag(poly(1,0,1; 1))"), op("diag(poly(1,0,1; -1))")
