from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from metaplectic.group import GroupElement, h, section, u, u_minus


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)


nonzero_ints = st.integers(-40, 40).filter(bool)
rationals = st.fractions(min_value=-8, max_value=8, max_denominator=12)
nonzero_rationals = rationals.filter(bool)
signs = st.sampled_from((1, -1))


@st.composite
def sl2_elements(draw, max_len: int = 4) -> GroupElement:
    g = GroupElement(1, 0, 0, 1)
    for _ in range(draw(st.integers(0, max_len))):
        kind = draw(st.sampled_from("ulhw"))
        if kind == "u":
            g = g @ u(draw(rationals))
        elif kind == "l":
            g = g @ u_minus(draw(rationals))
        elif kind == "h":
            g = g @ h(draw(nonzero_rationals))
        else:
            g = g @ GroupElement(0, -1, 1, 0)
    return g


@st.composite
def sl2pm_elements(draw, max_len: int = 4) -> GroupElement:
    g = draw(sl2_elements(max_len))
    return section(-1) @ g if draw(st.booleans()) else g


@st.composite
def upper_positive(draw) -> GroupElement:
    """An element of P^+- with positive upper-left corner."""
    a = draw(st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=8))
    b = draw(rationals)
    det = draw(signs)
    return GroupElement(a, b, 0, det / a)
