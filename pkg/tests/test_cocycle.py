from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from metaplectic.cocycle import (
    C_bar,
    C_bar_quotient,
    C_dbar,
    C_dbar_tilde,
    C_tilde,
    c_bar,
    c_tilde,
    cocycle_identity_failures,
    conjugate,
    gamma2pm_obstruction,
    gamma2pm_obstruction_closed,
    j_bar,
    m_normalizer,
    nu,
    nu2,
    nu2_quotient,
    s_bar,
    s_tilde,
    so2pm_obstruction,
    u_func,
    u_prime,
)
from metaplectic.group import (
    H_MINUS,
    N2,
    N2_MINUS,
    NEG_I,
    OMEGA,
    GroupElement,
    h,
    identity,
    iwasawa,
    mat,
    mobius,
    rotation,
    section,
    u_minus,
)
from metaplectic.sampling import random_gamma2, random_sl2, random_sl2pm
from metaplectic.scalar import ONE, DomainError, ExactPhase, hilbert

from .conftest import nonzero_rationals, sl2_elements, sl2pm_elements, upper_positive

E = ExactPhase
angles = st.floats(-3.14, 3.14)


def off_axis(*thetas: float) -> bool:
    """u is discontinuous at multiples of pi; stay clear of them."""
    return all(abs(math.sin(t)) > 1e-6 for t in thetas)


class TestExamples:
    def test_c_tilde(self):
        assert c_tilde(u_minus(1), u_minus(1)) == E(Fraction(1, 4))
        assert c_tilde(N2, OMEGA) == ONE
        assert c_tilde(OMEGA, OMEGA) == ONE

    def test_c_bar(self):
        assert c_bar(NEG_I, NEG_I) == E(1)
        assert c_bar(OMEGA, OMEGA) == E(1)
        for n in (1, 2, 7):
            assert c_bar(NEG_I, mat(-1, 0, Fraction(1, n), -1)) == ONE

    def test_m_normalizer(self):
        assert m_normalizer(identity()) == ONE
        assert m_normalizer(NEG_I) == E(Fraction(1, 2))
        assert m_normalizer(OMEGA) == E(Fraction(-1, 4))

    def test_nu(self):
        assert nu(1, OMEGA) == ONE and nu(1, h(-3)) == ONE
        assert nu(-1, OMEGA) == E(Fraction(1, 2))
        assert nu(-1, h(-1)) == E(1)
        assert nu2(-1, OMEGA) == ONE and nu2(-1, h(-1)) == E(1) and nu2(1, h(-1)) == ONE

    def test_C_tilde(self):
        minus = mat(-1, 0, 0, 1)
        assert C_tilde(minus, minus) == E(1)
        assert C_tilde(OMEGA, N2_MINUS) == c_tilde(OMEGA, N2_MINUS)

    def test_singular_and_non_sl2_rejected(self):
        with pytest.raises(DomainError):
            c_tilde(H_MINUS, OMEGA)
        with pytest.raises(DomainError):
            C_bar(mat(1, 0, 0, 0), OMEGA)


class TestCocycleIdentity:
    def test_sl2_sweep(self):
        rng = random.Random(11)
        triples = [(random_sl2(rng), random_sl2(rng), random_sl2(rng)) for _ in range(2000)]
        assert not cocycle_identity_failures(c_tilde, triples)
        assert not cocycle_identity_failures(c_bar, triples)

    def test_sl2pm_sweep(self):
        rng = random.Random(12)
        triples = [(random_sl2pm(rng), random_sl2pm(rng), random_sl2pm(rng)) for _ in range(2000)]
        assert any(t[0].det == -1 for t in triples) and any(t[0].det == 1 for t in triples)
        assert not cocycle_identity_failures(C_tilde, triples)
        assert not cocycle_identity_failures(C_bar, triples)

    def test_negative_control(self):
        def broken(g1: GroupElement, g2: GroupElement) -> ExactPhase:
            return c_tilde(g1, g2) * (E(1) if g1.c > 0 else ONE)

        rng = random.Random(13)
        triples = [(random_sl2(rng), random_sl2(rng), random_sl2(rng)) for _ in range(300)]
        assert cocycle_identity_failures(broken, triples)


class TestRelations:
    @given(sl2pm_elements(), sl2pm_elements())
    def test_C_bar_two_ways(self, h1, h2):
        assert C_bar(h1, h2) == C_bar_quotient(h1, h2)

    @given(sl2_elements(), st.sampled_from((1, -1)))
    def test_nu2_two_ways(self, g, y):
        assert nu2(y, g) == nu2_quotient(y, g)

    @given(sl2_elements(), st.sampled_from((1, -1)), st.sampled_from((1, -1)))
    def test_nu_composition(self, g, y1, y2):
        assert nu(y1 * y2, g) == nu(y1, g) * nu(y2, conjugate(g, y1))

    @given(sl2_elements(), sl2_elements(), sl2_elements())
    def test_inner_automorphism_twist(self, hh, g1, g2):
        def twist(g: GroupElement) -> ExactPhase:
            return c_tilde(hh.inverse(), g @ hh) * c_tilde(g, hh)

        def conj(g: GroupElement) -> GroupElement:
            return hh.inverse() @ g @ hh

        # c(a(g1), a(g2)) = nu(g1)^-1 nu(g2)^-1 nu(g1 g2) c(g1, g2) for a = conjugation by h
        lhs = c_tilde(conj(g1), conj(g2))
        rhs = twist(g1 @ g2) / (twist(g1) * twist(g2)) * c_tilde(g1, g2)
        assert lhs == rhs

    @given(sl2pm_elements(), st.fractions(min_value=Fraction(1, 5), max_value=5, max_denominator=5))
    def test_central_triviality(self, g, y):
        scalar = mat(y, 0, 0, y)
        for value in (C_tilde(scalar, g), C_tilde(g, scalar), C_bar(scalar, g), C_bar(g, scalar)):
            assert value == ONE

    @given(nonzero_rationals, nonzero_rationals)
    def test_f2_triviality(self, y1, y2):
        assert C_tilde(section(y1), section(y2)) == ONE

    @given(upper_positive(), sl2pm_elements())
    def test_parabolic_on_the_left(self, p, g):
        assert C_tilde(p, g) == ONE
        assert C_bar(p, g) == ONE

    @given(sl2pm_elements(), upper_positive())
    def test_parabolic_on_the_right(self, g, p):
        expected = ONE if g.c != 0 else E.from_sign(hilbert(p.det, g.a))
        assert C_bar(g, p) == expected


class TestSO2:
    def test_u_function(self):
        assert u_func(0) == 0 and u_prime(0) == 0
        assert u_func(math.pi / 2) == 1 and u_prime(math.pi / 2) == 2

    @given(angles)
    def test_u_prime_shift(self, theta):
        # theta + pi must not round onto a multiple of pi
        assume(abs(theta) > 1e-9)
        assert abs(u_prime(theta + math.pi) - u_prime(theta) - 4) < 1e-9

    def test_s_examples(self):
        k = rotation(math.pi / 2)
        assert abs(s_tilde(k) - 1j) < 1e-15 and abs(s_bar(k) - cmath.exp(1j * math.pi / 4)) < 1e-15
        assert s_tilde(identity()) == 1 and s_bar(identity()) == 1
        assert abs(s_tilde(h(-1)) + 1) < 1e-15

    @given(angles, angles)
    def test_rotations_split(self, t1, t2):
        assume(off_axis(t1, t2, t1 + t2))
        k1, k2 = rotation(t1), rotation(t2)
        k12 = k1 @ k2
        assert abs(complex(c_tilde(k1, k2)) - s_tilde(k12) / (s_tilde(k1) * s_tilde(k2))) < 1e-10
        assert abs(complex(c_bar(k1, k2)) - s_bar(k12) / (s_bar(k1) * s_bar(k2))) < 1e-10

    @given(upper_positive(), sl2pm_elements(), angles)
    def test_double_bar_trivial(self, p, g, t):
        k = rotation(t)
        # keep g k off the branch cut at angle pi, where rounding flips s_bar
        assume(math.pi - abs(iwasawa(g @ k).theta) > 1e-9)
        assert abs(C_dbar(p, g) - 1) < 1e-10
        assert abs(C_dbar(g, k) - 1) < 1e-10
        assert abs(C_dbar(rotation(t), rotation(-t / 3)) - 1) < 1e-10

    @given(sl2_elements())
    def test_double_bar_two_constructions(self, g):
        pair = iwasawa(g)
        assert abs(C_dbar(pair.p, pair.k) - C_dbar_tilde(pair.p, pair.k)) < 1e-10


class TestJBar:
    def test_examples(self):
        assert abs(j_bar(N2, 0.3 + 2j) - 1) < 1e-12
        assert abs(j_bar(rotation(0.7), 1j) - 1) < 1e-12

    @given(sl2pm_elements(), sl2pm_elements(), st.complex_numbers(max_magnitude=3).filter(lambda z: abs(z.imag) > 0.1))
    def test_coboundary(self, g1, g2, z):
        w = mobius(g2, z)
        expected = j_bar(g1, w) * j_bar(g2, z) / j_bar(g1 @ g2, z)
        assert abs(C_dbar(g1, g2) - expected) < 1e-10


class TestObstructions:
    def test_so2pm_examples(self):
        assert abs(so2pm_obstruction(0) - 1) < 1e-15
        assert so2pm_obstruction(math.pi) == -1
        assert abs(so2pm_obstruction(math.pi / 3) - cmath.exp(1j * math.pi / 3)) < 1e-12
        with pytest.raises(DomainError):
            so2pm_obstruction(4.0)

    def test_gamma2pm_examples(self):
        assert gamma2pm_obstruction(N2) == ONE
        assert gamma2pm_obstruction(N2_MINUS) == ONE
        g = mat(-1, 0, -2, -1)
        assert gamma2pm_obstruction(g) == E(1) == gamma2pm_obstruction_closed(g)

    def test_gamma2pm_closed_form(self):
        rng = random.Random(5)
        for _ in range(300):
            g = random_gamma2(rng)
            assert gamma2pm_obstruction(g) == gamma2pm_obstruction_closed(g)
