"""Rank-one metaplectic 2-cocycles and their twists.

Exact functions (``c_tilde``, ``c_bar``, ``m_normalizer``, ``nu``, ``nu2``,
``C_tilde``, ``C_bar``) only look at signs of matrix entries and return
``ExactPhase`` values. The SO(2) trivializations and everything built on them
(``s_tilde``, ``s_bar``, ``C_dbar``, ``j_bar``) are complex doubles.

Elements of SL2^+- are factored as h = s(y) g with s(y) = diag(1, y) and
y = det h.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable, Iterable

from .group import (
    GroupElement,
    MembershipError,
    dot_sign,
    iwasawa,
    point_to_parabolic,
    rotation,
    rotation_angle,
    section,
    x_invariant,
)
from .scalar import ONE, DomainError, ExactPhase, gamma_ratio, hilbert, sgn

__all__ = [
    "factor",
    "conjugate",
    "c_tilde",
    "c_bar",
    "m_normalizer",
    "m_extended",
    "nu",
    "nu2",
    "nu2_quotient",
    "C_tilde",
    "C_bar",
    "C_bar_quotient",
    "u_func",
    "u_prime",
    "s_tilde",
    "s_bar",
    "C_dbar",
    "C_dbar_tilde",
    "j_bar",
    "so2pm_obstruction",
    "gamma2pm_obstruction",
    "gamma2pm_obstruction_closed",
    "cocycle_identity_failures",
]

_HALF = Fraction(1, 2)


def _require_sl2(*gs: GroupElement) -> None:
    for g in gs:
        if g.exact and g.det != 1:
            raise DomainError(f"expected determinant 1: {g}")


def _det_sign(h: GroupElement) -> int:
    y = sgn(h.det)
    if y == 0:
        raise DomainError(f"singular matrix: {h}")
    return y


def factor(h: GroupElement) -> tuple[int, GroupElement]:
    """h = s(y) g with y = sgn(det h) and det g > 0."""
    y = _det_sign(h)
    if y == 1:
        return 1, h
    return -1, GroupElement(h.a, h.b, -h.c, -h.d)


def conjugate(g: GroupElement, y: int) -> GroupElement:
    """g^y = s(y)^-1 g s(y) for y = +-1."""
    if y == 1:
        return g
    return GroupElement(g.a, -g.b, -g.c, g.d)


_EIGHTHS = {k: ExactPhase(Fraction(k, 4)) for k in (-1, 0, 1)}


def c_tilde(g1: GroupElement, g2: GroupElement) -> ExactPhase:
    """The mu_8-valued cocycle exp(i pi sgn(c1 c2 c3)/4), c3 from g1 g2."""
    _require_sl2(g1, g2)
    return _c_tilde(g1, g2)


def _c_tilde(g1: GroupElement, g2: GroupElement) -> ExactPhase:
    s = sgn(g1.c) * sgn(g2.c)
    if s == 0:
        return ONE
    return _EIGHTHS[s * dot_sign(g1.c, g2.a, g1.d, g2.c)]


def c_bar(g1: GroupElement, g2: GroupElement) -> ExactPhase:
    """The mu_2-valued cocycle (x1, x2)(-x1 x2, x3)."""
    _require_sl2(g1, g2)
    return _c_bar(g1, g2)


def _c_bar(g1: GroupElement, g2: GroupElement) -> ExactPhase:
    x1, x2 = x_invariant(g1), x_invariant(g2)
    x3 = dot_sign(g1.c, g2.a, g1.d, g2.c) or dot_sign(g1.c, g2.b, g1.d, g2.d)
    return ExactPhase.from_sign(hilbert(x1, x2) * hilbert(-x1 * x2, x3))


def m_normalizer(g: GroupElement) -> ExactPhase:
    """exp(i pi (1 - sgn d)/4) if c = 0, else exp(-i pi sgn(c)/4)."""
    if g.c == 0:
        return ExactPhase(Fraction(1 - sgn(g.d), 4))
    return ExactPhase(Fraction(-sgn(g.c), 4))


def m_extended(h: GroupElement) -> ExactPhase:
    """m on SL2^+-, evaluated on the SL2 factor of h = s(y) g."""
    return m_normalizer(factor(h)[1])


def _check_y(y: int) -> None:
    if y not in (1, -1):
        raise DomainError(f"expected a sign: {y!r}")


def nu(y: int, g: GroupElement) -> ExactPhase:
    """Twisting function of conjugation by s(y) on SL2."""
    _check_y(y)
    if g.c == 0:
        return ExactPhase.from_sign(hilbert(y, g.a))
    return ExactPhase.from_sign(hilbert(g.c, y)) / gamma_ratio(y, _HALF)


def nu2(y: int, g: GroupElement) -> ExactPhase:
    """The mu_2-valued twist: (y, a) if c = 0, else 1."""
    _check_y(y)
    if g.c == 0:
        return ExactPhase.from_sign(hilbert(y, g.a))
    return ONE


def nu2_quotient(y: int, g: GroupElement) -> ExactPhase:
    """nu2 recomputed as nu(y, g) m(g) / m(g^y)."""
    return nu(y, g) * m_normalizer(g) / m_normalizer(conjugate(g, y))


def C_tilde(h1: GroupElement, h2: GroupElement) -> ExactPhase:
    """Extension of c_tilde to SL2^+-: nu(y2, g1) c_tilde(g1^y2, g2)."""
    _, g1 = factor(h1)
    y2, g2 = factor(h2)
    return nu(y2, g1) * _c_tilde(conjugate(g1, y2), g2)


def C_bar(h1: GroupElement, h2: GroupElement) -> ExactPhase:
    """Extension of c_bar to SL2^+-: nu2(y2, g1) c_bar(g1^y2, g2)."""
    _, g1 = factor(h1)
    y2, g2 = factor(h2)
    return nu2(y2, g1) * _c_bar(conjugate(g1, y2), g2)


def C_bar_quotient(h1: GroupElement, h2: GroupElement) -> ExactPhase:
    """C_bar as m(g1^y2 g2)^-1 m(g1) m(g2) C_tilde(h1, h2)."""
    _, g1 = factor(h1)
    y2, g2 = factor(h2)
    g3 = conjugate(g1, y2) @ g2
    return m_normalizer(g1) * m_normalizer(g2) / m_normalizer(g3) * C_tilde(h1, h2)


# --- SO(2) trivializations -------------------------------------------------


def u_func(theta: float) -> int:
    """2k if theta = k pi, 2k + 1 if k pi < theta < (k + 1) pi."""
    ratio = theta / math.pi
    k = math.floor(ratio)
    return 2 * k if ratio == k else 2 * k + 1


def u_prime(theta: float) -> float:
    return u_func(theta) + 2 * theta / math.pi


def _angle(g: GroupElement) -> float:
    if g.exact and g.det == 1 and g.a * g.a + g.b * g.b == 1 and g.a == g.d and g.b == -g.c:
        return rotation_angle(g)
    return iwasawa(g).theta


def s_tilde(g: GroupElement) -> complex:
    """exp(i pi u'(theta)/4) for theta the angle of the rotation factor k_g."""
    return cmath.exp(1j * math.pi * u_prime(_angle(g)) / 4)


def s_bar(g: GroupElement) -> complex:
    """exp(i theta/2) for theta the angle of the rotation factor k_g."""
    return cmath.exp(0.5j * _angle(g))


def C_dbar(g1: GroupElement, g2: GroupElement) -> complex:
    """C_bar(g1, g2) s_bar(g1) s_bar(g2) / s_bar(g1 g2)."""
    return complex(C_bar(g1, g2)) * s_bar(g1) * s_bar(g2) / s_bar(g1 @ g2)


def C_dbar_tilde(g1: GroupElement, g2: GroupElement) -> complex:
    """The same cocycle built from C_tilde and s_tilde."""
    return complex(C_tilde(g1, g2)) * s_tilde(g1) * s_tilde(g2) / s_tilde(g1 @ g2)


def j_bar(g: GroupElement, z: complex) -> complex:
    """C_dbar(g, p_z) with p_z the parabolic element taking i to z."""
    return C_dbar(g, point_to_parabolic(z))


# --- non-splitting obstructions ---------------------------------------------


def so2pm_obstruction(theta: float) -> complex:
    """C_bar(k, s(-1)) s_bar(k) / s_bar(k^{s(-1)}) for the rotation k by theta."""
    if not -math.pi < theta <= math.pi:
        raise DomainError("theta must lie in (-pi, pi]")
    k = rotation(theta)
    flip = section(-1)
    return complex(C_bar(k, flip)) * s_bar(k) / s_bar(conjugate(k, -1))


def gamma2pm_obstruction(g: GroupElement) -> ExactPhase:
    """C_bar(g, s(-1)) beta_bar(g) / beta_bar(g^{s(-1)}) on Gamma(2)."""
    from .trivialize import beta_bar

    if not g.in_gamma2():
        raise MembershipError(f"{g} is not in Gamma(2)")
    return C_bar(g, section(-1)) * beta_bar(g) / beta_bar(conjugate(g, -1))


def gamma2pm_obstruction_closed(g: GroupElement) -> ExactPhase:
    """(a, -1) if c = 0, else +1 or -1 as d = 1 or 3 mod 4."""
    if not g.in_gamma2():
        raise MembershipError(f"{g} is not in Gamma(2)")
    a, _, c, d = g.int_entries()
    if c == 0:
        return ExactPhase.from_sign(hilbert(a, -1))
    return ExactPhase.from_sign(1 if d % 4 == 1 else -1)


def cocycle_identity_failures(
    cocycle: Callable[[GroupElement, GroupElement], ExactPhase],
    triples: Iterable[tuple[GroupElement, GroupElement, GroupElement]],
) -> list[tuple[GroupElement, GroupElement, GroupElement]]:
    """Triples violating c(g1, g2) c(g1 g2, g3) = c(g1, g2 g3) c(g2, g3)."""
    bad = []
    for g1, g2, g3 in triples:
        left = cocycle(g1, g2) * cocycle(g1 @ g2, g3)
        right = cocycle(g1, g2 @ g3) * cocycle(g2, g3)
        if left != right:
            bad.append((g1, g2, g3))
    return bad
