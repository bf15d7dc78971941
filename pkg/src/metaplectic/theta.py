"""Theta series of weight 1/2 and 3/2 on the two half-planes, their multiplier
system on the group generated by Gamma(2), omega and h_-1, and numerical
checks of the transformation law.

The series theta(z, eps) = sum_n exp(i eps pi n^2 z) converges only when
eps * Im z > 0. Since Im(g z) has the sign of det(g) Im z, the law

    theta(g z, eps) = lambda(g, eps) J(g, z) theta(z, det(g) eps)

is only meaningful for z in the half-plane with sign eps * det(g); every
function here enforces that pairing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .cocycle import C_bar, m_extended
from .group import GroupElement, MembershipError, j_factor, mobius, point_to_parabolic
from .scalar import ONE, DomainError, ExactPhase, gauss_sum, hilbert, sgn

__all__ = [
    "DivergenceError",
    "ExcludedPairError",
    "ThetaQuery",
    "ThetaValue",
    "theta_eval",
    "theta_truncation",
    "upsilon",
    "upsilon_printed",
    "multiplier_lambda",
    "lambda_printed",
    "lambda_from_operators",
    "transformation_check",
    "cocycle_check",
]


class DivergenceError(DomainError):
    """The series is evaluated outside its half-plane of convergence."""


class ExcludedPairError(DomainError):
    """The multiplier is not defined for this (element, eps) pair."""


@dataclass(frozen=True)
class ThetaQuery:
    z: complex
    eps: int
    weight: Fraction = Fraction(1, 2)
    tail_bound: float = 1e-15

    def __post_init__(self) -> None:
        if self.eps not in (1, -1):
            raise DomainError(f"eps must be +1 or -1: {self.eps}")
        if Fraction(self.weight) not in (Fraction(1, 2), Fraction(3, 2)):
            raise DomainError(f"weight must be 1/2 or 3/2: {self.weight}")
        if not self.tail_bound > 0:
            raise DomainError("tail bound must be positive")
        if not self.eps * complex(self.z).imag > 0:
            raise DivergenceError(f"eps * Im z must be positive: eps={self.eps}, z={self.z}")


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    terms: int
    tail: float


def _tail(n: int, y: float, weight: Fraction) -> float:
    """Bound on sum_{|k| > n} |k|^(w - 1/2) exp(-pi k^2 y)."""
    q = math.exp(-math.pi * (n + 1) ** 2 * y)
    ratio = math.exp(-math.pi * (2 * n + 3) * y)
    bound = 2 * q / (1 - ratio)
    return bound * (n + 1) if weight == Fraction(3, 2) else bound


def theta_truncation(y: float, weight: Fraction, tail_bound: float) -> int:
    """Smallest n whose omitted tail (|k| > n) is below tail_bound."""
    n = 0
    while _tail(n, y, weight) >= tail_bound:
        n += 1
    return n


def theta_eval(q: ThetaQuery) -> ThetaValue:
    """Symmetric partial sum with a certified bound on the omitted terms.

    For weight 3/2 the terms n and -n are combined before summation, so the
    value is exactly zero.
    """
    z = complex(q.z)
    y = abs(z.imag)
    weight = Fraction(q.weight)
    n = theta_truncation(y, weight, q.tail_bound)
    if weight == Fraction(3, 2):
        total = 0j
        for k in range(1, n + 1):
            term = cmath.exp(1j * q.eps * math.pi * k * k * z)
            total += k * term + (-k) * term
        return ThetaValue(total, n, _tail(n, y, weight))
    total = 0j
    for k in range(n, 0, -1):
        total += 2 * cmath.exp(1j * q.eps * math.pi * k * k * z)
    return ThetaValue(1 + total, n, _tail(n, y, weight))


def _entries(g: GroupElement) -> tuple[int, int, int, int, int]:
    if not g.in_gamma2_hat_pm():
        raise MembershipError(f"{g} is not in the group generated by Gamma(2), omega and h_-1")
    a, b, c, d = g.int_entries()
    return a, b, c, d, a * d - b * c


def _check_eps(eps: int) -> None:
    if eps not in (1, -1):
        raise DomainError(f"eps must be +1 or -1: {eps}")


def _beta_inv(d: int, c: int) -> ExactPhase:
    return ONE if d == 0 else gauss_sum(d, c).inverse()


def upsilon(g: GroupElement, eps: int) -> ExactPhase:
    """Lattice-model phase: Pi(g) theta f(eps, w) = upsilon * theta f(det(g) eps, w g).

    With e = det(g) eps this is (e, a) if c = 0, and otherwise
    exp(i pi (1 - e)/4) (c det g, e) beta(d, e c)^-1.
    """
    _check_eps(eps)
    a, _, c, d, det = _entries(g)
    e = det * eps
    if c == 0:
        return ExactPhase.from_sign(hilbert(e, a))
    return ExactPhase(Fraction(1 - e, 4)) * hilbert(c * det, e) * _beta_inv(d, e * c)


def upsilon_printed(g: GroupElement, eps: int) -> ExactPhase:
    """The same constant with exp(i pi (1 - eps)/4) in place of exp(i pi (1 - e)/4).

    Agrees with ``upsilon`` when det g = 1 and differs by i eps otherwise.
    """
    _check_eps(eps)
    a, _, c, d, det = _entries(g)
    if c == 0:
        return ExactPhase.from_sign(hilbert(det * eps, a))
    return ExactPhase(Fraction(1 - eps, 4)) * hilbert(c * det, eps * det) * _beta_inv(d, det * eps * c)


def _excluded(a: int, b: int, c: int, d: int, eps: int) -> bool:
    return eps == -1 and a == -1 and b == 0 and c == 0 and d in (1, -1)


def multiplier_lambda(g: GroupElement, eps: int, half_plane: int) -> ExactPhase:
    """The constant lambda(g, eps) of the weight-1/2 and weight-3/2 laws.

    With e = det(g) eps:
      c = 0:  (e, a) (half_plane, a) exp(i pi (1 - sgn a)/4)
      c != 0: exp(-i pi sgn(c det g)/4) exp(i pi (1 - e)/4) (c det g, e) beta(d, e c)^-1
    """
    _check_eps(eps)
    if half_plane not in (1, -1):
        raise DomainError(f"half_plane must be +1 or -1: {half_plane}")
    a, b, c, d, det = _entries(g)
    if _excluded(a, b, c, d, eps):
        raise ExcludedPairError(f"lambda is not defined for {g} at eps = -1")
    e = det * eps
    if c == 0:
        sign = hilbert(e, a) * hilbert(half_plane, a)
        return ExactPhase(Fraction(1 - sgn(a), 4)) * sign
    return ExactPhase(Fraction(-sgn(c * det), 4)) * upsilon(g, eps)


def lambda_printed(g: GroupElement, eps: int, half_plane: int) -> ExactPhase:
    """The two-case display built from ``upsilon_printed`` and m = exp(-i pi sgn(c)/4).

    Agrees with ``multiplier_lambda`` whenever det g = 1.
    """
    _check_eps(eps)
    a, b, c, d, det = _entries(g)
    if _excluded(a, b, c, d, eps):
        raise ExcludedPairError(f"lambda is not defined for {g} at eps = -1")
    if c == 0:
        sign = hilbert(eps * det, a) * hilbert(half_plane, a)
        return ExactPhase(Fraction(1 - sgn(a), 4)) * sign
    return ExactPhase(Fraction(-sgn(c), 4)) * upsilon_printed(g, eps)


def lambda_from_operators(g: GroupElement, eps: int, z: complex, ups: complex | None = None) -> complex:
    """C_bar(g, p_z)^-1 upsilon m(g), optionally with a measured upsilon."""
    p = point_to_parabolic(z)
    u = complex(upsilon(g, eps)) if ups is None else ups
    return complex(m_extended(g) / C_bar(g, p)) * u


def _pair_point(g: GroupElement, z: complex, eps: int) -> complex:
    """Reflect z into the half-plane where both sides of the law converge."""
    det = 1 if g.det > 0 else -1
    z = complex(z)
    if z.imag == 0:
        raise DomainError("z must lie off the real axis")
    return z if sgn(z.imag) == eps * det else z.conjugate()


@dataclass(frozen=True)
class TransformationResult:
    z: complex
    lhs: complex
    rhs: complex
    residual: float


def transformation_check(
    g: GroupElement,
    z: complex,
    eps: int,
    weight: Fraction = Fraction(1, 2),
    tail_bound: float = 1e-15,
    adjust: bool = False,
) -> TransformationResult:
    """Relative residual of theta(g z, eps) = lambda J(g, z)^(2w) theta(z, det(g) eps).

    z must satisfy sgn Im z = eps det g; with ``adjust`` it is reflected into
    that half-plane instead of raising. For weight 3/2 both sides vanish and
    the residual is the absolute difference.
    """
    _check_eps(eps)
    weight = Fraction(weight)
    if adjust:
        z = _pair_point(g, z, eps)
    det = 1 if g.det > 0 else -1
    if sgn(complex(z).imag) != eps * det:
        raise DivergenceError(f"need sgn Im z = eps det g for z={z}, eps={eps}, det={det}")
    lam = complex(multiplier_lambda(g, eps, sgn(complex(z).imag)))
    right = theta_eval(ThetaQuery(z, det * eps, weight, tail_bound)).value
    left = theta_eval(ThetaQuery(mobius(g, z), eps, weight, tail_bound)).value
    power = 1 if weight == Fraction(1, 2) else 3
    rhs = lam * j_factor(g, z) ** power * right
    if weight == Fraction(3, 2):
        return TransformationResult(z, left, rhs, abs(left - rhs))
    return TransformationResult(z, left, rhs, abs(left - rhs) / abs(rhs))


def cocycle_check(g1: GroupElement, g2: GroupElement, z: complex, eps: int) -> float:
    """Apply the law for g2 then g1 and compare with the law for g1 g2.

    Returns |lambda(g1 g2) J(g1 g2, z) - lambda(g1) lambda(g2) J(g1, g2 z) J(g2, z)|
    where the eps arguments follow the chain theta(g1 g2 z, eps) ->
    theta(g2 z, det(g1) eps) -> theta(z, det(g1 g2) eps).
    """
    _check_eps(eps)
    g12 = g1 @ g2
    d1 = 1 if g1.det > 0 else -1
    z = _pair_point(g12, z, eps)
    w = mobius(g2, z)
    direct = complex(multiplier_lambda(g12, eps, sgn(z.imag))) * j_factor(g12, z)
    chained = (
        complex(multiplier_lambda(g1, eps, sgn(w.imag)))
        * j_factor(g1, w)
        * complex(multiplier_lambda(g2, d1 * eps, sgn(z.imag)))
        * j_factor(g2, z)
    )
    return abs(direct - chained)
