"""Explicit trivializations of the rank-one cocycles on arithmetic subgroups:
the Gauss-sum maps on Gamma(2) and its extension by omega, the Dedekind-sum
maps on SL2(Z), the character relating them, and the lattice-model word
phase."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .cocycle import c_tilde, m_normalizer
from .group import (
    H,
    N2_TAG,
    N2M_TAG,
    NEG_I_TAG,
    OMEGA_TAG,
    UM,
    GeneratorWord,
    GroupElement,
    MembershipError,
    U,
    gamma2_decompose,
    h,
    u,
    u_minus,
    NEG_I,
    OMEGA,
)
from .scalar import ONE, DomainError, ExactPhase, dedekind_sum, gauss_sum, jacobi, sgn

__all__ = [
    "TrivializationMap",
    "CoboundaryReport",
    "beta_tilde",
    "beta_tilde_minus",
    "beta_bar",
    "beta_bar_minus",
    "sign_character",
    "asai_nu",
    "beta1_bar",
    "beta1_tilde",
    "chi",
    "chi_quotient",
    "chi_from_word",
    "CHI_N2",
    "CHI_N2_MINUS",
    "epsilon_word",
    "coboundary_check",
    "BETA_TILDE",
    "BETA_BAR",
    "BETA1_BAR",
    "BETA1_TILDE",
]


def _gamma2_hat_entries(g: GroupElement) -> tuple[int, int, int, int]:
    if not g.in_gamma2_hat():
        raise MembershipError(f"{g} is not in the group generated by Gamma(2) and omega")
    return g.int_entries()


def _gamma2_entries(g: GroupElement) -> tuple[int, int, int, int]:
    if not g.in_gamma2():
        raise MembershipError(f"{g} is not in Gamma(2)")
    return g.int_entries()


def _sl2z_entries(g: GroupElement) -> tuple[int, int, int, int]:
    if not g.is_integral() or g.det != 1:
        raise MembershipError(f"{g} is not in SL2(Z)")
    return g.int_entries()


def beta_tilde(g: GroupElement) -> ExactPhase:
    """beta(d, c), and 1 when c = 0."""
    _, _, c, d = _gamma2_hat_entries(g)
    return ONE if c == 0 else gauss_sum(d, c)


def sign_character(g: GroupElement) -> ExactPhase:
    """The character of Gamma(2) that is -1 on -I and 1 on n2, n2m."""
    word = gamma2_decompose(g)
    return ExactPhase.from_sign(-1 if any(t == NEG_I_TAG for t, _ in word) else 1)


def beta_tilde_minus(g: GroupElement) -> ExactPhase:
    _gamma2_entries(g)
    return beta_tilde(g) * sign_character(g)


def beta_bar(g: GroupElement) -> ExactPhase:
    """beta_tilde(g) / m(g) on Gamma(2), in closed form."""
    _, _, c, d = _gamma2_entries(g)
    if c == 0:
        return ExactPhase(Fraction(-(1 - sgn(d)), 4))
    return gauss_sum(d, c) * ExactPhase(Fraction(sgn(c), 4))


def beta_bar_minus(g: GroupElement) -> ExactPhase:
    return beta_bar(g) * sign_character(g)


def asai_nu(g: GroupElement) -> Fraction:
    """Asai's rational-valued function on SL2(Z)."""
    a, b, c, d = _sl2z_entries(g)
    if c == 0:
        return Fraction(b, 12 * d) + Fraction(1 - sgn(d), 4)
    return Fraction(a + d, 12 * c) - sgn(c) * (Fraction(1, 4) + dedekind_sum(d, abs(c)))


def beta1_bar(g: GroupElement) -> ExactPhase:
    """exp(-i pi asai_nu(g)), a splitting of c_bar on SL2(Z)."""
    return ExactPhase(-asai_nu(g))


def beta1_tilde(g: GroupElement) -> ExactPhase:
    """beta1_bar(g) m(g), a splitting of c_tilde on SL2(Z)."""
    return beta1_bar(g) * m_normalizer(g)


CHI_N2 = ExactPhase.root(-1, 6)
CHI_N2_MINUS = ExactPhase.root(1, 6)


def chi(g: GroupElement) -> ExactPhase:
    """beta1_tilde / beta_tilde on Gamma(2), by the case-split closed form."""
    a, b, c, d = _gamma2_entries(g)
    if c == 0:
        return ExactPhase(Fraction(-b, 12 * a))
    symbol = ExactPhase.from_sign(jacobi(c // 2, abs(d)))
    s = dedekind_sum(c, d)
    if d > 0:
        q = -(Fraction(-c, d) + Fraction(b, d) + 12 * s) / 12
        extra = ONE if d % 4 == 1 else ExactPhase.root(-1, 2)
    else:
        q = -(Fraction(-c, d) + Fraction(b, d) - 12 * s) / 12
        extra = ONE if d % 4 == 3 else ExactPhase.root(1, 2)
    value = symbol * extra * ExactPhase(q)
    assert (value.q * 12).denominator == 1, value
    return value


def chi_quotient(g: GroupElement) -> ExactPhase:
    _gamma2_entries(g)
    return beta1_tilde(g) / beta_tilde(g)


def chi_from_word(g: GroupElement) -> ExactPhase:
    """chi recomputed from the free-group word and the generator values."""
    out = ONE
    for tag, k in gamma2_decompose(g):
        if tag == N2_TAG:
            out = out * CHI_N2 ** k  # type: ignore[operator]
        elif tag == N2M_TAG:
            out = out * CHI_N2_MINUS ** k  # type: ignore[operator]
    return out


# --- lattice-model word phase ------------------------------------------------


def _basic_letters(word: GeneratorWord) -> Iterable[tuple[GroupElement, ExactPhase]]:
    """Expand a word into single generators paired with their lattice phases."""
    for tag, p in word:
        if tag == U:
            if Fraction(p).denominator != 1 or Fraction(p) % 2:  # type: ignore[arg-type]
                raise DomainError(f"u(b) needs even integral b: {p}")
            yield u(p), ONE
        elif tag == N2_TAG:
            yield u(2 * p), ONE  # type: ignore[operator]
        elif tag == UM or tag == N2M_TAG:
            cc = Fraction(p) if tag == UM else 2 * Fraction(p)  # type: ignore[arg-type]
            if cc.denominator != 1 or cc % 2:
                raise DomainError(f"u-(c) needs even integral c: {p}")
            yield u_minus(cc), ExactPhase(Fraction(sgn(cc), 4))
        elif tag == H:
            if Fraction(p) not in (1, -1):  # type: ignore[arg-type]
                raise DomainError(f"h(a) needs a = +-1: {p}")
            yield h(p), ONE
        elif tag == NEG_I_TAG:
            yield NEG_I, ONE
        elif tag == OMEGA_TAG:
            k = 1 if p is None else int(p)  # type: ignore[call-overload]
            if k < 0:
                yield NEG_I, ONE
            for _ in range(abs(k)):
                yield OMEGA, ONE
        else:
            raise DomainError(f"letter {tag} is not admissible in the lattice model")


def epsilon_word(word: GeneratorWord) -> ExactPhase:
    """Phase eps_g with Pi(g) f(w) = eps_g f(w g), accumulated along the word.

    Letters contribute 1 except u-(c), which contributes exp(i pi sgn(c)/4);
    concatenation uses eps_{g1} eps_{g2} = c_tilde(g1, g2) eps_{g1 g2}.
    """
    g = GroupElement(1, 0, 0, 1)
    eps = ONE
    for x, phase in _basic_letters(word):
        eps = eps * phase / c_tilde(g, x)
        g = g @ x
    return eps


# --- generic coboundary checking --------------------------------------------


@dataclass(frozen=True)
class TrivializationMap:
    name: str
    evaluate: Callable[[GroupElement], ExactPhase]
    domain: Callable[[GroupElement], bool]

    def __call__(self, g: GroupElement) -> ExactPhase:
        return self.evaluate(g)


def _in_sl2z(g: GroupElement) -> bool:
    return g.is_integral() and g.det == 1


BETA_TILDE = TrivializationMap("beta_tilde", beta_tilde, GroupElement.in_gamma2_hat)
BETA_BAR = TrivializationMap("beta_bar", beta_bar, GroupElement.in_gamma2)
BETA1_BAR = TrivializationMap("beta1_bar", beta1_bar, _in_sl2z)
BETA1_TILDE = TrivializationMap("beta1_tilde", beta1_tilde, _in_sl2z)


@dataclass
class CoboundaryReport:
    checked: int = 0
    failures: list[tuple[GroupElement, GroupElement, ExactPhase, ExactPhase]] = field(
        default_factory=list
    )

    @property
    def ok(self) -> bool:
        return not self.failures


def coboundary_check(
    cocycle: Callable[[GroupElement, GroupElement], ExactPhase],
    f: TrivializationMap,
    pairs: Iterable[tuple[GroupElement, GroupElement]],
) -> CoboundaryReport:
    """Collect pairs where cocycle(g1, g2) != f(g1)^-1 f(g2)^-1 f(g1 g2)."""
    report = CoboundaryReport()
    for g1, g2 in pairs:
        g12 = g1 @ g2
        for g in (g1, g2, g12):
            if not f.domain(g):
                raise MembershipError(f"{g} is outside the domain of {f.name}")
        expected = cocycle(g1, g2)
        got = f(g12) / (f(g1) * f(g2))
        report.checked += 1
        if expected != got:
            report.failures.append((g1, g2, expected, got))
    return report
