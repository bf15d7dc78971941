"""Seeded random elements and words for property sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from .group import (
    HMINUS,
    N2_TAG,
    N2M_TAG,
    NEG_I_TAG,
    OMEGA_TAG,
    GeneratorWord,
    GroupElement,
    identity,
    section,
    u,
    u_minus,
    OMEGA,
    NEG_I,
    N2,
    N2_MINUS,
)

__all__ = [
    "random_rational",
    "random_sl2",
    "random_sl2pm",
    "random_gamma2",
    "random_gamma2_hat",
    "random_sl2z",
    "random_gamma2_hat_word",
    "random_theta_word",
]


def random_rational(rng: random.Random, bound: int = 6, zero_weight: float = 0.2) -> Fraction:
    if rng.random() < zero_weight:
        return Fraction(0)
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_sl2(rng: random.Random, length: int = 3) -> GroupElement:
    """Exact rational SL2 element; zero entries and sign changes occur often.

    The product of random u(t), u-(t), h(r) and omega is accumulated on the
    entries directly.
    """
    one, zero = Fraction(1), Fraction(0)
    a, b, c, d = one, zero, zero, one
    for _ in range(rng.randint(0, length)):
        kind = rng.randrange(4)
        if kind == 0:
            t = random_rational(rng)
            b, d = a * t + b, c * t + d
        elif kind == 1:
            t = random_rational(rng)
            a, c = a + b * t, c + d * t
        elif kind == 2:
            r = random_rational(rng, zero_weight=0) or one
            a, b, c, d = a * r, b / r, c * r, d / r
        else:
            a, b, c, d = b, -a, d, -c
    return GroupElement(a, b, c, d)


def random_sl2pm(rng: random.Random, length: int = 3) -> GroupElement:
    g = random_sl2(rng, length)
    return section(-1) @ g if rng.random() < 0.5 else g


def _power(g: GroupElement, k: int) -> GroupElement:
    out = identity()
    base = g if k >= 0 else g.inverse()
    for _ in range(abs(k)):
        out = out @ base
    return out


def random_gamma2(rng: random.Random, length: int = 4, max_exp: int = 3) -> GroupElement:
    g = NEG_I if rng.random() < 0.5 else identity()
    for _ in range(rng.randint(0, length)):
        gen = N2 if rng.random() < 0.5 else N2_MINUS
        g = g @ _power(gen, rng.choice([k for k in range(-max_exp, max_exp + 1) if k]))
    return g


def random_gamma2_hat(rng: random.Random, length: int = 4) -> GroupElement:
    g = random_gamma2(rng, length)
    return g @ OMEGA if rng.random() < 0.5 else g


def random_sl2z(rng: random.Random, length: int = 8, max_exp: int = 2) -> GroupElement:
    """Bounded word in [[1,1],[0,1]] and [[1,0],[1,1]]."""
    g = identity()
    for _ in range(rng.randint(0, length)):
        gen = u(1) if rng.random() < 0.5 else u_minus(1)
        g = g @ _power(gen, rng.choice([k for k in range(-max_exp, max_exp + 1) if k]))
    return g


def random_gamma2_hat_word(rng: random.Random, length: int = 6, max_exp: int = 2) -> GeneratorWord:
    """Word in n2^k, n2m^k, omega^+-1 and -I, the letters the lattice phase accepts."""
    exps = [k for k in range(-max_exp, max_exp + 1) if k]
    letters: list[tuple[str, object]] = []
    for _ in range(rng.randint(0, length)):
        tag = rng.choice((N2_TAG, N2M_TAG, OMEGA_TAG, NEG_I_TAG))
        if tag in (N2_TAG, N2M_TAG):
            letters.append((tag, rng.choice(exps)))
        elif tag == OMEGA_TAG:
            letters.append((tag, rng.choice((-1, 1))))
        else:
            letters.append((tag, None))
    return GeneratorWord(tuple(letters))


def random_theta_word(rng: random.Random, length: int = 6) -> GeneratorWord:
    """Word of length <= length in n2, n2m, omega, h_-1 and -I and their inverses."""
    letters = []
    for _ in range(rng.randint(0, length)):
        tag = rng.choice((N2_TAG, N2M_TAG, OMEGA_TAG, HMINUS, NEG_I_TAG))
        if tag in (N2_TAG, N2M_TAG):
            letters.append((tag, rng.choice((-1, 1))))
        elif tag == OMEGA_TAG:
            letters.append((tag, rng.choice((-1, 1))))
        else:
            letters.append((tag, None))
    return GeneratorWord(tuple(letters))
