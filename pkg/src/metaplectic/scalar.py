"""Exact scalar arithmetic: rational phases, signs, Hilbert symbols, Weil
indices, sawtooth values, Dedekind sums, Jacobi symbols and quadratic Gauss
sums."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Sequence

import numpy as np

__all__ = [
    "DomainError",
    "ExactPhase",
    "ONE",
    "sgn",
    "hilbert",
    "weil_index",
    "gamma_ratio",
    "sawtooth",
    "dedekind_sum",
    "dedekind_sum_direct",
    "jacobi",
    "gauss_sum_direct",
    "gauss_sum_direct_row",
    "gauss_sum_closed",
    "gauss_sum",
]


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


_QUARTER_TURNS = {Fraction(0): 1 + 0j, Fraction(1, 2): 1j, Fraction(1): -1 + 0j, Fraction(3, 2): -1j}


@dataclass(frozen=True, slots=True)
class ExactPhase:
    """The root of unity ``exp(i*pi*q)``, with ``q`` kept exactly modulo 2."""

    q: Fraction

    def __post_init__(self) -> None:
        q = self.q
        if not (type(q) is Fraction and 0 <= q < 2):
            object.__setattr__(self, "q", Fraction(q) % 2)

    @classmethod
    def from_sign(cls, s: int) -> ExactPhase:
        if s == 1:
            return _PLUS
        if s == -1:
            return _MINUS
        raise DomainError(f"not a sign: {s!r}")

    @classmethod
    def root(cls, p: int, n: int = 1) -> ExactPhase:
        """``exp(i*pi*p/n)``."""
        return cls(Fraction(p, n))

    def __mul__(self, other: ExactPhase) -> ExactPhase:
        if isinstance(other, ExactPhase):
            return ExactPhase(self.q + other.q)
        if isinstance(other, int) and other in (1, -1):
            return self * ExactPhase.from_sign(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: ExactPhase) -> ExactPhase:
        if isinstance(other, ExactPhase):
            return ExactPhase(self.q - other.q)
        if isinstance(other, int) and other in (1, -1):
            return self * ExactPhase.from_sign(other)
        return NotImplemented

    def __rtruediv__(self, other: int) -> ExactPhase:
        if isinstance(other, int) and other in (1, -1):
            return ExactPhase.from_sign(other) * self.inverse()
        return NotImplemented

    def __pow__(self, k: int) -> ExactPhase:
        return ExactPhase(self.q * k)

    def inverse(self) -> ExactPhase:
        return ExactPhase(-self.q)

    def __complex__(self) -> complex:
        exact = _QUARTER_TURNS.get(self.q)
        if exact is not None:
            return exact
        q = self.q if self.q <= 1 else self.q - 2
        return cmath.exp(1j * math.pi * float(q))

    def to_complex(self) -> complex:
        return complex(self)

    @property
    def order(self) -> int:
        """Multiplicative order, i.e. the least n with phase**n == 1."""
        return (self.q / 2).denominator

    def is_sign(self) -> bool:
        return self.q in (0, 1)

    def sign(self) -> int:
        if not self.is_sign():
            raise DomainError(f"{self} is not a sign")
        return 1 if self.q == 0 else -1

    def __str__(self) -> str:
        if self.q == 0:
            return "1"
        if self.q == 1:
            return "-1"
        q = self.q if self.q < 1 else self.q - 2
        sign = "-" if q < 0 else ""
        return f"e^{{{sign}iπ·{abs(q.numerator)}/{q.denominator}}}"

    def __repr__(self) -> str:
        return f"ExactPhase({self.q})"


ONE = ExactPhase(Fraction(0))
_PLUS = ONE
_MINUS = ExactPhase(Fraction(1))


def sgn(x: Real) -> int:
    """Sign of a real number: 1, 0 or -1."""
    if type(x) is Fraction:
        x = x.numerator
    return (x > 0) - (x < 0)


def _nonzero_sign(x: Real, name: str = "argument") -> int:
    s = sgn(x)
    if s == 0:
        raise DomainError(f"{name} must be nonzero")
    return s


def hilbert(a: Real, b: Real) -> int:
    """Real Hilbert symbol: -1 iff both arguments are negative."""
    sa = _nonzero_sign(a, "a")
    sb = _nonzero_sign(b, "b")
    return -1 if sa < 0 and sb < 0 else 1


def weil_index(e: Real) -> ExactPhase:
    """Weil index of the character x -> psi0(e x^2) of second degree."""
    return ExactPhase(Fraction(_nonzero_sign(e, "e"), 4))


def gamma_ratio(a: Real, e: Real) -> ExactPhase:
    """gamma(a, psi0^e) = gamma(psi0^(a e)) / gamma(psi0^e)."""
    _nonzero_sign(a, "a")
    return weil_index(a * e) / weil_index(e)


def sawtooth(x: Rational | int) -> Fraction:
    """((x)): zero at integers, otherwise x - floor(x) - 1/2."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def _check_coprime(d: int, c: int) -> None:
    if c == 0:
        raise DomainError("modulus must be nonzero")
    if math.gcd(d, c) != 1:
        raise DomainError(f"arguments not coprime: ({d}, {c})")


def dedekind_sum_direct(d: int, c: int) -> Fraction:
    """s(d, c) by literal summation of sawtooth products, O(|c|)."""
    _check_coprime(d, c)
    m = abs(c)
    # ((k/m)) = (2k - m)/(2m) for 0 < k < m; accumulate integer numerators.
    total = 0
    for k in range(1, m):
        r = (k * d) % m
        total += (2 * k - m) * (2 * r - m)
    return Fraction(total, 4 * m * m)


def dedekind_sum(d: int, c: int) -> Fraction:
    """s(d, c) via the reciprocity law and Euclid's algorithm, O(log |c|)."""
    _check_coprime(d, c)
    sign = 1
    a, b = d, abs(c)
    total = Fraction(0)
    while True:
        if a < 0:
            a, sign = -a, -sign
        a %= b
        if a == 0:
            return total
        # s(a,b) = -s(b,a) + (a/b + b/a + 1/(ab) - 3)/12 for coprime a,b > 0
        total += sign * (Fraction(a * a + b * b + 1, 12 * a * b) - Fraction(1, 4))
        a, b = b, a
        sign = -sign


def jacobi(c: int, d: int) -> int:
    """Jacobi symbol (c/d) for positive odd d coprime to c."""
    if d <= 0 or d % 2 == 0:
        raise DomainError(f"Jacobi modulus must be positive and odd: {d}")
    if math.gcd(c, d) != 1:
        raise DomainError(f"arguments not coprime: ({c}, {d})")
    a, n, result = c % d, d, 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result


def gauss_sum_direct(c: int, d: int) -> complex:
    """|d|^(-1/2) * sum_{n=0}^{|d|-1} exp(-pi i c n^2 / d), summed literally."""
    if d == 0:
        raise DomainError("modulus must be nonzero")
    if math.gcd(c, d) != 1:
        raise DomainError(f"arguments not coprime: ({c}, {d})")
    m = abs(d)
    two_d = 2 * d
    total = 0j
    for n in range(m):
        # exponent -pi i r/d with r = c n^2 reduced mod 2d, kept exact
        r = (c * n * n) % two_d
        total += cmath.exp(-1j * math.pi * r / d)
    return total / math.sqrt(m)


def gauss_sum_direct_row(ds: Sequence[int], c: int) -> np.ndarray:
    """gauss_sum_direct(d, c) for every d in ds at once (coprimality unchecked)."""
    if c == 0:
        raise DomainError("modulus must be nonzero")
    m = abs(c)
    n = np.arange(m, dtype=np.int64)
    r = (np.asarray(ds, dtype=np.int64)[:, None] * (n * n)[None, :]) % (2 * c)
    return np.exp(-1j * np.pi * r / c).sum(axis=1) / math.sqrt(m)


def gauss_sum_closed(d: int, c: int) -> ExactPhase:
    """beta(d, c) for c even and nonzero, d odd, as an exact eighth root of unity."""
    if c == 0 or c % 2 or d % 2 == 0:
        raise DomainError(f"need c even nonzero and d odd: (d={d}, c={c})")
    if math.gcd(d, c) != 1:
        raise DomainError(f"arguments not coprime: ({d}, {c})")
    symbol = ExactPhase.from_sign(jacobi(c // 2, abs(d)))
    if d > 0:
        base = ExactPhase(Fraction(-sgn(c), 4))
        extra = ONE if d % 4 == 1 else ExactPhase.root(1, 2)
    else:
        base = ExactPhase(Fraction(-sgn(c * d), 4))
        extra = ONE if d % 4 == 3 else ExactPhase.root(-1, 2)
    return symbol * extra * base


def gauss_sum(d: int, c: int) -> ExactPhase:
    """beta(d, c) exactly whenever c d is even and c is nonzero.

    The odd-modulus case goes through reciprocity
    beta(d, c) beta(c, d) = exp(-pi i sgn(dc)/4).
    """
    if c == 0:
        raise DomainError("modulus must be nonzero")
    if math.gcd(d, c) != 1:
        raise DomainError(f"arguments not coprime: ({d}, {c})")
    if c % 2 == 0:
        return gauss_sum_closed(d, c)
    if d % 2:
        raise DomainError(f"c d must be even: (d={d}, c={c})")
    if d == 0:
        return ONE
    return ExactPhase(Fraction(-sgn(d * c), 4)) / gauss_sum_closed(c, d)
