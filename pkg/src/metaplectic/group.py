"""2x2 matrix groups of determinant +-1, Iwasawa decomposition, the Moebius
action and automorphy factor, Gamma(2) words, and Heisenberg groups.

Matrices act on row vectors from the right, so the rotation by ``theta`` is
``[[cos, sin], [-sin, cos]]`` and ``omega = [[0, -1], [1, 0]]`` is the rotation
by ``-pi/2``.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .scalar import DomainError, sgn

__all__ = [
    "dot_sign",
    "MembershipError",
    "GroupElement",
    "IwasawaPair",
    "GeneratorWord",
    "HeisenbergElement",
    "mat",
    "identity",
    "u",
    "u_minus",
    "h",
    "section",
    "rotation",
    "OMEGA",
    "NEG_I",
    "H_MINUS",
    "N2",
    "N2_MINUS",
    "iwasawa",
    "rotation_angle",
    "x_invariant",
    "mobius",
    "j_factor",
    "point_to_parabolic",
    "gamma2_decompose",
    "heisenberg_mul",
    "galois_twist_iso_check",
]

Scalar = Union[Fraction, float]


class MembershipError(DomainError):
    """Raised when a matrix is not in the required subgroup."""


def _coerce(x: object) -> Scalar:
    if type(x) is Fraction or type(x) is float:
        return x  # type: ignore[return-value]
    if isinstance(x, float):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    return float(x)  # numpy scalars and the like


@dataclass(frozen=True, slots=True)
class GroupElement:
    """A real 2x2 matrix ``[[a, b], [c, d]]``.

    Entries are either all exact ``Fraction`` values or contain floats; the
    product of an exact and a float matrix is a float matrix.
    """

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _coerce(getattr(self, name)))

    @property
    def det(self) -> Scalar:
        a, b, c, d = self.a, self.b, self.c, self.d
        if type(a) is Fraction and type(b) is Fraction and type(c) is Fraction and type(d) is Fraction:
            d1 = a.denominator * d.denominator
            d2 = b.denominator * c.denominator
            return Fraction(a.numerator * d.numerator * d2 - b.numerator * c.numerator * d1, d1 * d2)
        return a * d - b * c

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.entries)

    @property
    def entries(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: GroupElement) -> GroupElement:
        if all(type(x) is Fraction for x in (self.a, self.b, self.c, self.d, o.a, o.b, o.c, o.d)):
            return _exact_product(self, o)
        return GroupElement(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> GroupElement:
        return GroupElement(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> GroupElement:
        det = self.det
        if det == 0:
            raise DomainError("singular matrix")
        return GroupElement(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __pow__(self, k: int) -> GroupElement:
        base = self if k >= 0 else self.inverse()
        out = identity()
        for _ in range(abs(k)):
            out = out @ base
        return out

    def to_float(self) -> GroupElement:
        return GroupElement(*(float(x) for x in self.entries))

    def close_to(self, o: GroupElement, tol: float = 1e-12) -> bool:
        return all(abs(float(x) - float(y)) <= tol for x, y in zip(self.entries, o.entries))

    def is_integral(self) -> bool:
        return self.exact and all(x.denominator == 1 for x in self.entries)

    def int_entries(self) -> tuple[int, int, int, int]:
        if not self.is_integral():
            raise MembershipError(f"{self} does not have integer entries")
        return tuple(int(x) for x in self.entries)  # type: ignore[return-value]

    def in_sl2pm(self) -> bool:
        return self.det in (1, -1)

    def in_gamma2(self) -> bool:
        """Principal congruence subgroup of level 2 (determinant 1)."""
        if not self.is_integral() or self.det != 1:
            return False
        a, b, c, d = self.int_entries()
        return b % 2 == 0 and c % 2 == 0

    def in_gamma2_pm(self) -> bool:
        if not self.is_integral() or self.det not in (1, -1):
            return False
        a, b, c, d = self.int_entries()
        return b % 2 == 0 and c % 2 == 0

    def in_gamma2_hat(self) -> bool:
        """The group generated by Gamma(2) and omega (determinant 1)."""
        return self.det == 1 and self.in_gamma2_hat_pm()

    def in_gamma2_hat_pm(self) -> bool:
        if not self.is_integral() or self.det not in (1, -1):
            return False
        a, b, c, d = self.int_entries()
        return (b % 2 == 0 and c % 2 == 0) or (a % 2 == 0 and d % 2 == 0)

    def __str__(self) -> str:
        return "[[{},{}],[{},{}]]".format(*(_fmt(x) for x in self.entries))


def _fmt(x: Scalar) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(x)


def _dot(p: Fraction, q: Fraction, r: Fraction, s: Fraction) -> Fraction:
    """p q + r s with a single normalization."""
    d1 = p.denominator * q.denominator
    d2 = r.denominator * s.denominator
    return Fraction(p.numerator * q.numerator * d2 + r.numerator * s.numerator * d1, d1 * d2)


def dot_sign(p: Scalar, q: Scalar, r: Scalar, s: Scalar) -> int:
    """sgn(p q + r s), computed without building the Fraction for exact inputs."""
    if type(p) is Fraction and type(q) is Fraction and type(r) is Fraction and type(s) is Fraction:
        v = p.numerator * q.numerator * r.denominator * s.denominator
        v += r.numerator * s.numerator * p.denominator * q.denominator
    else:
        v = p * q + r * s
    return (v > 0) - (v < 0)


def _exact_product(x: GroupElement, y: GroupElement) -> GroupElement:
    return GroupElement(
        _dot(x.a, y.a, x.b, y.c),  # type: ignore[arg-type]
        _dot(x.a, y.b, x.b, y.d),  # type: ignore[arg-type]
        _dot(x.c, y.a, x.d, y.c),  # type: ignore[arg-type]
        _dot(x.c, y.b, x.d, y.d),  # type: ignore[arg-type]
    )


def mat(a: object, b: object, c: object, d: object) -> GroupElement:
    return GroupElement(a, b, c, d)  # type: ignore[arg-type]


def identity() -> GroupElement:
    return mat(1, 0, 0, 1)


def u(b: object) -> GroupElement:
    return mat(1, b, 0, 1)


def u_minus(c: object) -> GroupElement:
    return mat(1, 0, c, 1)


def h(a: object) -> GroupElement:
    a = _coerce(a)
    return GroupElement(a, 0 if isinstance(a, Fraction) else 0.0, 0, 1 / a)


def section(y: object) -> GroupElement:
    """The section s(y) = diag(1, y) of the determinant."""
    return mat(1, 0, 0, y)


_EXACT_ROTATIONS = {
    0.0: (1, 0),
    math.pi / 2: (0, 1),
    -math.pi / 2: (0, -1),
    math.pi: (-1, 0),
    -math.pi: (-1, 0),
}


def rotation(theta: float) -> GroupElement:
    """[[cos, sin], [-sin, cos]]; exact entries at multiples of pi/2."""
    if theta in _EXACT_ROTATIONS:
        c, s = _EXACT_ROTATIONS[theta]
        return mat(c, s, -s, c)
    c, s = math.cos(theta), math.sin(theta)
    return GroupElement(c, s, -s, c)


OMEGA = mat(0, -1, 1, 0)
NEG_I = mat(-1, 0, 0, -1)
H_MINUS = section(-1)
N2 = u(2)
N2_MINUS = u_minus(2)


# --- Iwasawa decomposition -------------------------------------------------


@dataclass(frozen=True, slots=True)
class IwasawaPair:
    """g = p k with p upper triangular (positive corner) and k in SO(2)."""

    p: GroupElement
    k: GroupElement

    @property
    def theta(self) -> float:
        return rotation_angle(self.k)


def iwasawa(g: GroupElement) -> IwasawaPair:
    a, b, c, d = (float(x) for x in g.entries)
    det = a * d - b * c
    r = math.hypot(c, d)
    p = GroupElement(1 / r, det * (b * d + a * c) / r, 0.0, det * r)
    k = GroupElement(det * d / r, -det * c / r, det * c / r, det * d / r)
    return IwasawaPair(p, k)


def rotation_angle(k: GroupElement) -> float:
    """The angle theta in (-pi, pi] with k = [[cos, sin], [-sin, cos]]."""
    theta = math.atan2(float(k.b) + 0.0, float(k.a))
    return math.pi if theta <= -math.pi else theta


def x_invariant(g: GroupElement) -> int:
    """Square class of x(g): sgn(d) if c = 0, else sgn(c)."""
    return sgn(g.d) if g.c == 0 else sgn(g.c)


# --- Moebius action and automorphy factor ---------------------------------


def _check_point(z: complex) -> None:
    if complex(z).imag == 0:
        raise DomainError("point must lie off the real axis")


def mobius(g: GroupElement, z: complex) -> complex:
    _check_point(z)
    a, b, c, d = (float(x) for x in g.entries)
    return (a * z + b) / (c * z + d)


def j_factor(g: GroupElement, z: complex) -> complex:
    """sqrt(det g (c z + d)) on the principal branch, arguments in (-pi, pi].

    A negative real radicand gets -i sqrt(r) when c = 0 (so sqrt(-1) = -i
    for g = -I) and i sqrt(r) otherwise.
    """
    _check_point(z)
    det = float(g.det)
    w = det * (float(g.c) * complex(z) + float(g.d))
    if w.imag == 0 and w.real < 0:
        root = math.sqrt(-w.real)
        if g.c == 0:
            return -1j * root
        return 1j * root
    return cmath.sqrt(w)


def point_to_parabolic(z: complex) -> GroupElement:
    """The unique p in P^+-_{>0} with p i = z."""
    _check_point(z)
    z = complex(z)
    det = 1.0 if z.imag > 0 else -1.0
    a = math.sqrt(abs(z.imag))
    return GroupElement(a, z.real / (a * det), 0.0, det / a)


# --- words -----------------------------------------------------------------

U, UM, H, OMEGA_TAG, HMINUS, NEG_I_TAG, N2_TAG, N2M_TAG = (
    "U",
    "UM",
    "H",
    "OMEGA",
    "HMINUS",
    "NEG_I",
    "N2",
    "N2M",
)

_LETTER: dict[str, Callable[[object], GroupElement]] = {
    U: u,
    UM: u_minus,
    H: h,
    OMEGA_TAG: lambda k: OMEGA ** (1 if k is None else int(k)),  # type: ignore[call-overload]
    HMINUS: lambda _: H_MINUS,
    NEG_I_TAG: lambda _: NEG_I,
    N2_TAG: lambda k: N2 ** int(k),  # type: ignore[call-overload]
    N2M_TAG: lambda k: N2_MINUS ** int(k),  # type: ignore[call-overload]
}

Letter = tuple[str, object]


@dataclass(frozen=True)
class GeneratorWord:
    """A product of tagged generators, evaluated left to right."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        for tag, _ in self.letters:
            if tag not in _LETTER:
                raise DomainError(f"unknown generator tag {tag!r}")

    def __iter__(self):
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: GeneratorWord) -> GeneratorWord:
        return GeneratorWord(self.letters + other.letters)

    def evaluate(self) -> GroupElement:
        g = identity()
        for tag, param in self.letters:
            g = g @ _LETTER[tag](param)
        return g

    def inverse(self) -> GeneratorWord:
        return GeneratorWord(tuple(_invert_letter(x) for x in reversed(self.letters)))

    def __str__(self) -> str:
        return " ".join(_format_letter(x) for x in self.letters) or "1"

    @classmethod
    def parse(cls, text: str) -> GeneratorWord:
        return cls(tuple(_parse_letter(tok) for tok in text.split()))


def _invert_letter(x: Letter) -> Letter:
    tag, p = x
    if tag in (U, UM, N2_TAG, N2M_TAG):
        return (tag, -p)  # type: ignore[operator]
    if tag == H:
        return (tag, 1 / _coerce(p))
    if tag == OMEGA_TAG:
        return (tag, -(1 if p is None else p))  # type: ignore[operator]
    return x


def _format_letter(x: Letter) -> str:
    tag, p = x
    return {
        U: f"u({p})",
        UM: f"u-({p})",
        H: f"h({p})",
        OMEGA_TAG: "omega" if p in (None, 1) else f"omega^{p}",
        HMINUS: "hm",
        NEG_I_TAG: "-I",
        N2_TAG: f"n2^{p}",
        N2M_TAG: f"n2m^{p}",
    }[tag]


_TOKEN = re.compile(r"^(u-|u|h)\(([^)]+)\)$")


def _parse_letter(tok: str) -> Letter:
    t = tok.strip()
    low = t.lower()
    if low in ("omega", "w"):
        return (OMEGA_TAG, None)
    if low.startswith("omega^"):
        try:
            return (OMEGA_TAG, int(low[6:]))
        except ValueError as exc:
            raise DomainError(f"bad exponent in {tok!r}") from exc
    if low in ("hm", "h-", "h_-1", "hminus"):
        return (HMINUS, None)
    if low in ("-i", "neg_i", "negi"):
        return (NEG_I_TAG, None)
    for name, tag in (("n2m", N2M_TAG), ("n2", N2_TAG)):
        if low == name:
            return (tag, 1)
        if low.startswith(name + "^"):
            try:
                return (tag, int(low[len(name) + 1 :]))
            except ValueError as exc:
                raise DomainError(f"bad exponent in {tok!r}") from exc
    m = _TOKEN.match(low)
    if m:
        tag = {"u": U, "u-": UM, "h": H}[m.group(1)]
        try:
            value = Fraction(m.group(2))
        except ValueError as exc:
            raise DomainError(f"bad parameter in {tok!r}") from exc
        if tag == H and value == 0:
            raise DomainError("h(0) is not invertible")
        return (tag, value)
    raise DomainError(f"cannot parse generator {tok!r}")


def _round_half_to_zero(x: Fraction) -> int:
    fl = math.floor(x)
    rem = x - fl
    if rem > Fraction(1, 2):
        return fl + 1
    if rem < Fraction(1, 2):
        return fl
    return fl if fl >= 0 else fl + 1


def gamma2_decompose(g: GroupElement) -> GeneratorWord:
    """Write g in Gamma(2) as (-I)^e n2^k1 n2m^k2 ... with nonzero exponents.

    The bottom row (c, d) is reduced by right multiplication with powers of
    n2 (which changes d by multiples of 2c) and n2m (which changes c by
    multiples of 2d); |c| + |d| strictly decreases until c = 0.
    """
    if not g.in_gamma2():
        raise MembershipError(f"{g} is not in Gamma(2)")
    a, b, c, d = g.int_entries()
    applied: list[Letter] = []
    while c != 0:
        if abs(d) > abs(c):
            k = _round_half_to_zero(Fraction(d, 2 * c))
            b, d = b - 2 * k * a, d - 2 * k * c
            applied.append((N2_TAG, -k))
        else:
            k = _round_half_to_zero(Fraction(c, 2 * d))
            a, c = a - 2 * k * b, c - 2 * k * d
            applied.append((N2M_TAG, -k))
    # now g * applied = a * n2^(b/(2a)) with a = d = +-1
    head: list[Letter] = [(NEG_I_TAG, None)] if a == -1 else []
    body: list[Letter] = [(N2_TAG, (b * a) // 2)]
    body += [(tag, -k) for tag, k in reversed(applied)]  # type: ignore[operator]
    return GeneratorWord(tuple(head + _reduce(body)))


def _reduce(letters: Sequence[Letter]) -> list[Letter]:
    out: list[Letter] = []
    for tag, k in letters:
        if out and out[-1][0] == tag:
            k = out.pop()[1] + k  # type: ignore[operator]
        if k:
            out.append((tag, k))
    return out


# --- Heisenberg groups -----------------------------------------------------


@dataclass(frozen=True, slots=True)
class HeisenbergElement:
    """(x e1 + y e1*, t), optionally paired with eps in {+-1} for Ha^+-(W).

    In the extended group the pair (h, eps) stands for h * s(eps).
    """

    x: Scalar
    y: Scalar
    t: Scalar
    eps: int | None = None

    def __post_init__(self) -> None:
        for name in ("x", "y", "t"):
            object.__setattr__(self, name, _coerce(getattr(self, name)))
        if self.eps not in (None, 1, -1):
            raise DomainError(f"eps must be +-1: {self.eps!r}")

    def twist(self) -> HeisenbergElement:
        """Conjugation by s(-1): (x, y; t) -> (x, -y; -t)."""
        return HeisenbergElement(self.x, -self.y, -self.t, self.eps)


def symplectic_form(x1: Scalar, y1: Scalar, x2: Scalar, y2: Scalar) -> Scalar:
    """<w, w'> with <e1, e1*> = 1."""
    return x1 * y2 - y1 * x2


def heisenberg_mul(h1: HeisenbergElement, h2: HeisenbergElement) -> HeisenbergElement:
    if (h1.eps is None) != (h2.eps is None):
        raise TypeError("cannot multiply plain and extended Heisenberg elements")
    if h1.eps is None:
        return _plain_mul(h1, h2, None)
    assert h2.eps is not None
    h2w = h2 if h1.eps == 1 else h2.twist()
    return _plain_mul(h1, h2w, h1.eps * h2.eps)


def _plain_mul(h1: HeisenbergElement, h2: HeisenbergElement, eps: int | None) -> HeisenbergElement:
    half = Fraction(1, 2) if isinstance(h1.t, Fraction) and isinstance(h2.t, Fraction) else 0.5
    t = h1.t + h2.t + half * symplectic_form(h1.x, h1.y, h2.x, h2.y)
    return HeisenbergElement(h1.x + h2.x, h1.y + h2.y, t, eps)


def _hermitian_mul(
    v1: tuple[Scalar, Scalar, Scalar], v2: tuple[Scalar, Scalar, Scalar]
) -> tuple[Scalar, Scalar, Scalar]:
    """Ha(V) for V = C: (v, t)(v', t') = (v + v', t + t' + Im(conj(v) v')/2)."""
    (a1, b1, t1), (a2, b2, t2) = v1, v2
    im = a1 * b2 - b1 * a2  # Im((a1 - i b1)(a2 + i b2))
    return (a1 + a2, b1 + b2, t1 + t2 + Fraction(1, 2) * im)


def _default_phi(v: tuple[Scalar, Scalar, Scalar]) -> HeisenbergElement:
    a, b, t = v
    return HeisenbergElement(a, b, t)


def galois_twist_iso_check(
    sample: Iterable[tuple[tuple[Scalar, Scalar, Scalar], tuple[Scalar, Scalar, Scalar]]],
    phi: Callable[[tuple[Scalar, Scalar, Scalar]], HeisenbergElement] = _default_phi,
) -> bool:
    """Check that phi: (a + i b, t) -> (a e1 + b e1*, t) is a homomorphism from
    Ha(C) and intertwines complex conjugation with conjugation by s(-1)."""
    for v1, v2 in sample:
        v1 = tuple(_coerce(x) for x in v1)  # type: ignore[assignment]
        v2 = tuple(_coerce(x) for x in v2)  # type: ignore[assignment]
        if phi(_hermitian_mul(v1, v2)) != heisenberg_mul(phi(v1), phi(v2)):
            return False
        for v in (v1, v2):
            a, b, t = v
            if phi((a, -b, -t)) != phi(v).twist():
                return False
    return True
