"""The Weil representation of SL2^+-(R) on L^2(mu_2 x R), discretized on a
self-dual grid, together with numerical checks of its cocycle and of the
Gaussian, Fresnel, intertwiner and lattice-model identities.

Samples are stored as an array of shape (2, N): row 0 holds the epsilon = +1
component and row 1 the epsilon = -1 component, at x_j = (j - N/2) N^(-1/2).
With this spacing the kernel exp(-2 pi i x y) restricted to the grid is a
unitary matrix, so the Fourier transform is an exact isometry of the samples.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.signal import czt

from .cocycle import C_tilde, c_tilde, m_extended, nu
from .group import (
    H,
    HMINUS,
    N2_TAG,
    N2M_TAG,
    NEG_I_TAG,
    OMEGA,
    OMEGA_TAG,
    UM,
    GeneratorWord,
    GroupElement,
    H_MINUS,
    U,
    h,
    identity,
    iwasawa,
    u,
)
from .scalar import ONE, DomainError, ExactPhase, hilbert, sgn

__all__ = [
    "DEFAULT_N",
    "GridFunction",
    "OperatorResult",
    "CompositionReport",
    "EigenReport",
    "IntertwinerReport",
    "LatticeReport",
    "grid_points",
    "gaussian_pair",
    "op_upper",
    "op_diag",
    "op_omega",
    "op_flip",
    "apply_word",
    "apply_element",
    "pi_word",
    "pi_bar_element",
    "canonical_word",
    "compose_check",
    "fresnel_check",
    "intertwiner_triple_check",
    "gaussian_eigen_check",
    "lattice_transform",
    "lattice_action_check",
    "fidelity_threshold",
    "gaussian_fidelity",
    "random_word",
    "ComposeSweep",
    "compose_sweep",
]

DEFAULT_N = 4096
_SLOT = {1: 0, -1: 1}


def grid_points(n: int) -> np.ndarray:
    if n < 4 or n & (n - 1):
        raise DomainError(f"grid size must be a power of two >= 4: {n}")
    return (np.arange(n) - n // 2) / math.sqrt(n)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of f(epsilon, x) on the self-dual grid."""

    samples: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 2 or s.shape[0] != 2:
            raise DomainError(f"samples must have shape (2, N), got {s.shape}")
        grid_points(s.shape[1])
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_functions(
        cls,
        plus: Callable[[np.ndarray], np.ndarray] | None,
        minus: Callable[[np.ndarray], np.ndarray] | None,
        n: int = DEFAULT_N,
    ) -> GridFunction:
        x = grid_points(n)
        rows = [np.zeros(n, complex) if fn is None else np.asarray(fn(x), complex) for fn in (plus, minus)]
        return cls(np.stack(rows))

    @property
    def n(self) -> int:
        return self.samples.shape[1]

    @property
    def delta(self) -> float:
        return 1 / math.sqrt(self.n)

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.n)

    def slot(self, eps: int) -> np.ndarray:
        return self.samples[_SLOT[eps]]

    def inner(self, other: GridFunction) -> complex:
        """<self, other>, linear in the first argument."""
        return complex(np.vdot(other.samples, self.samples)) * self.delta

    def norm(self) -> float:
        return math.sqrt(self.inner(self).real)

    def scale(self, z: complex) -> GridFunction:
        return GridFunction(self.samples * z)

    def __sub__(self, other: GridFunction) -> GridFunction:
        return GridFunction(self.samples - other.samples)

    def __add__(self, other: GridFunction) -> GridFunction:
        return GridFunction(self.samples + other.samples)


def gaussian_pair(n: int = DEFAULT_N) -> GridFunction:
    """The standard test vector: exp(-pi x^2) on epsilon = +1 and
    (1 + x) exp(-pi x^2) on epsilon = -1."""
    return GridFunction.from_functions(_gauss_plus, _gauss_minus, n)


def _gauss_plus(x: np.ndarray) -> np.ndarray:
    return np.exp(-np.pi * x * x)


def _gauss_minus(x: np.ndarray) -> np.ndarray:
    return (1 + x) * np.exp(-np.pi * x * x)


@dataclass(frozen=True, eq=False)
class OperatorResult:
    """output = accumulated_phase * Pi(g) f for the evaluated word g."""

    output: GridFunction
    accumulated_phase: ExactPhase
    element: GroupElement

    @property
    def value(self) -> GridFunction:
        """Pi(g) f with the bookkept cocycle factors removed."""
        return self.output.scale(complex(self.accumulated_phase.inverse()))


# --- generator operators ----------------------------------------------------


def _signs(n: int) -> np.ndarray:
    return 1 - 2 * (np.arange(n) % 2)


def _fourier(v: np.ndarray, sign: int) -> np.ndarray:
    """Samples of int exp(sign 2 pi i x t) v(t) dt on the grid."""
    s = _signs(v.shape[-1])
    if sign < 0:
        return s * np.fft.fft(s * v, norm="ortho")
    return s * np.fft.ifft(s * v, norm="ortho")


def _reverse(v: np.ndarray) -> np.ndarray:
    """v(-x), wrapping the unpaired endpoint periodically."""
    return np.roll(v[::-1], 1)


def _resample(v: np.ndarray, a: float) -> np.ndarray:
    """Band-limited interpolant of v evaluated at a * x_k."""
    if a == 1:
        return v.copy()
    if a == -1:
        return _reverse(v)
    n = v.shape[-1]
    spectrum = _fourier(v, -1)
    m = np.arange(n)
    chirp_in = spectrum * np.exp(-1j * np.pi * a * m)
    raw = czt(chirp_in, m=n, w=np.exp(2j * np.pi * a / n), a=1.0)
    out = raw * np.exp(-1j * np.pi * a * m) * np.exp(1j * np.pi * a * n / 2) / math.sqrt(n)
    # the interpolant is periodic; points scaled off the grid window are zero
    x = grid_points(n)
    out[np.abs(a * x) >= -x[0]] = 0
    return out


def op_upper(b: float | Fraction, f: GridFunction) -> GridFunction:
    """Multiply by exp(i pi eps x^2 b)."""
    x2 = f.x**2
    b = float(b)
    return GridFunction(
        np.stack([f.slot(1) * np.exp(1j * np.pi * x2 * b), f.slot(-1) * np.exp(-1j * np.pi * x2 * b)])
    )


def op_diag(a: float | Fraction, f: GridFunction) -> GridFunction:
    """f(eps, x) -> |a|^(1/2) (a, eps) f(eps, x a)."""
    if a == 0:
        raise DomainError("h(0) is not invertible")
    af = float(a)
    amp = math.sqrt(abs(af))
    rows = [amp * hilbert(af, eps) * _resample(f.slot(eps), af) for eps in (1, -1)]
    return GridFunction(np.stack(rows))


def op_omega(f: GridFunction) -> GridFunction:
    """nu(eps, omega) int exp(2 pi i eps x t) f(eps, -t) dt on each slot."""
    plus = _fourier(f.slot(1), -1)
    minus = complex(nu(-1, OMEGA)) * _fourier(f.slot(-1), 1)
    return GridFunction(np.stack([plus, minus]))


def op_flip(f: GridFunction) -> GridFunction:
    """f(eps, x) -> f(-eps, x)."""
    return GridFunction(f.samples[::-1].copy())


# --- words ------------------------------------------------------------------

_Primitive = tuple[str, object]


def _primitives(word: GeneratorWord) -> list[_Primitive]:
    """Expand a word into the four basic operators u, h, omega and h_-1."""
    out: list[_Primitive] = []
    for tag, p in word:
        if tag == U:
            out.append((U, p))
        elif tag == N2_TAG:
            out.append((U, 2 * p))  # type: ignore[operator]
        elif tag == H:
            out.append((H, p))
        elif tag == NEG_I_TAG:
            out.append((H, -1))
        elif tag == HMINUS:
            out.append((HMINUS, None))
        elif tag == OMEGA_TAG:
            k = 1 if p is None else int(p)  # type: ignore[call-overload]
            if k < 0 and k % 2:
                out.append((H, -1))
            out.extend([(OMEGA_TAG, None)] * abs(k))
        elif tag in (UM, N2M_TAG):
            c = p if tag == UM else 2 * p  # type: ignore[operator]
            # u-(c) = omega^-1 u(-c) omega and omega^-1 = h(-1) omega
            out.extend([(H, -1), (OMEGA_TAG, None), (U, -c), (OMEGA_TAG, None)])  # type: ignore[operator]
        else:
            raise DomainError(f"letter {tag} has no operator")
    return out


def _matrix(p: _Primitive) -> GroupElement:
    tag, v = p
    if tag == U:
        return u(v)
    if tag == H:
        return h(v)
    if tag == OMEGA_TAG:
        return OMEGA
    return H_MINUS


def _operator(p: _Primitive, f: GridFunction) -> GridFunction:
    tag, v = p
    if tag == U:
        return op_upper(v, f)  # type: ignore[arg-type]
    if tag == H:
        return op_diag(v, f)  # type: ignore[arg-type]
    if tag == OMEGA_TAG:
        return op_omega(f)
    return op_flip(f)


def apply_word(word: GeneratorWord, f: GridFunction) -> OperatorResult:
    """Apply Pi(l_1) ... Pi(l_n) to f.

    The accumulated phase is prod_i C_tilde(l_1 ... l_{i-1}, l_i), so that
    output = phase * Pi(l_1 ... l_n) f.
    """
    prims = _primitives(word)
    phase = ONE
    g = identity()
    for p in prims:
        x = _matrix(p)
        phase = phase * C_tilde(g, x)
        g = g @ x
    out = f
    for p in reversed(prims):
        out = _operator(p, out)
    return OperatorResult(out, phase, g)


def pi_word(word: GeneratorWord, f: GridFunction) -> GridFunction:
    return apply_word(word, f).value


def canonical_word(g: GroupElement) -> GeneratorWord:
    """A word for g built from its Iwasawa decomposition g = p k.

    p = s(det) h(1/r) u(t) and k is a rotation written with omega and at
    most three shears.
    """
    pair = iwasawa(g)
    p = pair.p
    det = 1 if float(g.det) > 0 else -1
    letters: list[tuple[str, object]] = []
    if det == -1:
        letters.append((HMINUS, None))
    r = 1 / float(p.a)
    letters.append((H, 1 / r))
    letters.append((U, float(p.b) * r))
    letters.extend(_rotation_letters(pair.theta))
    return GeneratorWord(tuple(letters))


def _rotation_letters(phi: float) -> list[tuple[str, object]]:
    if phi == 0:
        return []
    if phi == math.pi:
        return [(NEG_I_TAG, None)]
    if phi == -math.pi / 2:
        return [(OMEGA_TAG, None)]
    if phi == math.pi / 2:
        return [(OMEGA_TAG, -1)]
    if abs(phi) <= math.pi / 2:
        t = math.tan(phi / 2)
        return [(U, t), (UM, -math.sin(phi)), (U, t)]
    if phi < 0:
        return _rotation_letters(phi + math.pi / 2) + [(OMEGA_TAG, None)]
    return _rotation_letters(phi - math.pi / 2) + [(OMEGA_TAG, -1)]


def apply_element(g: GroupElement, f: GridFunction) -> GridFunction:
    """Pi(g) f through the Iwasawa word of g."""
    return pi_word(canonical_word(g), f)


def pi_bar_element(g: GroupElement, f: GridFunction) -> GridFunction:
    """The normalized operator m(g) Pi(g) f."""
    return apply_element(g, f).scale(complex(m_extended(g)))


# --- composition ----------------------------------------------------------


@dataclass(frozen=True)
class CompositionReport:
    expected: ExactPhase
    measured: complex
    residual: float

    @property
    def phase_error(self) -> float:
        return abs(self.measured - complex(self.expected))

    def ok(self, tol: float = 1e-6) -> bool:
        return self.phase_error < tol and self.residual < tol


def compose_check(w1: GeneratorWord, w2: GeneratorWord, f: GridFunction) -> CompositionReport:
    """Compare Pi(g1) Pi(g2) f against Pi(g1 g2) f and against C_tilde(g1, g2)."""
    g1, g2 = w1.evaluate(), w2.evaluate()
    lhs = pi_word(w1, pi_word(w2, f))
    rhs = apply_element(g1 @ g2, f)
    denom = rhs.inner(rhs).real
    if denom < 1e-300 or f.norm() == 0:
        raise DomainError("degenerate test vector")
    measured = lhs.inner(rhs) / denom
    residual = (lhs - rhs.scale(measured)).norm() / f.norm()
    return CompositionReport(C_tilde(g1, g2), measured, residual)


# --- Fresnel identity -----------------------------------------------------


def fresnel_check(f: np.ndarray, sign: int = 1) -> float:
    """|int fhat(x) e(sign x^2/2) dx - e^(sign i pi/4) int f(x) e(-sign x^2/2) dx|.

    ``f`` is a sample vector on the self-dual grid; fhat uses exp(-2 pi i x t).
    """
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    v = np.asarray(f, complex)
    x = grid_points(v.shape[-1])
    delta = 1 / math.sqrt(v.shape[-1])
    fhat = _fourier(v, -1)
    lhs = delta * np.sum(fhat * np.exp(sign * 1j * np.pi * x * x))
    rhs = cmath.exp(sign * 1j * math.pi / 4) * delta * np.sum(v * np.exp(-sign * 1j * np.pi * x * x))
    return float(abs(lhs - rhs))


# --- intertwiner triple ---------------------------------------------------


@dataclass(frozen=True)
class IntertwinerReport:
    c: float
    s: float
    measured: complex
    expected: ExactPhase
    cocycle_value: ExactPhase
    residual: float

    def ok(self, tol: float = 1e-6) -> bool:
        return (
            abs(self.measured - complex(self.expected)) < tol
            and self.residual < tol
            and self.cocycle_value == self.expected
        )


def intertwiner_triple_check(c: float, s: float, n: int = DEFAULT_N) -> IntertwinerReport:
    """Compose the three partial Fourier transforms between X*, Y* = R c e1 and
    Z* = R (e1 + s e1*) on a Gaussian and compare with a scalar."""
    if c <= 0:
        raise DomainError("c must be positive")
    if s == 0:
        raise DomainError("s = 0 makes Z* equal to X")
    x = grid_points(n)
    delta = 1 / math.sqrt(n)
    f = np.exp(-np.pi * x * x) * (1 + 0.5 * x)
    g1 = c**-0.5 * _fourier(f, 1)
    g2 = c**0.5 * abs(s) ** -0.5 * _fourier(np.exp(-1j * np.pi * x * x / s) * g1, -1)
    g3 = abs(s) * _chirp_convolve(g2, s, n, delta)
    # the sampled chirp kernel aliases beyond |x| = 32/|s|
    half = min(x[-1], (n**0.5 / 2) / abs(s))
    window = np.abs(x) <= half
    fw, gw = f[window], g3[window]
    measured = complex(np.vdot(fw, gw) / np.vdot(fw, fw))
    residual = float(np.linalg.norm(gw - measured * fw) / np.linalg.norm(f))
    expected = ExactPhase(Fraction(-sgn(s), 4))
    m1 = GroupElement(0, -1 / Fraction(c).limit_denominator(), Fraction(c).limit_denominator(), 0)
    m2 = GroupElement(0, -1, 1, Fraction(s).limit_denominator())
    return IntertwinerReport(c, s, measured, expected, c_tilde(m2 @ m1.inverse(), m1), residual)


def _chirp_convolve(v: np.ndarray, s: float, n: int, delta: float) -> np.ndarray:
    """delta * sum_j exp(-pi i s (x_k - x_j)^2) v_j by zero-padded FFT."""
    lags = np.arange(-n + 1, n) * delta
    kernel = np.exp(-1j * np.pi * s * lags * lags)
    size = 4 * n
    full = np.fft.ifft(np.fft.fft(v, size) * np.fft.fft(kernel, size))
    return delta * full[n - 1 : 2 * n - 1]


# --- Gaussian eigenvectors and Lie derivatives ----------------------------


@dataclass
class EigenReport:
    failures: list[tuple[str, float, float]] = field(default_factory=list)
    worst: dict[str, float] = field(default_factory=dict)

    def record(self, name: str, err: float, tol: float) -> None:
        self.worst[name] = max(self.worst.get(name, 0.0), err)
        if not err < tol:
            self.failures.append((name, err, tol))

    @property
    def ok(self) -> bool:
        return not self.failures


def _one_parameter(kind: str, t: float) -> GroupElement:
    if kind == "h":
        return GroupElement(math.exp(t), 0.0, 0.0, math.exp(-t))
    if kind == "e+":
        return GroupElement(1.0, t, 0.0, 1.0)
    return GroupElement(1.0, 0.0, t, 1.0)


def _lie_derivative(kind: str, f: GridFunction, step: float) -> GridFunction:
    """Central difference of t -> Pi_bar(exp(t Z)) f at 0, one Richardson step."""

    def central(hh: float) -> np.ndarray:
        plus = pi_bar_element(_one_parameter(kind, hh), f).samples
        minus = pi_bar_element(_one_parameter(kind, -hh), f).samples
        return (plus - minus) / (2 * hh)

    coarse, fine = central(step), central(step / 2)
    return GridFunction((4 * fine - coarse) / 3)


def _spectral_d2(v: np.ndarray) -> np.ndarray:
    n = v.shape[-1]
    xi = grid_points(n)
    return _fourier(-4 * np.pi**2 * xi * xi * _fourier(v, -1), 1)


def gaussian_eigen_check(
    n: int = DEFAULT_N,
    angles: Sequence[float] | None = None,
    step: float = 1e-4,
    rot_tol: float = 1e-6,
    lie_tol: float = 1e-4,
) -> EigenReport:
    """Rotation weights and Lie-algebra action on A = exp(-pi x^2) and
    B = x exp(-pi x^2), placed on the epsilon = +1 slot."""
    report = EigenReport()
    x = grid_points(n)
    gauss = np.exp(-np.pi * x * x)
    zeros = np.zeros(n)
    A = GridFunction(np.stack([gauss, zeros]))
    B = GridFunction(np.stack([x * gauss, zeros]))
    if angles is None:
        angles = [-math.pi + (k + 0.5) * 2 * math.pi / 32 for k in range(32)]
    for t in angles:
        k = GroupElement(math.cos(t), math.sin(t), -math.sin(t), math.cos(t))
        for name, vec, weight in (("rotation A", A, 0.5), ("rotation B", B, 1.5)):
            got = pi_bar_element(k, vec)
            err = (got - vec.scale(cmath.exp(1j * weight * t))).norm() / vec.norm()
            report.record(name, err, rot_tol)

    for name, vec in (("A", A), ("B", B)):
        v = vec.slot(1)
        dh = _lie_derivative("h", vec, step)
        dp = _lie_derivative("e+", vec, step)
        dm = _lie_derivative("e-", vec, step)
        dv = _fourier(2j * np.pi * x * _fourier(v, -1), 1)
        exact = {
            "h": 0.5 * v + x * dv,
            "e+": 1j * np.pi * x * x * v,
            "e-": 1j / (4 * np.pi) * _spectral_d2(v),
        }
        norm = vec.norm()
        for key, num in (("h", dh), ("e+", dp), ("e-", dm)):
            err = np.linalg.norm(num.slot(1) - exact[key]) * vec.delta**0.5 / norm
            report.record(f"d{key} {name}", err, lie_tol)
        j0 = dp - dm
        jminus = GridFunction((1j * dh.samples + 2 * dp.samples - j0.samples) / 2)
        weight = 0.5 if name == "A" else 1.5
        report.record(f"J0 {name}", (j0 - vec.scale(1j * weight)).norm() / norm, lie_tol)
        report.record(f"J- {name}", jminus.norm() / norm, lie_tol)

    minus_i = GroupElement(-1, 0, 0, -1)
    for eps in (1, -1):
        for name, base, twist in (("A", gauss, -1j), ("B", x * gauss, 1j)):
            rows = [base, zeros] if eps == 1 else [zeros, base]
            vec = GridFunction(np.stack(rows))
            got = pi_bar_element(minus_i, vec).scale(twist)
            err = (got - vec.scale(hilbert(-1, eps))).norm() / vec.norm()
            report.record(f"h(-1) {name} eps={eps}", err, rot_tol)
    return report


# --- lattice model ----------------------------------------------------------


@dataclass(frozen=True)
class LatticeReport:
    word: str
    eps: int
    expected: ExactPhase
    measured: complex
    relative_error: float

    def ok(self, tol: float = 1e-8) -> bool:
        return abs(self.measured - complex(self.expected)) < tol and self.relative_error < tol


def lattice_transform(
    values: Callable[[int, np.ndarray], np.ndarray],
    eps: int,
    x: np.ndarray,
    xstar: np.ndarray,
    truncation: int = 12,
) -> np.ndarray:
    """theta(f)(eps, x e1 + x* e1*) = sum_l f(eps, x + l) e(eps l x*) e(eps x x*/2)."""
    x = np.asarray(x, float)
    xstar = np.asarray(xstar, float)
    total = np.zeros(np.broadcast(x, xstar).shape, complex)
    for l in range(-truncation, truncation + 1):
        total = total + values(eps, x + l) * np.exp(2j * np.pi * eps * l * xstar)
    return total * np.exp(1j * np.pi * eps * x * xstar)


def lattice_action_check(
    word: GeneratorWord,
    eps_values: Sequence[int] = (1, -1),
    points: int = 18,
    truncation: int = 12,
    seed: int = 0,
    n: int = DEFAULT_N,
) -> list[LatticeReport]:
    """Test Pi(g) theta f(eps, w) = upsilon(g, eps) theta f(det(g) eps, w g).

    f is the analytic Gaussian pair, so the right side can be evaluated at
    the off-grid points w g. The left side is read from the grid output of
    Pi(g) f at grid nodes x with |x| < 1 and random x* in (-1, 1).
    """
    from .theta import upsilon

    f = gaussian_pair(n)
    result = apply_word(word, f)
    out, g = result.value, result.element
    det = 1 if g.det > 0 else -1
    root = math.isqrt(n)
    centre = n // 2
    idx = centre + np.linspace(-(root - 1), root - 1, points).round().astype(int)
    xs = f.x[idx]
    xstar = np.random.default_rng(seed).uniform(-1, 1, points)
    a, b, c, d = (float(t) for t in g.entries)

    def grid_values(e: int, x: np.ndarray) -> np.ndarray:
        j = np.rint(x * root).astype(int) + centre
        inside = (j >= 0) & (j < n)
        vals = np.zeros(x.shape, complex)
        vals[inside] = out.slot(e)[j[inside]]
        return vals

    def analytic(e: int, x: np.ndarray) -> np.ndarray:
        return _gauss_plus(x) if e == 1 else _gauss_minus(x)

    reports = []
    for eps in eps_values:
        if eps not in (1, -1):
            raise DomainError(f"eps must be +1 or -1: {eps}")
        lhs = lattice_transform(grid_values, eps, xs, xstar, truncation)
        rhs = lattice_transform(analytic, det * eps, xs * a + xstar * c, xs * b + xstar * d, truncation)
        ratio = complex(np.vdot(rhs, lhs) / np.vdot(rhs, rhs))
        err = float(np.linalg.norm(lhs - ratio * rhs) / np.linalg.norm(rhs))
        reports.append(LatticeReport(str(word), eps, upsilon(g, eps), ratio, err))
    return reports


# --- grid fidelity ------------------------------------------------------------


def fidelity_threshold(n: int = DEFAULT_N, digits: float = 9.0) -> float:
    """Smallest Gaussian width parameter the grid resolves to 10^-digits.

    A Gaussian exp(i pi z x^2) decays to 10^-digits at the window edge
    L = sqrt(N)/2 when Im z >= digits ln 10 / (pi L^2); its transform needs
    the same of Im(-1/z).
    """
    half = math.sqrt(n) / 2
    return digits * math.log(10) / (math.pi * half * half)


def _track(word: GeneratorWord, states: list[tuple[int, complex]]) -> tuple[list[tuple[int, complex]], float]:
    def quality(sts: list[tuple[int, complex]]) -> float:
        return min(min(z.imag, (-1 / z).imag) for _, z in sts)

    worst = quality(states)
    for tag, p in reversed(_primitives(word)):
        nxt = []
        for slot, z in states:
            if tag == U:
                z = z + slot * float(p)  # type: ignore[arg-type]
            elif tag == H:
                z = z * float(p) ** 2  # type: ignore[arg-type]
            elif tag == OMEGA_TAG:
                z = -1 / z
            else:
                slot = -slot
            nxt.append((slot, z))
        states = nxt
        worst = min(worst, quality(states))
    return states, worst


def gaussian_fidelity(w1: GeneratorWord, w2: GeneratorWord) -> float:
    """Worst Gaussian width met while computing both sides of ``compose_check``.

    The widths of exp(-pi x^2) on each slot are followed through w2, then w1,
    and through the Iwasawa word of g1 g2. Values below ``fidelity_threshold``
    mean the grid cannot represent some intermediate vector.
    """
    start = [(1, 1j), (-1, 1j)]
    mid, q2 = _track(w2, start)
    _, q1 = _track(w1, mid)
    _, q3 = _track(canonical_word(w1.evaluate() @ w2.evaluate()), start)
    return min(q1, q2, q3)


def random_word(rng: random.Random, max_len: int = 4, max_param: Fraction = Fraction(3)) -> GeneratorWord:
    """Random word in u(b), u-(c), h(a), omega and h_-1.

    Shear parameters are multiples of 1/4 in [-max_param, max_param]; scalings
    satisfy |a| in [1/2, 2].
    """
    quarters = int(max_param * 4)
    letters: list[tuple[str, object]] = []
    for _ in range(rng.randint(1, max_len)):
        kind = rng.choice((U, UM, H, OMEGA_TAG, HMINUS))
        if kind in (U, UM):
            letters.append((kind, Fraction(rng.randint(-quarters, quarters), 4)))
        elif kind == H:
            letters.append((kind, Fraction(rng.randint(2, 8), 4) * rng.choice((1, -1))))
        else:
            letters.append((kind, None))
    return GeneratorWord(tuple(letters))


@dataclass
class ComposeSweep:
    reports: list[tuple[GeneratorWord, GeneratorWord, CompositionReport]] = field(default_factory=list)
    rejected: int = 0

    def failures(self, tol: float = 1e-6) -> list[tuple[GeneratorWord, GeneratorWord, CompositionReport]]:
        return [r for r in self.reports if not r[2].ok(tol)]


def compose_sweep(pairs: int, seed: int = 0, n: int = DEFAULT_N, max_len: int = 4) -> ComposeSweep:
    """Run ``compose_check`` on ``pairs`` random word pairs the grid can resolve.

    Candidate pairs whose ``gaussian_fidelity`` falls below
    ``fidelity_threshold(n)`` are drawn again and counted in ``rejected``.
    """
    rng = random.Random(seed)
    f = gaussian_pair(n)
    tau = fidelity_threshold(n)
    sweep = ComposeSweep()
    while len(sweep.reports) < pairs:
        w1, w2 = random_word(rng, max_len), random_word(rng, max_len)
        if gaussian_fidelity(w1, w2) < tau:
            sweep.rejected += 1
            continue
        sweep.reports.append((w1, w2, compose_check(w1, w2, f)))
    return sweep
