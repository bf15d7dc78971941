"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or
directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import cmath
import math
import random
import sys
import time
from collections.abc import Callable
from fractions import Fraction

import numpy as np
import pytest

from metaplectic.cocycle import (
    C_bar,
    C_tilde,
    c_bar,
    c_tilde,
    cocycle_identity_failures,
    gamma2pm_obstruction,
    gamma2pm_obstruction_closed,
    so2pm_obstruction,
)
from metaplectic.group import N2, N2_MINUS, NEG_I, mat
from metaplectic.sampling import (
    random_gamma2,
    random_gamma2_hat,
    random_gamma2_hat_word,
    random_sl2,
    random_sl2pm,
    random_sl2z,
    random_theta_word,
)
from metaplectic.scalar import (
    ONE,
    ExactPhase,
    dedekind_sum,
    gauss_sum,
    gauss_sum_closed,
    gauss_sum_direct_row,
    jacobi,
)
from metaplectic.theta import ExcludedPairError, ThetaQuery, theta_eval, transformation_check
from metaplectic.trivialize import (
    BETA1_BAR,
    BETA1_TILDE,
    BETA_BAR,
    BETA_TILDE,
    beta_tilde,
    chi,
    coboundary_check,
    epsilon_word,
)
from metaplectic.weilrep import (
    compose_sweep,
    fresnel_check,
    gaussian_eigen_check,
    grid_points,
    intertwiner_triple_check,
)

Outcome = tuple[bool, str]


def _line(number: int, outcome: Outcome) -> str:
    ok, detail = outcome
    return f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"


def criterion_1() -> Outcome:
    rng = random.Random(1)
    start = time.perf_counter()
    sl2 = [(random_sl2(rng), random_sl2(rng), random_sl2(rng)) for _ in range(10_000)]
    pm = [(random_sl2pm(rng), random_sl2pm(rng), random_sl2pm(rng)) for _ in range(10_000)]
    failures = sum(len(cocycle_identity_failures(c, sl2)) for c in (c_tilde, c_bar))
    failures += sum(len(cocycle_identity_failures(c, pm)) for c in (C_tilde, C_bar))
    elapsed = time.perf_counter() - start
    mixed = sum(g.det == -1 for t in pm for g in t)
    ok = failures == 0 and elapsed < 10 and 0 < mixed < 30_000
    return ok, f"{failures} cocycle-identity failures over 4 x 10^4 triples in {elapsed:.1f} s (limit 10 s)"


def criterion_2() -> Outcome:
    first = c_bar(NEG_I, NEG_I) == ExactPhase(1)
    rest = [n for n in range(1, 101) if c_bar(NEG_I, mat(-1, 0, Fraction(1, n), -1)) != ONE]
    return first and not rest, f"c_bar(-I,-I) = {c_bar(NEG_I, NEG_I)}, {len(rest)} of 100 discontinuity values differ from 1"


def _pairs(sampler: Callable[[random.Random], object], seed: int, count: int = 10_000) -> list:
    rng = random.Random(seed)
    return [(sampler(rng), sampler(rng)) for _ in range(count)]


def criterion_3() -> Outcome:
    start = time.perf_counter()
    cases = [
        (c_tilde, BETA_TILDE, random_gamma2_hat, 31),
        (c_bar, BETA_BAR, random_gamma2, 32),
        (c_bar, BETA1_BAR, random_sl2z, 33),
        (c_tilde, BETA1_TILDE, random_sl2z, 34),
    ]
    failures = 0
    for cocycle, split, sampler, seed in cases:
        report = coboundary_check(cocycle, split, _pairs(sampler, seed))
        failures += len(report.failures)
    elapsed = time.perf_counter() - start
    return failures == 0 and elapsed < 30, f"{failures} coboundary failures over 4 x 10^4 pairs in {elapsed:.1f} s (limit 30 s)"


def criterion_4() -> Outcome:
    generators = chi(N2) == ExactPhase(Fraction(-1, 6)) and chi(N2_MINUS) == ExactPhase(Fraction(1, 6))
    rng = random.Random(4)
    bad = 0
    for _ in range(1000):
        g1, g2 = random_gamma2(rng, length=10), random_gamma2(rng, length=10)
        bad += chi(g1 @ g2) != chi(g1) * chi(g2)
        bad += chi(NEG_I @ g1) != chi(g1)
    words = [random_gamma2_hat_word(rng) for _ in range(1000)]
    bad_eps = sum(epsilon_word(w) * beta_tilde(w.evaluate()) != ONE for w in words)
    ok = generators and bad == 0 and bad_eps == 0
    return ok, f"chi generator values {'ok' if generators else 'wrong'}, {bad} chi failures, {bad_eps} eps_g beta_tilde != 1"


def criterion_5() -> Outcome:
    direct: dict[tuple[int, int], complex] = {}
    worst = 0.0
    for c in range(-500, 501):
        if c == 0:
            continue
        ds = [d for d in range(-500, 501) if (c * d) % 2 == 0 and math.gcd(c, d) == 1]
        for d, value in zip(ds, gauss_sum_direct_row(ds, c)):
            direct[d, c] = complex(value)
            worst = max(worst, abs(complex(gauss_sum(d, c)) - value))
    recip = 0.0
    for (d, c), value in direct.items():
        if d != 0:
            expected = cmath.exp(-1j * math.pi * (1 if c * d > 0 else -1) / 4)
            recip = max(recip, abs(value * direct[c, d] - expected))
    exact = gauss_sum_closed(1, 2) == ExactPhase(Fraction(-1, 4))
    ok = worst < 1e-10 and recip < 1e-10 and exact
    return ok, f"{len(direct)} pairs, closed vs direct {worst:.1e}, reciprocity {recip:.1e}, beta(1,2) exact: {exact}"


def criterion_6() -> Outcome:
    recip_bad = congruence_bad = printed_bad = pairs = 0
    for c in range(1, 201):
        for d in range(1, 201):
            if math.gcd(c, d) != 1:
                continue
            pairs += 1
            total = 12 * dedekind_sum(d, c) + 12 * dedekind_sum(c, d)
            recip_bad += total != -3 + Fraction(d, c) + Fraction(c, d) + Fraction(1, c * d)
            if d % 2:
                value = 12 * d * dedekind_sum(c, d)
                congruence_bad += value.denominator != 1 or (value - (d + 1 - 2 * jacobi(c, d))) % 8 != 0
                printed_bad += value.denominator != 1 or (value - (d + 1 - jacobi(c, d))) % 8 != 0
    rng = random.Random(6)
    three_bad = checked = 0
    while checked < 1000:
        c, d, r, s = (rng.randint(1, 200) for _ in range(4))
        if math.gcd(c, d) != 1 or math.gcd(r, s) != 1:
            continue
        u = pow(r, -1, s) if s > 1 else 0
        v = (1 - r * u) // s
        t = c * s + d * r
        rhs = dedekind_sum(c * u - d * v, t) - Fraction(1, 4)
        rhs += Fraction(1, 12) * (Fraction(d, s * t) + Fraction(s, t * d) + Fraction(t, d * s))
        three_bad += dedekind_sum(c, d) + dedekind_sum(r, s) != rhs
        checked += 1
    ok = recip_bad == congruence_bad == three_bad == 0
    detail = (
        f"{pairs} coprime pairs: {recip_bad} reciprocity, {congruence_bad} congruence"
        f" (12ds = d+1-2(c/d) mod 8) and {three_bad}/1000 three-term failures;"
        f" the single-symbol form d+1-(c/d) fails on {printed_bad} odd-d pairs"
    )
    return ok, detail


def criterion_7() -> Outcome:
    start = time.perf_counter()
    sweep = compose_sweep(200, seed=7)
    failures = sweep.failures(1e-6)
    worst = max(max(r.phase_error, r.residual) for _, _, r in sweep.reports)
    x = grid_points(4096)
    fresnel = max(
        fresnel_check(x**k * np.exp(-math.pi * x * x), sign)
        for k in (0, 1)
        for sign in (1, -1)
    )
    inter = [intertwiner_triple_check(c, s) for c in (0.5, 1.0, 2.0) for s in (0.5, 1.0, 2.0, -0.5, -1.0, -2.0)]
    inter_bad = sum(not r.ok(1e-6) for r in inter)
    elapsed = time.perf_counter() - start
    ok = not failures and fresnel < 1e-8 and inter_bad == 0 and elapsed < 120
    detail = (
        f"compose {len(sweep.reports) - len(failures)}/200 within 1e-6 (worst {worst:.1e},"
        f" {sweep.rejected} candidates beyond grid fidelity redrawn), Fresnel {fresnel:.1e},"
        f" intertwiner {len(inter) - inter_bad}/{len(inter)}, {elapsed:.1f} s (limit 120 s)"
    )
    return ok, detail


def criterion_8() -> Outcome:
    report = gaussian_eigen_check()
    rot = max(v for k, v in report.worst.items() if k.startswith(("rotation", "h(-1)")))
    lie = max(v for k, v in report.worst.items() if k.startswith(("d", "J")))
    return report.ok, f"32 angles, rotation worst {rot:.1e} (tol 1e-6), Lie derivatives worst {lie:.1e} (tol 1e-4)"


THETA_POINTS = (1j, 0.25 + 2j, -1 + 1j, 0.3 + 0.7j)


def criterion_9() -> Outcome:
    rng = random.Random(9)
    points = THETA_POINTS + tuple(z.conjugate() for z in THETA_POINTS)
    worst, checked, excluded = 0.0, 0, 0
    for _ in range(100):
        g = random_theta_word(rng, 6).evaluate()
        det = 1 if g.det > 0 else -1
        for z in points:
            eps = det * (1 if z.imag > 0 else -1)
            try:
                worst = max(worst, transformation_check(g, z, eps).residual)
            except ExcludedPairError:
                excluded += 1
                continue
            checked += 1
    fixed = transformation_check(mat(0, -1, 1, 0), 1j, 1).residual
    value = theta_eval(ThetaQuery(1j, 1))
    value_ok = abs(value.value - 1.0864348112) < 5e-11 + value.tail
    ok = worst < 1e-10 and fixed < 1e-12 and value_ok and checked >= 700
    detail = (
        f"{checked} cases ({excluded} excluded pairs) worst {worst:.1e}, fixed point {fixed:.1e},"
        f" theta(i) = {value.value.real:.12f} (tail {value.tail:.0e})"
    )
    return ok, detail


def criterion_10() -> Outcome:
    thetas = [math.pi * k / 360 for k in range(-359, 361)]
    worst = max(abs(so2pm_obstruction(t) - cmath.exp(1j * t)) for t in thetas)
    at_pi = so2pm_obstruction(math.pi)
    rng = random.Random(10)
    bad = 0
    for _ in range(1000):
        g = random_gamma2(rng)
        bad += gamma2pm_obstruction(g) != gamma2pm_obstruction_closed(g)
    ok = worst < 1e-12 and at_pi == -1 and bad == 0
    return ok, f"SO2 worst {worst:.1e} on {len(thetas)} angles, value at pi = {at_pi}, {bad}/1000 Gamma(2) mismatches"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 11)}


@pytest.mark.parametrize("number", list(CRITERIA))
def test_criterion(number: int) -> None:
    outcome = CRITERIA[number]()
    print(_line(number, outcome))
    assert outcome[0], _line(number, outcome)


if __name__ == "__main__":
    results = [(n, CRITERIA[n]()) for n in CRITERIA]
    for n, outcome in results:
        print(_line(n, outcome))
    sys.exit(0 if all(o[0] for _, o in results) else 1)
