"""Command-line entry point: ``metaplectic {cocycle,split,weilrep,theta}``.

Every command writes one report, either JSON

    {"check": ..., "params": {...}, "cases": [{"in", "expected", "got", "residual"}], "pass": ...}

or CSV with a header row. Sweeps list only their failing cases and put the
number of checked cases in ``params``. Exit status: 0 pass, 1 verification
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import cocycle as coc
from . import trivialize as triv
from . import weilrep as wr
from .group import GeneratorWord, GroupElement, gamma2_decompose
from .sampling import (
    random_gamma2,
    random_gamma2_hat,
    random_sl2,
    random_sl2pm,
    random_sl2z,
    random_theta_word,
)
from .scalar import DomainError, ExactPhase
from .theta import (
    ExcludedPairError,
    ThetaQuery,
    lambda_from_operators,
    multiplier_lambda,
    theta_eval,
    transformation_check,
)

__all__ = ["RunConfig", "Report", "main", "parse_matrix", "format_value"]

OUTPUT_DIR_ENV = "METAPLECTIC_OUTPUT_DIR"
THETA_POINTS = (1j, 0.25 + 2j, -1 + 1j, 0.3 + 0.7j)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    seed: int
    fmt: str
    output: Path | None


@dataclass
class Report:
    check: str
    params: dict[str, Any]
    cases: list[dict[str, Any]] = field(default_factory=list)
    passed: bool = True

    def add(self, inp: Any, expected: Any, got: Any, residual: float | None = None, ok: bool = True) -> None:
        self.cases.append(
            {
                "in": format_value(inp),
                "expected": format_value(expected),
                "got": format_value(got),
                "residual": None if residual is None else float(f"{residual:.6g}"),
            }
        )
        self.passed = self.passed and bool(ok)

    def as_dict(self) -> dict[str, Any]:
        return {"check": self.check, "params": self.params, "cases": self.cases, "pass": self.passed}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "in", "expected", "got", "residual", "pass"])
        for case in self.cases:
            writer.writerow([self.check, case["in"], case["expected"], case["got"], case["residual"], self.passed])
        if not self.cases:
            writer.writerow([self.check, "", "", "", "", self.passed])
        return buf.getvalue()


def format_value(v: Any) -> Any:
    """Exact phases as e^{iπ·p/q}; complex doubles with 12 significant digits."""
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, ExactPhase):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return " ".join(str(format_value(x)) for x in v)
    return str(v)


_MATRIX = re.compile(r"\[\[([^\[\],]+),([^\[\],]+)\],\[([^\[\],]+),([^\[\],]+)\]\]")


def parse_matrix(text: str) -> GroupElement:
    """Parse ``[[a,b],[c,d]]`` with integer or ``p/q`` entries."""
    m = _MATRIX.fullmatch(text.replace(" ", ""))
    if not m:
        raise UsageError(f"malformed matrix {text!r}")
    try:
        entries = [Fraction(x) for x in m.groups()]
    except ValueError as exc:
        raise UsageError(f"malformed entry in {text!r}") from exc
    return GroupElement(*entries)


def parse_matrices(text: str) -> list[GroupElement]:
    compact = text.replace(" ", "")
    found = _MATRIX.findall(compact)
    if not found or "".join(f"[[{a},{b}],[{c},{d}]]" for a, b, c, d in found) != compact:
        raise UsageError(f"malformed matrix list {text!r}")
    return [parse_matrix(f"[[{a},{b}],[{c},{d}]]") for a, b, c, d in found]


def parse_element(text: str) -> GroupElement:
    """A matrix literal or a generator word such as ``omega n2^-1``."""
    if text.strip().startswith("["):
        return parse_matrix(text)
    try:
        return GeneratorWord.parse(text).evaluate()
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def parse_complex(text: str) -> complex:
    t = text.replace(" ", "").replace("i", "j")
    if t in ("j", "+j"):
        return 1j
    if t == "-j":
        return -1j
    try:
        return complex(t)
    except ValueError as exc:
        raise UsageError(f"malformed complex number {text!r}") from exc


# --- cocycle ----------------------------------------------------------------

_KINDS: dict[str, Callable[[GroupElement, GroupElement], ExactPhase]] = {
    "ctilde": coc.c_tilde,
    "cbar": coc.c_bar,
    "Ctilde": coc.C_tilde,
    "Cbar": coc.C_bar,
}


def cmd_cocycle(args: argparse.Namespace, cfg: RunConfig) -> Report:
    if args.pair is not None:
        pair = parse_matrices(args.pair)
        if len(pair) != 2:
            raise UsageError("--pair needs exactly two matrices")
        g1, g2 = pair
        report = Report("cocycle-value", {"kind": args.kind, "pair": args.pair})
        kinds = list(_KINDS) if args.kind == "all" else [args.kind]
        for kind in kinds:
            try:
                value = _KINDS[kind](g1, g2)
            except DomainError as exc:
                raise UsageError(str(exc)) from exc
            report.add(f"{kind}({g1}, {g2})", None, value)
        return report
    count = args.sweep or 1000
    rng = random.Random(cfg.seed)
    report = Report("cocycle-identity", {"sweep": count, "seed": cfg.seed})
    sl2 = [(random_sl2(rng), random_sl2(rng), random_sl2(rng)) for _ in range(count)]
    pm = [(random_sl2pm(rng), random_sl2pm(rng), random_sl2pm(rng)) for _ in range(count)]
    for kind, triples in (("ctilde", sl2), ("cbar", sl2), ("Ctilde", pm), ("Cbar", pm)):
        bad = coc.cocycle_identity_failures(_KINDS[kind], triples)
        report.params[f"{kind}_checked"] = len(triples)
        for g1, g2, g3 in bad:
            report.add(f"{kind}: {g1} {g2} {g3}", "identity", "violated", ok=False)
    return report


# --- split ------------------------------------------------------------------

_MAPS: dict[str, tuple[triv.TrivializationMap, Callable[[GroupElement, GroupElement], ExactPhase]]] = {
    "beta-tilde": (triv.BETA_TILDE, coc.c_tilde),
    "beta-bar": (triv.BETA_BAR, coc.c_bar),
    "beta1-bar": (triv.BETA1_BAR, coc.c_bar),
    "asai": (triv.BETA1_BAR, coc.c_bar),
    "beta1-tilde": (triv.BETA1_TILDE, coc.c_tilde),
}

_GROUPS: dict[str, Callable[[random.Random], GroupElement]] = {
    "gamma2": random_gamma2,
    "gamma2hat": random_gamma2_hat,
    "sl2z": random_sl2z,
}

_DEFAULT_GROUP = {"beta-tilde": "gamma2hat", "beta-bar": "gamma2", "beta1-bar": "sl2z", "asai": "sl2z", "beta1-tilde": "sl2z"}


def cmd_split(args: argparse.Namespace, cfg: RunConfig) -> Report:
    if args.chi or args.epsilon:
        if args.word is None:
            raise UsageError("--chi and --epsilon need --word")
        try:
            word = GeneratorWord.parse(args.word)
            g = word.evaluate()
            if args.chi:
                report = Report("chi", {"word": args.word})
                value = triv.chi(g)
                factored = gamma2_decompose(g)
                report.add(f"{word} = {g}", triv.chi_from_word(g), value, ok=value == triv.chi_from_word(g))
                report.params["factored"] = str(factored)
                return report
            report = Report("epsilon-word", {"word": args.word})
            eps = triv.epsilon_word(word)
            product = eps * triv.beta_tilde(g)
            report.add(f"{word} = {g}", "eps_g beta_tilde(g) = 1", product, ok=product == ExactPhase(0))
            return report
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
    name = args.map or "beta-tilde"
    group = args.group or _DEFAULT_GROUP[name]
    trivialization, cocycle = _MAPS[name]
    rng = random.Random(cfg.seed)
    draw = _GROUPS[group]
    count = args.sweep or 1000
    pairs = [(draw(rng), draw(rng)) for _ in range(count)]
    try:
        result = triv.coboundary_check(cocycle, trivialization, pairs)
    except DomainError as exc:
        raise UsageError(f"{name} is not defined on {group}: {exc}") from exc
    report = Report("coboundary", {"map": name, "group": group, "sweep": count, "seed": cfg.seed, "checked": result.checked})
    for g1, g2, expected, got in result.failures:
        report.add(f"{g1} {g2}", expected, got, ok=False)
    return report


# --- weilrep ----------------------------------------------------------------


def cmd_weilrep(args: argparse.Namespace, cfg: RunConfig) -> Report:
    n = args.grid
    if n < 4 or n & (n - 1):
        raise UsageError("--grid must be a power of two")
    tol = args.tol
    if args.compose:
        sweep = wr.compose_sweep(args.pairs, seed=cfg.seed, n=n)
        report = Report(
            "weilrep-compose",
            {
                "pairs": args.pairs,
                "grid": n,
                "seed": cfg.seed,
                "tol": tol,
                "fidelity_threshold": float(f"{wr.fidelity_threshold(n):.6g}"),
                "rejected_by_fidelity": sweep.rejected,
            },
        )
        for w1, w2, r in sweep.reports:
            if args.all_cases or not r.ok(tol):
                report.add(f"{w1} | {w2}", r.expected, r.measured, max(r.phase_error, r.residual), ok=r.ok(tol))
        report.params["worst"] = float(f"{max(max(r.phase_error, r.residual) for *_, r in sweep.reports):.6g}")
        return report
    if args.fresnel:
        report = Report("weilrep-fresnel", {"grid": n, "tol": tol})
        x = wr.grid_points(n)
        for shift in (0.0, 0.5, -1.0):
            for width in (0.5, 1.0, 2.0):
                v = np.exp(-math.pi * width * (x - shift) ** 2) * (1 + x)
                for sign in (1, -1):
                    err = wr.fresnel_check(v, sign)
                    report.add(f"width={width} shift={shift} sign={sign}", 0.0, err, err, ok=err < tol)
        return report
    if args.intertwiner:
        report = Report("weilrep-intertwiner", {"grid": n, "tol": tol})
        for c in (0.5, 1.0, 2.0):
            for s in (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0):
                r = wr.intertwiner_triple_check(c, s, n)
                report.add(f"c={c} s={s}", r.expected, r.measured, r.residual, ok=r.ok(tol))
        return report
    if args.eigen:
        r = wr.gaussian_eigen_check(n)
        report = Report("weilrep-eigen", {"grid": n})
        for name, err in r.worst.items():
            report.add(name, 0.0, float(err), float(err), ok=not any(f[0] == name for f in r.failures))
        return report
    if args.lattice:
        try:
            word = GeneratorWord.parse(args.letter)
            reports = wr.lattice_action_check(word, n=n)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
        report = Report("weilrep-lattice", {"letter": args.letter, "grid": n, "tol": tol})
        for r in reports:
            report.add(f"{word} eps={r.eps}", r.expected, r.measured, r.relative_error, ok=r.ok(tol))
        return report
    raise UsageError("choose one of --compose, --fresnel, --intertwiner, --eigen, --lattice")


# --- theta ------------------------------------------------------------------


def cmd_theta(args: argparse.Namespace, cfg: RunConfig) -> Report:
    weight = Fraction(args.weight)
    if args.value:
        z = parse_complex(args.z)
        try:
            value = theta_eval(ThetaQuery(z, args.eps, weight, args.tail))
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
        report = Report("theta-value", {"z": args.z, "eps": args.eps, "weight": str(weight), "tail_bound": args.tail})
        report.add(f"theta(z={args.z}, eps={args.eps})", None, value.value, value.tail)
        report.params["terms"] = value.terms
        return report
    if args.lambda_:
        g = parse_element(args.gamma)
        try:
            value = multiplier_lambda(g, args.eps, args.half_plane)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc
        report = Report("theta-lambda", {"gamma": args.gamma, "eps": args.eps, "half_plane": args.half_plane})
        report.add(f"lambda({g}, {args.eps})", None, value)
        return report
    if args.check:
        rng = random.Random(cfg.seed)
        report = Report(
            "theta-transformation",
            {"words": args.words, "len": args.len, "tol": args.tol, "seed": cfg.seed, "weight": str(weight)},
        )
        checked = excluded = 0
        worst = 0.0
        for _ in range(args.words):
            word = random_theta_word(rng, args.len)
            g = word.evaluate()
            det = 1 if g.det > 0 else -1
            for z0 in THETA_POINTS:
                for z in (z0, z0.conjugate()):
                    eps = det * (1 if z.imag > 0 else -1)
                    try:
                        r = transformation_check(g, z, eps, weight)
                    except ExcludedPairError:
                        excluded += 1
                        continue
                    checked += 1
                    worst = max(worst, r.residual)
                    if args.all_cases or not r.residual < args.tol:
                        report.add(f"{word} z={format_value(z)} eps={eps}", r.lhs, r.rhs, r.residual, ok=r.residual < args.tol)
        report.params.update(checked=checked, excluded=excluded, worst=float(f"{worst:.6g}"))
        return report
    if args.operator:
        g = parse_element(args.gamma)
        z = parse_complex(args.z)
        report = Report("theta-lambda-operator", {"gamma": args.gamma, "eps": args.eps, "z": args.z})
        direct = complex(multiplier_lambda(g, args.eps, 1 if z.imag > 0 else -1))
        via = lambda_from_operators(g, args.eps, z)
        report.add(f"lambda({g}, {args.eps})", direct, via, abs(direct - via), ok=abs(direct - via) < 1e-8)
        return report
    raise UsageError("choose one of --value, --lambda, --check, --operator")


# --- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for random sweeps")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", type=Path, help=f"report file; relative paths resolve against ${OUTPUT_DIR_ENV}")

    parser = _Parser(prog="metaplectic", description="Rank-one metaplectic cocycles, Weil representation and theta checks.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("cocycle", parents=[common], help="cocycle values and identity sweeps")
    p.add_argument("--pair", help='two matrices, e.g. "[[0,-1],[1,0]] [[0,-1],[1,0]]"')
    p.add_argument("--kind", choices=(*_KINDS, "all"), default="all")
    p.add_argument("--sweep", type=int, help="number of random triples per cocycle")

    p = sub.add_parser("split", parents=[common], help="trivialization sweeps and chi")
    p.add_argument("--map", choices=tuple(_MAPS))
    p.add_argument("--group", choices=tuple(_GROUPS))
    p.add_argument("--sweep", type=int, help="number of random pairs")
    p.add_argument("--chi", action="store_true", help="evaluate chi on --word")
    p.add_argument("--epsilon", action="store_true", help="check eps_g beta_tilde(g) = 1 on --word")
    p.add_argument("--word")

    p = sub.add_parser("weilrep", parents=[common], help="grid checks of the Weil representation")
    mode = p.add_mutually_exclusive_group(required=True)
    for flag in ("--compose", "--fresnel", "--intertwiner", "--eigen", "--lattice"):
        mode.add_argument(flag, action="store_true")
    p.add_argument("--pairs", type=int, default=200)
    p.add_argument("--grid", type=int, default=wr.DEFAULT_N)
    p.add_argument("--letter", default="u-(2)")
    p.add_argument("--tol", type=float)
    p.add_argument("--all-cases", action="store_true", help="list passing cases too")

    p = sub.add_parser("theta", parents=[common], help="theta values, multipliers and transformation sweeps")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--value", action="store_true")
    mode.add_argument("--lambda", dest="lambda_", action="store_true")
    mode.add_argument("--check", action="store_true")
    mode.add_argument("--operator", action="store_true", help="compare lambda with C_bar^-1 upsilon m")
    p.add_argument("--z", default="i")
    p.add_argument("--eps", type=int, choices=(1, -1), default=1)
    p.add_argument("--weight", choices=("1/2", "3/2"), default="1/2")
    p.add_argument("--tail", type=float, default=1e-15)
    p.add_argument("--gamma", default="omega")
    p.add_argument("--half-plane", type=int, choices=(1, -1), default=1)
    p.add_argument("--words", type=int, default=100)
    p.add_argument("--len", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--all-cases", action="store_true", help="list passing cases too")
    return parser


_DEFAULT_TOL = {"compose": 1e-6, "fresnel": 1e-8, "intertwiner": 1e-6, "lattice": 1e-8, "eigen": 1e-4}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "tol", 0) is None:
            mode = next(k for k in _DEFAULT_TOL if getattr(args, k, False))
            args.tol = _DEFAULT_TOL[mode]
        cfg = RunConfig(args.subcommand, args.seed, args.format, args.output)
        handler = {"cocycle": cmd_cocycle, "split": cmd_split, "weilrep": cmd_weilrep, "theta": cmd_theta}[args.subcommand]
        report = handler(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    text = report.render(cfg.fmt)
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        path = cfg.output
        if not path.is_absolute() and os.environ.get(OUTPUT_DIR_ENV):
            path = Path(os.environ[OUTPUT_DIR_ENV]) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
