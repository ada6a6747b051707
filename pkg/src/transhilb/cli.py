"""Command-line entry point: ``transhilb {verify,inspect,flow,bracket-table}``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import suite
from .endo import build_endo, spectral_analysis
from .io import PointParseError, dumps_point, encode_array, load_point
from .points import AHPoint, RootsChartPoint, ah_unit_residual, random_scheme_point, roots_to_coeff
from .surfaces import SurfaceKind
from .symplectic import (
    FlowError,
    Q,
    ah_compatibility,
    ah_flow,
    bracket_table,
    check_compatibility,
    hamiltonian_flow,
    omega,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("transhilb")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _degree(text: str) -> int:
    d = int(text)
    if not 1 <= d <= suite.MAX_DEGREE:
        raise argparse.ArgumentTypeError(f"degree must be in 1..{suite.MAX_DEGREE}")
    return d


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or name not in suite.TOLERANCES:
        raise argparse.ArgumentTypeError(f"expected name=value with name in {sorted(suite.TOLERANCES)}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="transhilb", description="Numerical checks on transverse Hilbert schemes of points.")
    sub = p.add_subparsers(dest="command", required=True)

    def sampling(sp, samples=True):
        sp.add_argument("--surface", choices=[k.value for k in SurfaceKind], default="flat")
        sp.add_argument("--degree", type=_degree, default=2)
        sp.add_argument("--seed", type=int, default=42)
        if samples:
            sp.add_argument("--samples", type=_positive, default=100)

    v = sub.add_parser("verify", help="run the verification suite")
    sampling(v)
    v.add_argument("--tol", type=_tol, action="append", default=[], metavar="NAME=VALUE")
    v.add_argument("--report", type=Path, help="write the JSON report here")
    v.add_argument("--negative-demo", action="store_true", help="include the diagonal counterexample")
    v.add_argument("--workers", type=_positive, default=1)

    i = sub.add_parser("inspect", help="spectral data and Omega at a point")
    i.add_argument("point", type=Path, help="scheme point JSON file")

    f = sub.add_parser("flow", help="integrate the flow of Q_j")
    sampling(f, samples=False)
    f.add_argument("--point", type=Path, help="start point JSON (default: random sample)")
    f.add_argument("--hamiltonian", type=int, default=0, metavar="J")
    f.add_argument("--time", type=float, default=0.1)
    f.add_argument("--steps", type=_positive, default=100)

    b = sub.add_parser("bracket-table", help="matrix of {Q_i, Q_j}")
    sampling(b, samples=False)
    b.add_argument("--point", type=Path, help="point JSON (default: random sample)")
    return p


def _setup_logging() -> None:
    level = os.environ.get("THS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(message)s")


def _start_point(args):
    if args.point is not None:
        return load_point(args.point)
    rng = np.random.default_rng(args.seed)
    return random_scheme_point(SurfaceKind(args.surface), args.degree, rng)


def _fmt(z: complex) -> str:
    return f"{z.real:+.10g}{z.imag:+.10g}j"


def cmd_verify(args) -> int:
    try:
        cfg = suite.SuiteConfig(
            surface=args.surface,
            degree=args.degree,
            samples=args.samples,
            seed=args.seed,
            tol=dict(args.tol),
            report_path=str(args.report) if args.report else None,
            negative_demo=args.negative_demo,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = suite.run_verify(cfg)
    if cfg.report_path:
        Path(cfg.report_path).write_text(suite.report_json(report), encoding="utf-8")
    print(suite.format_report(report))
    return EXIT_OK if report["all_passed"] else EXIT_FAIL


def cmd_inspect(args) -> int:
    pt = load_point(args.point)
    E = build_endo(pt)
    rep = spectral_analysis(E)
    W = omega(pt)
    if isinstance(pt, AHPoint):
        compat, _ = ah_compatibility(pt)
    else:
        compat = check_compatibility(E, W)
    lines = [f"surface {pt.kind.value}, chart {pt.chart}, d = {pt.d}, basis {E.basis}"]
    lines.append("eigenvalues: " + ", ".join(_fmt(z) for z in rep.eigenvalues))
    for c in rep.clusters:
        blocks = " ".join(f"[{_fmt(c.value)};{b}]" for b in c.blocks)
        lines.append(f"  cluster {_fmt(c.value)}: algebraic {c.algebraic}, geometric {c.geometric}, Jordan {blocks}")
    lines.append("char poly (low to high): " + ", ".join(_fmt(z) for z in rep.char_poly.coeffs))
    lines.append("min poly  (low to high): " + ", ".join(_fmt(z) for z in rep.min_poly.coeffs))
    lines.append("Omega:")
    lines += ["  " + "  ".join(_fmt(z) for z in row) for row in W.W]
    lines.append(f"compatibility residual: {compat:.3e}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_flow(args) -> int:
    pt = _start_point(args)
    if not 0 <= args.hamiltonian < pt.d:
        raise UsageError(f"--hamiltonian must be in 0..{pt.d - 1}")
    if isinstance(pt, AHPoint):
        end = ah_flow(args.hamiltonian, pt, args.time, args.steps)
        drift = {"unit_constraint": ah_unit_residual(end)}
    else:
        c = roots_to_coeff(pt) if isinstance(pt, RootsChartPoint) else pt
        end = hamiltonian_flow(Q(args.hamiltonian), c, args.time, args.steps)
        drift = {"Q_drift": float(np.max(np.abs(end.Q - c.Q)))}
    out = {"start": json.loads(dumps_point(pt)), "end": json.loads(dumps_point(end)), **drift}
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_bracket_table(args) -> int:
    pt = _start_point(args)
    if isinstance(pt, AHPoint):
        raise UsageError("bracket tables use the coefficient chart; the ah model has none")
    c = roots_to_coeff(pt) if isinstance(pt, RootsChartPoint) else pt
    table = bracket_table(c)
    print(json.dumps({"d": c.d, "brackets": [encode_array(row) for row in table],
                      "max_abs": float(np.max(np.abs(table)))}, indent=2))
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "inspect": cmd_inspect,
    "flow": cmd_flow,
    "bracket-table": cmd_bracket_table,
}


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PointParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FlowError as exc:
        print(f"flow error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
