"""Command-line front end.

    diffseq difftable --poly "x^3" --points 7 --order 3
    diffseq newton --poly "2x^3 + 7x - 1" --k 3/2 --samples -4,0,5
    diffseq deriv --function exp --x 0 --x0 0 --k 1/1000 --n 1 --M 1.0011
    diffseq branch-scan --x-prime 1 --power 2 --p-max 1000 --format jsonl --out scan.jsonl
    diffseq gap-audit --x-prime 1 --power 2 --p-max 30
    diffseq fermat-bound --power 3
    diffseq identity --x-prime 5 --power 3 --y 2
    diffseq run config.json

Exit status: 0 on success with no violations and no undecided entries,
1 when a check fails or stays undecided, 2 on invalid parameters.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import mpmath

from . import derivative_estimator as de
from .diffseq_core import Polynomial, difference_table, polynomial_table, verify_newton_theorem
from .diophantine_branch import (Branch, conditional_gap_bound, fermat_y_bound, gap_audit,
                                 min_gap, scan_branch_parallel, verify_branch_identity)
from .errors import DiffseqError, SpecParseError
from .exact_arith import DEFAULT_BITS, DEFAULT_MAX_BITS
from .reports import ReportWriter, ScanSummary, render_summary

ENV_MAX_BITS = "DIFFSEQ_MAX_BITS"
FORMATS = {"jsonl": "jsonl", "json-lines": "jsonl", "csv": "csv", "table": "table",
           "pretty-table": "table"}


def parse_number(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SpecParseError(f"not a number: {text!r}") from None


def parse_list(text: str) -> List[Fraction]:
    return [parse_number(t) for t in text.split(",") if t.strip()]


def default_max_bits() -> int:
    env = os.environ.get(ENV_MAX_BITS)
    if env is None:
        return DEFAULT_MAX_BITS
    try:
        bits = int(env)
    except ValueError:
        raise SpecParseError(f"{ENV_MAX_BITS} must be an integer, got {env!r}") from None
    if bits < 1:
        raise SpecParseError(f"{ENV_MAX_BITS} must be positive")
    return bits


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else str(v)
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 30)
    return str(v)


class Output:
    """Opens --out (or stdout) and writes text/JSON lines."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.stream = open(path, "w", newline="") if path else sys.stdout

    def line(self, text: str = "") -> None:
        self.stream.write(text + "\n")

    def json(self, obj) -> None:
        self.line(json.dumps(obj))

    def close(self) -> None:
        if self.path:
            self.stream.close()
        else:
            self.stream.flush()


# --- commands ----------------------------------------------------------------------

def cmd_difftable(args, out: Output) -> int:
    if args.seq is not None:
        seq = parse_list(args.seq)
        order = len(seq) - 1 if args.order is None else args.order
        table = difference_table(seq, order)
    elif args.poly is not None:
        P = Polynomial.parse(args.poly)
        order = P.degree if args.order is None else args.order
        table = polynomial_table(P, args.points, order, parse_number(args.k),
                                 parse_number(args.start))
    else:
        raise SpecParseError("give --seq or --poly")
    for m, row in enumerate(table.rows):
        if args.format == "jsonl":
            out.json({"order": m, "row": [_fmt(v) for v in row]})
        elif args.format == "csv":
            out.line(",".join([str(m)] + [_fmt(v) for v in row]))
        else:
            out.line(" ".join(_fmt(v) for v in row))
    return 0


def cmd_newton(args, out: Output) -> int:
    P = Polynomial.parse(args.poly)
    if args.random:
        rng = random.Random(args.seed)
        samples = [Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6))
                   for _ in range(args.random)]
    else:
        samples = parse_list(args.samples)
    report = verify_newton_theorem(P, parse_number(args.k), samples)
    if args.format == "jsonl":
        out.json({"polynomial": str(P), "k": _fmt(report.k), "expected": _fmt(report.expected)})
        for s in report.samples:
            out.json({"x": _fmt(s.x), "value": _fmt(s.value), "passed": s.passed})
        out.json({"type": "summary", "passed": report.passed, "failures": len(report.failures)})
    else:
        out.line(f"P(x) = {P}   k = {_fmt(report.k)}   expected a0*k^n*n! = {_fmt(report.expected)}")
        for s in report.samples:
            out.line(f"  x = {_fmt(s.x):>20}  value = {_fmt(s.value):>20}  {'PASS' if s.passed else 'FAIL'}")
        out.line("all samples pass" if report.passed else f"{len(report.failures)} sample(s) FAIL")
    return 0 if report.passed else 1


def _read_samples(path: str) -> List[Fraction]:
    with open(path) as fh:
        text = fh.read().strip()
    if text.startswith("["):
        return [parse_number(str(v)) for v in json.loads(text)]
    return [parse_number(t) for t in text.replace(",", "\n").split()]


def cmd_deriv(args, out: Output) -> int:
    x0 = parse_number(args.x0)
    x = x0 if args.x is None else parse_number(args.x)
    k = parse_number(args.k)
    domain = tuple(parse_list(args.domain)) if args.domain else None
    if domain is not None and len(domain) != 2:
        raise SpecParseError("--domain takes a,b")
    if args.samples_file:
        values = _read_samples(args.samples_file)
        n = len(values) - 1 if args.n is None else args.n
        grid = de.SampleGrid(x, x0, k, n, tuple(values), domain)
    elif args.function:
        if args.n is None:
            raise SpecParseError("--n is required with --function")
        grid = de.sample_grid(de.resolve_function(args.function), x, x0, k, args.n, domain)
    else:
        raise SpecParseError("give --function or --samples-file")
    value = de.estimate_nth_derivative(grid)
    bound = None if args.M is None else de.remainder_bound(grid, parse_number(args.M))
    rec = {"n": grid.n, "x": _fmt(x), "x0": _fmt(x0), "k": _fmt(k),
           "estimate": _fmt(value), "error_bound": None if bound is None else _fmt(bound)}
    if args.format == "jsonl":
        out.json(rec)
    elif args.format == "csv":
        out.line(",".join(rec))
        out.line(",".join("" if v is None else str(v) for v in rec.values()))
    else:
        out.line(f"f^({grid.n})(x0={rec['x0']}) ~ {rec['estimate']}")
        out.line(f"remainder bound: {rec['error_bound'] if bound is not None else 'n/a (no --M)'}")
    return 0


def _branch(args) -> Branch:
    return Branch(args.x_prime, args.power, args.coeff_a)


def cmd_branch_scan(args, out: Output) -> int:
    branch = _branch(args)
    start, stop = args.p_min, args.p_max + 1
    writer = ReportWriter(out.stream, args.format, args.digits)
    summary = ScanSummary.start(branch, start, stop, args.digits)
    for rec in scan_branch_parallel(branch, start, stop, args.precision_bits,
                                    args.max_precision_bits, args.threads):
        summary.add(writer.write(rec))
    writer.write_summary(summary)
    if args.format == "csv":
        print(render_summary(summary), file=sys.stderr)
    return 0 if summary.ok else 1


def cmd_gap_audit(args, out: Output) -> int:
    rep = gap_audit(_branch(args), args.p_max)
    d = {"x_prime": rep.branch.x_prime, "n": rep.branch.n, "A": rep.branch.A,
         "p_max": rep.p_max, "grade": rep.grade, "integer_points": list(rep.integer_points),
         "gaps": list(rep.gaps), "min_gap_required": rep.min_gap_required,
         "violations": list(rep.violations)}
    if args.format == "jsonl":
        out.json(d)
    else:
        out.line(f"branch x'={d['x_prime']} n={d['n']} A={d['A']}  p <= {d['p_max']}  [{d['grade']}]")
        out.line(f"  integer points: {d['integer_points']}")
        out.line(f"  gaps: {d['gaps']}")
        out.line(f"  required minimum gap: {d['min_gap_required']}")
        out.line(f"  violations: {d['violations']}")
    return 0 if rep.ok else 1


def cmd_fermat_bound(args, out: Output) -> int:
    y = fermat_y_bound(args.power, args.precision_bits, args.max_precision_bits)
    if args.format == "jsonl":
        out.json({"n": args.power, "y_bound": y})
    else:
        out.line(f"n = {args.power}: no solution with x > y and y <= {y}")
    return 0


def cmd_min_gap(args, out: Output) -> int:
    g = min_gap(args.power, args.coeff_a, args.precision_bits, args.max_precision_bits)
    if args.j is not None:
        i = conditional_gap_bound(args.power, args.j, args.precision_bits, args.max_precision_bits)
    else:
        i = None
    if args.format == "jsonl":
        out.json({"n": args.power, "A": args.coeff_a, "min_gap": g, "j": args.j, "conditional_gap": i})
    else:
        out.line(f"n = {args.power}, A = {args.coeff_a}: min gap {g}")
        if i is not None:
            out.line(f"  with fractional part below (2^(1/n)-1)*{args.j}: next integer point at distance >= {i}")
    return 0


def cmd_identity(args, out: Output) -> int:
    chk = verify_branch_identity(_branch(args), args.y)
    d = {"x_prime": args.x_prime, "n": args.power, "A": args.coeff_a, "y": args.y,
         "sum": str(chk.total), "expected": str(chk.expected), "residual": str(chk.residual),
         "passed": chk.passed}
    if args.format == "jsonl":
        out.json(d)
    else:
        out.line(f"sum = {d['sum']}  expected (A+1)*n! = {d['expected']}  residual = {d['residual']}")
    return 0 if chk.passed else 1


# --- parser ------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", default="table", type=lambda s: FORMATS.get(s, s),
                   choices=sorted(set(FORMATS.values())))
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--precision-bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--max-precision-bits", type=int, default=None,
                   help=f"precision cap (default ${ENV_MAX_BITS} or {DEFAULT_MAX_BITS})")


def _add_branch(p: argparse.ArgumentParser, p_max: bool = True) -> None:
    p.add_argument("--x-prime", type=int, required=True)
    p.add_argument("--power", type=int, required=True)
    p.add_argument("--coeff-a", type=int, default=1)
    if p_max:
        p.add_argument("--p-max", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffseq", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("difftable", help="forward difference table")
    p.add_argument("--seq", help="comma-separated sequence")
    p.add_argument("--poly", help="polynomial sampled at start + j*k")
    p.add_argument("--points", type=int, default=7)
    p.add_argument("--start", default="0")
    p.add_argument("--k", default="1")
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_difftable)

    p = sub.add_parser("newton", help="verify the nth difference equals a0*k^n*n!")
    p.add_argument("--poly", required=True)
    p.add_argument("--k", default="1")
    p.add_argument("--samples", default="0")
    p.add_argument("--random", type=int, default=0, help="use N random rational samples")
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("deriv", help="nth derivative estimate with remainder bound")
    p.add_argument("--function", help="exp, sin, cos or poly:<expr>")
    p.add_argument("--samples-file", help="n+1 sample values f(x + i*k)")
    p.add_argument("--x", default=None, help="grid start (default x0)")
    p.add_argument("--x0", required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--M", default=None, help="declared sup |f^(n+1)| on the hull")
    p.add_argument("--domain", default=None, help="a,b: analyticity interval")
    p.set_defaults(func=cmd_deriv)

    p = sub.add_parser("branch-scan", help="certify Step bounds, monotonicity, integrality")
    _add_branch(p)
    p.add_argument("--p-min", type=int, default=0)
    p.add_argument("--digits", type=int, default=None,
                   help="round endpoints outward to this many decimals (default exact)")
    p.set_defaults(func=cmd_branch_scan)

    p = sub.add_parser("gap-audit", help="integer points and their gaps on a branch")
    _add_branch(p)
    p.set_defaults(func=cmd_gap_audit)

    p = sub.add_parser("fermat-bound", help="largest excluded smaller leg y")
    p.add_argument("--power", type=int, required=True)
    p.set_defaults(func=cmd_fermat_bound)

    p = sub.add_parser("min-gap", help="minimum index gap, optionally conditional on j")
    p.add_argument("--power", type=int, required=True)
    p.add_argument("--coeff-a", type=int, default=1)
    p.add_argument("--j", type=int, default=None)
    p.set_defaults(func=cmd_min_gap)

    p = sub.add_parser("identity", help="exact residual of the (A+1)*n! branch identity")
    _add_branch(p, p_max=False)
    p.add_argument("--y", type=int, required=True)
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("run", help="execute a JSON run config")
    p.add_argument("config")
    p.set_defaults(func=None)

    for name, sp in sub.choices.items():
        if name != "run":
            _add_common(sp)
    return parser


@dataclass
class RunConfig:
    """A reproducible invocation: command, parameters keyed by flag name."""

    command: str
    params: Dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        unknown = set(data) - {"command", "params"}
        if unknown:
            raise SpecParseError(f"unknown config keys: {sorted(unknown)}")
        if "command" not in data:
            raise SpecParseError("config needs a 'command'")
        return cls(str(data["command"]), dict(data.get("params", {})))

    def to_argv(self, parser: argparse.ArgumentParser) -> List[str]:
        sub = _subparser(parser, self.command)
        known = {a.dest: a for a in sub._actions if a.option_strings}
        argv = [self.command]
        for key, value in self.params.items():
            dest = key.replace("-", "_")
            if dest not in known or dest == "help":
                raise SpecParseError(f"unknown parameter {key!r} for {self.command}")
            argv += [known[dest].option_strings[-1], str(value)]
        return argv


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._subparsers._group_actions:
        if name in action.choices and name != "run":
            return action.choices[name]
    raise SpecParseError(f"unknown command {name!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            with open(args.config) as fh:
                cfg = RunConfig.from_mapping(json.load(fh))
            args = parser.parse_args(cfg.to_argv(parser))
        if args.max_precision_bits is None:
            args.max_precision_bits = default_max_bits()
        if args.precision_bits < 1 or args.max_precision_bits < args.precision_bits:
            raise SpecParseError("need 1 <= --precision-bits <= --max-precision-bits")
        if args.threads < 1:
            raise SpecParseError("--threads must be >= 1")
        out = Output(args.out)
        try:
            return args.func(args, out)
        finally:
            out.close()
    except (DiffseqError, OSError, json.JSONDecodeError) as exc:
        print(f"diffseq: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
