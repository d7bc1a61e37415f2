"""``alphacalc`` command line: diff, eval, series, check.

Exit codes: 0 ok, 1 check failure, 2 parse/usage error, 3 invalid
parameters, 4 limit not converged, 5 series coefficient diverged.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from .alphaderiv import (
    DerivParams,
    DomainExhaustedError,
    InvalidParams,
    alpha_derivative_at,
    higher_alpha_derivative_expr,
)
from .checks import SUITES, run_suite
from .expr import ParseError, evaluate, format_real, parse, to_text
from .numlimit import LimitConfig
from .series import CoefficientDiverged, expand, series_to_text

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_PARAMS = 3
EXIT_NOT_CONVERGED = 4
EXIT_DIVERGED = 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def dumps(obj) -> str:
    """JSON with insertion-ordered keys and reals at 17 significant digits.

    Non-finite reals become ``null``.  The rendering is a fixed point:
    ``dumps(json.loads(dumps(x))) == dumps(x)``.
    """
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj + 0.0, ".17g")  # + 0.0 folds -0.0
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# --------------------------------------------------------------------------
# argument handling


def _limit_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    g = parent.add_argument_group("limit estimation")
    d = LimitConfig()
    g.add_argument("--h0", type=float, default=d.h0, help="first step size (default %(default)s)")
    g.add_argument("--ratio", type=float, default=d.ratio, help="step ratio (default %(default)s)")
    g.add_argument("--steps", type=int, default=d.steps, help="number of steps (default %(default)s)")
    g.add_argument("--tol", type=float, default=d.tol, help="convergence threshold (default %(default)s)")
    return parent


def _operator_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--expr", required=True, help="function of x, e.g. 'sin(sqrt(x))'")
    parent.add_argument("--alpha", type=float, required=True)
    parent.add_argument("--omega", type=float, default=0.0)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alphacalc", description="(alpha, omega)-derivative calculator")
    sub = parser.add_subparsers(dest="command", required=True)
    limit, op = _limit_parent(), _operator_parent()

    p = sub.add_parser("diff", parents=[op], help="symbolic D^k expression")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("eval", parents=[op, limit], help="D^k at a point")
    p.add_argument("--at", type=float, required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--mode", choices=("limit", "closed", "both"), default="limit")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("series", parents=[op, limit], help="expansion at omega")
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("check", parents=[limit], help="run the seeded property suites")
    p.add_argument("--seed", type=int, default=None, help="defaults to $ALPHACALC_SEED, then 0")
    p.add_argument("--cases", type=int, default=100)
    return parser


def _config(args) -> LimitConfig:
    try:
        return LimitConfig(h0=args.h0, ratio=args.ratio, steps=args.steps, tol=args.tol)
    except ValueError as exc:
        raise CliError(EXIT_PARAMS, str(exc)) from None


def _expr(args):
    try:
        return parse(args.expr)
    except ParseError as exc:
        raise CliError(EXIT_PARSE, f"parse error: {exc}") from None


def _params(args) -> DerivParams:
    try:
        return DerivParams(args.alpha, args.omega)
    except InvalidParams as exc:
        raise CliError(EXIT_PARAMS, str(exc)) from None


def _positive(value: int, name: str) -> int:
    if value < 1:
        raise CliError(EXIT_PARAMS, f"{name} must be >= 1, got {value}")
    return value


def _text_lines(pairs) -> str:
    out = []
    for k, v in pairs:
        if isinstance(v, float):
            v = format_real(v) if math.isfinite(v) else str(v)
        out.append(f"{k}: {v}")
    return "\n".join(out)


# --------------------------------------------------------------------------
# commands


def cmd_diff(args) -> tuple[int, str]:
    f, p = _expr(args), _params(args)
    k = _positive(args.order, "order")
    result = to_text(higher_alpha_derivative_expr(f, p, k))
    if args.format == "json":
        doc = {"input": args.expr, "alpha": p.alpha, "omega": p.omega, "order": k, "result": result}
        return EXIT_OK, dumps(doc)
    return EXIT_OK, result


def cmd_eval(args) -> tuple[int, str]:
    f, p = _expr(args), _params(args)
    k = _positive(args.order, "order")
    cfg = _config(args)
    doc: dict = {"input": args.expr, "alpha": p.alpha, "omega": p.omega, "at": args.at, "order": k, "mode": args.mode}
    code = EXIT_OK

    if args.mode in ("limit", "both"):
        est = alpha_derivative_at(higher_alpha_derivative_expr(f, p, k - 1), p, args.at, config=cfg)
        doc.update(value=est.value, error_estimate=est.error_estimate, status=est.status.value)
        if not est.converged:
            code = EXIT_NOT_CONVERGED
    if args.mode in ("closed", "both"):
        closed_expr = higher_alpha_derivative_expr(f, p, k)
        closed = evaluate(closed_expr, args.at)
        doc["closed_form"] = to_text(closed_expr)
        doc["closed_value"] = closed.value
        if args.mode == "closed":
            doc["status"] = "Exact" if closed.domain_ok else "DomainViolation"
            if not closed.domain_ok:
                code = EXIT_NOT_CONVERGED
        else:
            doc["discrepancy"] = abs(doc["value"] - closed.value)

    out = dumps(doc) if args.format == "json" else _text_lines(doc.items())
    return code, out


def cmd_series(args) -> tuple[int, str]:
    f, p = _expr(args), _params(args)
    n = _positive(args.terms, "terms")
    cfg = _config(args)
    try:
        s = expand(f, p, n, cfg)
    except CoefficientDiverged as exc:
        raise CliError(EXIT_DIVERGED, f"coefficient {exc.index} diverged ({exc.estimate.status.value})") from None
    except DomainExhaustedError as exc:
        raise CliError(EXIT_NOT_CONVERGED, str(exc)) from None

    if args.format == "json":
        return EXIT_OK, dumps(s.to_dict())
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("n", "exponent", "coefficient"))
        for i, (e, c) in enumerate(zip(s.exponents(), s.coeffs)):
            w.writerow((i, format_real(e), format_real(c)))
        return EXIT_OK, buf.getvalue().rstrip("\n")
    return EXIT_OK, series_to_text(s)


def cmd_check(args) -> tuple[int, str]:
    seed = args.seed
    if seed is None:
        env = os.environ.get("ALPHACALC_SEED")
        try:
            seed = int(env) if env is not None else 0
        except ValueError:
            raise CliError(EXIT_PARAMS, f"ALPHACALC_SEED must be an integer, got {env!r}") from None
    cases = _positive(args.cases, "cases")
    cfg = _config(args)

    lines = [f"seed {seed}, {cases} case(s) per suite", f"{'suite':<20} {'passed':>6} {'failed':>6} {'skipped':>7}  worst"]
    failed = 0
    for name in SUITES:
        r = run_suite(name, seed, cases, cfg)
        failed += not r.ok
        lines.append(f"{r.name:<20} {r.passed:>6} {r.failed:>6} {r.skipped:>7}  {r.worst:.3e}  {'ok' if r.ok else 'FAIL'}")
    lines.append(f"{len(SUITES) - failed}/{len(SUITES)} suites passed")
    return (EXIT_CHECK_FAILED if failed else EXIT_OK), "\n".join(lines)


COMMANDS = {"diff": cmd_diff, "eval": cmd_eval, "series": cmd_series, "check": cmd_check}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, out = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"alphacalc: {exc}", file=sys.stderr)
        return exc.code
    print(out)
    if code == EXIT_NOT_CONVERGED:
        print("alphacalc: limit did not converge", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
