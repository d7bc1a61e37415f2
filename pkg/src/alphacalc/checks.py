"""Seeded property suites shared by ``alphacalc check`` and the test suite.

Every suite draws ``cases`` random instances from a private
``random.Random`` stream and compares two independent routes to the same
quantity.  A case fails when a limit that should exist does not converge or
when the two routes disagree beyond the suite tolerance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

from .alphaderiv import (
    DerivParams,
    OmegaKind,
    alpha_derivative_at,
    alpha_derivative_expr,
    change_parameters,
    classify_at_omega,
    gauge_derivative_at,
)
from .expr import Add, Const, Div, Expr, Mul, Pow, Sub, Var, evaluate, parse
from .numlimit import LimitConfig, LimitEstimate, Side
from .symbolic import differentiate, simplify

__all__ = [
    "CORPUS",
    "GAUGE_BASES",
    "SUITES",
    "CorpusEntry",
    "SuiteResult",
    "rel_close",
    "run_all",
]


@dataclass(frozen=True)
class CorpusEntry:
    """A smooth test function and an interval on which it is smooth."""

    text: str
    lo: float
    hi: float

    @property
    def expr(self) -> Expr:
        return parse(self.text)


CORPUS: tuple[CorpusEntry, ...] = (
    CorpusEntry("sin(x)", -3.0, 3.0),
    CorpusEntry("cos(x)", -3.0, 3.0),
    CorpusEntry("exp(x)", -2.0, 2.0),
    CorpusEntry("x^2", -3.0, 3.0),
    CorpusEntry("x^3 - 2*x", -2.0, 2.0),
    CorpusEntry("exp(-x^2)", -2.0, 2.0),
    CorpusEntry("ln(1 + x^2)", -2.0, 2.0),
    CorpusEntry("sqrt(x^2 + 1)", -2.0, 2.0),
    CorpusEntry("x*cos(x)", -3.0, 3.0),
    CorpusEntry("cos(x)/(2 + sin(x))", -3.0, 3.0),
    CorpusEntry("1/(1 + x^2)", -2.0, 2.0),
    CorpusEntry("exp(sin(x))", -3.0, 3.0),
    CorpusEntry("(x^2 + 1)^1.5", -2.0, 2.0),
    CorpusEntry("sin(x)*exp(0.5*x)", -2.0, 2.0),
    CorpusEntry("ln(x)", 0.5, 3.0),
    CorpusEntry("sqrt(x)", 0.5, 4.0),
    CorpusEntry("x^0.7", 0.5, 4.0),
    CorpusEntry("sin(sqrt(x))", 0.25, 4.0),
    CorpusEntry("x^2*ln(x)", 0.5, 3.0),
    CorpusEntry("exp(x)*sqrt(x)", 0.3, 2.0),
    CorpusEntry("(x - 0.2)^2.5", 0.5, 3.0),
    CorpusEntry("x/(1 + x)", 0.5, 3.0),
)

#: Monotone functions on [0.5, 3]; ``u(x) - u(c)`` is a gauge with a simple zero at ``c``.
GAUGE_BASES: tuple[str, ...] = ("x", "exp(x)", "x^3 + x", "ln(x)", "sqrt(x)", "2*x - sin(x)", "-x^2")

#: Interval used when two corpus functions must share a domain.
COMMON_LO, COMMON_HI = 0.5, 3.0

ALPHA_GRID = (0.3, 0.5, 0.9, 1.5)


def rel_close(value: float, reference: float, tol: float, slack: float = 0.0) -> bool:
    """``|value - reference| <= tol * max(1, |reference|) + slack``."""
    return abs(value - reference) <= tol * max(1.0, abs(reference)) + slack


def _rel_err(value: float, reference: float) -> float:
    return abs(value - reference) / max(1.0, abs(reference))


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    worst: float = 0.0
    skipped: int = 0

    def record(self, ok: bool, discrepancy: float = 0.0) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
        if not math.isfinite(discrepancy):
            discrepancy = math.inf
        self.worst = max(self.worst, discrepancy)

    @property
    def ok(self) -> bool:
        return self.failed == 0


# --------------------------------------------------------------------------
# random draws


def _alpha(rng: random.Random) -> float:
    return 2.0 * (1.0 - rng.random())  # (0, 2]


def _entry(rng: random.Random, common: bool = False) -> CorpusEntry:
    pool = [e for e in CORPUS if e.lo <= COMMON_LO and e.hi >= COMMON_HI] if common else CORPUS
    return rng.choice(pool)


def _point(rng: random.Random, e: CorpusEntry, common: bool = False) -> float:
    lo, hi = (COMMON_LO, COMMON_HI) if common else (e.lo, e.hi)
    return rng.uniform(lo, hi)


def _gauge_alpha(rng: random.Random) -> float:
    # below ~0.1 the gauge difference cancels badly and the quotient cannot reach tol
    return rng.uniform(0.1, 2.0)


def _omega_below(rng: random.Random, c: float) -> float:
    return c - rng.uniform(0.1, 3.0)


def _gauge(rng: random.Random, c: float) -> Expr:
    """Either the (alpha, omega) gauge at ``c`` or ``u(x) - u(c)`` for a monotone ``u``."""
    if rng.random() < 0.5:
        p = DerivParams(_gauge_alpha(rng), _omega_below(rng, c))
        shift = Pow(Sub(Var(), Const(p.omega)), p.alpha)
        return Sub(shift, Const(evaluate(shift, c).value))
    u = parse(rng.choice(GAUGE_BASES))
    return Sub(u, Const(evaluate(u, c).value))


# --------------------------------------------------------------------------
# suites


def suite_basic_identity(rng, cases, cfg):
    """D[(x - omega)^alpha](c) = 1."""
    res = SuiteResult("basic_identity")
    for _ in range(cases):
        p = DerivParams(_alpha(rng), rng.uniform(-2.0, 2.0))
        c = p.omega + 3.0 * (1.0 - rng.random())
        f = Pow(Sub(Var(), Const(p.omega)), p.alpha)
        est = alpha_derivative_at(f, p, c, config=cfg)
        err = _rel_err(est.value, 1.0) if est.converged else math.inf
        res.record(est.converged and abs(est.value - 1.0) <= 1e-7, err)
    return res


def suite_alpha1_reduction(rng, cases, cfg):
    """alpha = 1 gives the classical derivative for every omega."""
    res = SuiteResult("alpha1_reduction")
    for _ in range(cases):
        e = _entry(rng)
        f = e.expr
        c = _point(rng, e)
        omega = rng.uniform(-3.0, 3.0)
        if omega == c:
            omega += 1.0
        est = alpha_derivative_at(f, DerivParams(1.0, omega), c, config=cfg)
        ref = evaluate(simplify(differentiate(f)), c)
        ok = est.converged and ref.domain_ok and rel_close(est.value, ref.value, 1e-6)
        res.record(ok, _rel_err(est.value, ref.value) if est.converged else math.inf)
    return res


def suite_oracle_equivalence(rng, cases, cfg):
    """Direct limit agrees with the closed form away from omega, over converged draws.

    Draws whose limit does not converge are redrawn and counted as skipped;
    more than ``cases // 10 + 1`` skips fails the suite.
    """
    res = SuiteResult("oracle_equivalence")
    max_skips = cases // 10 + 1
    while res.passed + res.failed < cases:
        e = _entry(rng)
        f = e.expr
        c = _point(rng, e)
        p = DerivParams(_alpha(rng), _omega_below(rng, c))
        est = alpha_derivative_at(f, p, c, config=cfg)
        if not est.converged:
            res.skipped += 1
            if res.skipped > max_skips:
                res.record(False, math.inf)
            continue
        ref = evaluate(alpha_derivative_expr(f, p), c)
        res.record(ref.domain_ok and rel_close(est.value, ref.value, 1e-6), _rel_err(est.value, ref.value))
    return res


def _gauge_case(rng, cfg, need_g_away_from_zero=False):
    while True:
        ef, eg = _entry(rng, common=True), _entry(rng, common=True)
        c = _point(rng, ef, common=True)
        g = eg.expr
        if need_g_away_from_zero and abs(evaluate(g, c).value) <= 1e-3:
            continue
        rho = _gauge(rng, c)
        return ef.expr, g, rho, c


def _combined(lhs: LimitEstimate, rhs: float, slack: float, tol: float = 1e-5) -> tuple[bool, float]:
    if not lhs.converged or not math.isfinite(rhs):
        return False, math.inf
    return rel_close(lhs.value, rhs, tol, lhs.error_estimate + slack), _rel_err(lhs.value, rhs)


def suite_linearity(rng, cases, cfg):
    res = SuiteResult("linearity")
    for _ in range(cases):
        f, g, rho, c = _gauge_case(rng, cfg)
        a, b = rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)
        side = Side.TWO_SIDED  # c - omega >= 0.1 keeps fractional gauges admissible on both sides
        df = gauge_derivative_at(f, rho, c, side, cfg)
        dg = gauge_derivative_at(g, rho, c, side, cfg)
        lhs = gauge_derivative_at(Add(Mul(Const(a), f), Mul(Const(b), g)), rho, c, side, cfg)
        if not (df.converged and dg.converged):
            res.record(False, math.inf)
            continue
        rhs = a * df.value + b * dg.value
        res.record(*_combined(lhs, rhs, abs(a) * df.error_estimate + abs(b) * dg.error_estimate))
    return res


def suite_product_rule(rng, cases, cfg):
    res = SuiteResult("product_rule")
    for _ in range(cases):
        f, g, rho, c = _gauge_case(rng, cfg)
        side = Side.TWO_SIDED  # c - omega >= 0.1 keeps fractional gauges admissible on both sides
        df = gauge_derivative_at(f, rho, c, side, cfg)
        dg = gauge_derivative_at(g, rho, c, side, cfg)
        lhs = gauge_derivative_at(Mul(f, g), rho, c, side, cfg)
        if not (df.converged and dg.converged):
            res.record(False, math.inf)
            continue
        fc, gc = evaluate(f, c).value, evaluate(g, c).value
        rhs = df.value * gc + fc * dg.value
        res.record(*_combined(lhs, rhs, abs(gc) * df.error_estimate + abs(fc) * dg.error_estimate))
    return res


def suite_quotient_rule(rng, cases, cfg):
    res = SuiteResult("quotient_rule")
    for _ in range(cases):
        f, g, rho, c = _gauge_case(rng, cfg, need_g_away_from_zero=True)
        side = Side.TWO_SIDED  # c - omega >= 0.1 keeps fractional gauges admissible on both sides
        df = gauge_derivative_at(f, rho, c, side, cfg)
        dg = gauge_derivative_at(g, rho, c, side, cfg)
        lhs = gauge_derivative_at(Div(f, g), rho, c, side, cfg)
        if not (df.converged and dg.converged):
            res.record(False, math.inf)
            continue
        fc, gc = evaluate(f, c).value, evaluate(g, c).value
        rhs = (df.value * gc - fc * dg.value) / gc**2
        slack = (abs(gc) * df.error_estimate + abs(fc) * dg.error_estimate) / gc**2
        res.record(*_combined(lhs, rhs, slack))
    return res


def suite_continuity(rng, cases, cfg):
    """Where the gauge derivative exists, f(x) -> f(c) along the samples."""
    res = SuiteResult("continuity")
    h_last = cfg.h0 * cfg.ratio ** (cfg.steps - 1)
    for _ in range(cases):
        e = _entry(rng, common=True)
        f = e.expr
        c = _point(rng, e, common=True)
        rho = _gauge(rng, c)
        est = gauge_derivative_at(f, rho, c, Side.TWO_SIDED, cfg)
        if not est.converged:
            res.record(False, math.inf)
            continue
        fc = evaluate(f, c).value
        dev = max(abs(evaluate(f, c + s * h_last).value - fc) for s in (1.0, -1.0))
        res.record(dev <= 1e-4, dev)
    return res


def suite_parameter_change(rng, cases, cfg):
    """Measured D_{beta,zeta} transformed to (alpha, omega) matches measured D_{alpha,omega}."""
    res = SuiteResult("parameter_change")
    for _ in range(cases):
        e = _entry(rng)
        f = e.expr
        c = _point(rng, e)
        target = DerivParams(_alpha(rng), _omega_below(rng, c))
        source = DerivParams(_alpha(rng), _omega_below(rng, c))
        direct = alpha_derivative_at(f, target, c, config=cfg)
        measured = alpha_derivative_at(f, source, c, config=cfg)
        if not (direct.converged and measured.converged):
            res.record(False, math.inf)
            continue
        moved = change_parameters(measured.value, source, target, c)
        scale = abs(change_parameters(1.0, source, target, c))
        ok = rel_close(moved, direct.value, 1e-5, direct.error_estimate + scale * measured.error_estimate)
        res.record(ok, _rel_err(moved, direct.value))
    return res


def suite_trichotomy(rng, cases, cfg):
    """Each case runs the full alpha x beta grid at a random omega."""
    res = SuiteResult("trichotomy")
    for _ in range(cases):
        omega = rng.uniform(-2.0, 2.0)
        wrong = 0
        worst = 0.0
        for beta in ALPHA_GRID:
            f = Pow(Sub(Var(), Const(omega)), beta)
            for alpha in ALPHA_GRID:
                kind = classify_at_omega(f, DerivParams(alpha, omega), cfg)
                if alpha < beta:
                    good = kind.kind is OmegaKind.ZERO
                elif alpha > beta:
                    good = kind.kind is OmegaKind.UNDEFINED
                else:
                    good = kind.kind is OmegaKind.FINITE and abs(kind.value - 1.0) <= 1e-7
                    if kind.value is not None:
                        worst = max(worst, abs(kind.value - 1.0))
                wrong += not good
        res.record(wrong == 0, worst if wrong == 0 else math.inf)
    return res


Suite = Callable[[random.Random, int, LimitConfig], SuiteResult]

SUITES: dict[str, Suite] = {
    "basic_identity": suite_basic_identity,
    "alpha1_reduction": suite_alpha1_reduction,
    "oracle_equivalence": suite_oracle_equivalence,
    "linearity": suite_linearity,
    "product_rule": suite_product_rule,
    "quotient_rule": suite_quotient_rule,
    "continuity": suite_continuity,
    "parameter_change": suite_parameter_change,
    "trichotomy": suite_trichotomy,
}


def run_suite(name: str, seed: int, cases: int, config: LimitConfig | None = None) -> SuiteResult:
    # one independent stream per suite so suites can be run or reordered separately
    rng = random.Random(f"{seed}:{name}")
    return SUITES[name](rng, cases, config or LimitConfig())


def run_all(seed: int, cases: int, config: LimitConfig | None = None) -> list[SuiteResult]:
    return [run_suite(name, seed, cases, config) for name in SUITES]
