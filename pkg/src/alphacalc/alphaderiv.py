"""The (alpha, omega)-derivative and its companions.

For ``alpha > 0`` and real ``omega``::

    D[f](c) = lim_{x->c} (f(x) - f(c)) / ((x - omega)**alpha - (c - omega)**alpha)

which reduces to ``f'(c)`` for ``alpha = 1``.  Away from ``omega`` and for
differentiable ``f`` it equals ``(x - omega)**(1 - alpha) * f'(x) / alpha``,
which is what :func:`alpha_derivative_expr` builds symbolically.

Fractional powers are taken on the real branch only, so for non-integer
``alpha`` every limit approaches through ``x > omega``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .expr import Const, DomainError, EvalResult, Expr, Mul, Pow, Sub, Var, as_integer, evaluate, real_pow
from .numlimit import LimitConfig, LimitEstimate, Side, Status, estimate_limit
from .symbolic import differentiate, simplify

__all__ = [
    "DerivParams",
    "DomainExhaustedError",
    "DomainViolation",
    "InvalidGauge",
    "InvalidParams",
    "InvalidPoint",
    "OmegaBehavior",
    "OmegaKind",
    "ZERO_TOL",
    "alpha_derivative_at",
    "alpha_derivative_at_omega",
    "alpha_derivative_expr",
    "change_parameters",
    "classify_at_omega",
    "gauge_derivative_at",
    "higher_alpha_derivative_expr",
]

#: A converged value within ``error_estimate + ZERO_TOL`` of 0 counts as zero.
ZERO_TOL = 1e-8
#: Largest admissible ``|rho(c)|`` for a gauge function.
GAUGE_ZERO_TOL = 1e-12


class InvalidParams(ValueError):
    pass


class InvalidGauge(ValueError):
    pass


class InvalidPoint(ValueError):
    pass


class DomainViolation(ArithmeticError):
    pass


class DomainExhaustedError(ArithmeticError):
    """Too few admissible sample points near the requested point."""


@dataclass(frozen=True)
class DerivParams:
    alpha: float
    omega: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "omega", float(self.omega))
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidParams(f"alpha must be a positive real, got {self.alpha!r}")
        if not math.isfinite(self.omega):
            raise InvalidParams(f"omega must be finite, got {self.omega!r}")

    @property
    def fractional(self) -> bool:
        return as_integer(self.alpha) is None

    def gauge(self, x: float, c: float) -> float:
        """``(x - omega)**alpha - (c - omega)**alpha``; raises DomainError off the real branch."""
        return real_pow(x - self.omega, self.alpha) - real_pow(c - self.omega, self.alpha)


class OmegaKind(enum.Enum):
    ZERO = "Zero"
    FINITE = "Finite"
    UNDEFINED = "Undefined"


@dataclass(frozen=True)
class OmegaBehavior:
    kind: OmegaKind
    value: float | None = None
    estimate: LimitEstimate | None = None

    def __str__(self) -> str:
        if self.kind is OmegaKind.FINITE:
            return f"Finite({self.value!r})"
        return self.kind.value


def _check_params(p: DerivParams) -> DerivParams:
    if not isinstance(p, DerivParams):
        raise InvalidParams(f"expected DerivParams, got {p!r}")
    return p


def _default_side(p: DerivParams, c: float) -> Side:
    if p.fractional or c == p.omega:
        return Side.FROM_ABOVE
    return Side.TWO_SIDED


def _exhausted() -> LimitEstimate:
    return LimitEstimate(math.nan, math.inf, Status.DOMAIN_EXHAUSTED)


def alpha_derivative_at(
    f: Expr,
    p: DerivParams,
    c: float,
    side: Side | None = None,
    config: LimitConfig | None = None,
) -> LimitEstimate:
    """Numerical (alpha, omega)-derivative of ``f`` at ``c`` straight from the limit.

    ``side`` defaults to approaching from above when ``alpha`` is fractional
    or ``c == omega``, and two-sided otherwise.  For fractional ``alpha`` a
    point left of ``omega`` yields ``DOMAIN_EXHAUSTED``, as does a point
    where ``f`` itself is undefined.
    """
    _check_params(p)
    if p.fractional and c < p.omega:
        return _exhausted()
    fc = evaluate(f, c)
    if not fc.domain_ok:
        return _exhausted()

    def quotient(x: float) -> EvalResult:
        fx = evaluate(f, x)
        if not fx.domain_ok:
            return fx
        try:
            den = p.gauge(x, c)
        except DomainError:
            return EvalResult(math.nan, False)
        if den == 0.0:
            return EvalResult(math.nan, False)
        return EvalResult((fx.value - fc.value) / den, True)

    return estimate_limit(quotient, c, side or _default_side(p, c), config)


def alpha_derivative_expr(f: Expr, p: DerivParams) -> Expr:
    """Closed form ``(x - omega)**(1 - alpha) * f'(x) / alpha``, simplified.

    Valid for ``x != omega`` (and ``x > omega`` when ``alpha`` is
    fractional, which is also the assumption handed to the simplifier).
    """
    _check_params(p)
    shift = Sub(Var(), Const(p.omega))
    raw = Mul(Mul(Const(1.0 / p.alpha), Pow(shift, 1.0 - p.alpha)), differentiate(f))
    return simplify(raw, assume_above=p.omega if p.fractional else None)


def higher_alpha_derivative_expr(f: Expr, p: DerivParams, k: int) -> Expr:
    """``k``-fold :func:`alpha_derivative_expr`; ``k = 0`` returns ``f``."""
    _check_params(p)
    if k < 0:
        raise InvalidParams(f"derivative order must be >= 0, got {k}")
    for _ in range(k):
        f = alpha_derivative_expr(f, p)
    return f


def alpha_derivative_at_omega(
    f: Expr, p: DerivParams, k: int, config: LimitConfig | None = None
) -> LimitEstimate:
    """``D^k[f](omega)`` as the limit from above of the symbolic ``D^k`` expression.

    When the limit converges and the ``D^k`` expression is itself defined at
    ``omega`` with a value inside the error bar, that value is returned
    (continuity from the right makes them equal, and it avoids extrapolation
    noise in exact cases such as ``cos(sqrt(0)) = 1``).
    """
    _check_params(p)
    if k < 1:
        raise InvalidParams(f"derivative order must be >= 1, got {k}")
    g = higher_alpha_derivative_expr(f, p, k)
    est = estimate_limit(lambda x: evaluate(g, x), p.omega, Side.FROM_ABOVE, config)
    return _snap_to_value(est, evaluate(g, p.omega), config)


def _snap_to_value(est: LimitEstimate, direct: EvalResult, config: LimitConfig | None) -> LimitEstimate:
    if not (est.converged and direct.domain_ok):
        return est
    tol = (config.tol if config else 1e-9) * max(1.0, abs(est.value))
    if abs(direct.value - est.value) <= est.error_estimate + tol:
        return LimitEstimate(direct.value, est.error_estimate, est.status, est.samples)
    return est


def gauge_derivative_at(
    f: Expr,
    rho: Expr,
    c: float,
    side: Side = Side.TWO_SIDED,
    config: LimitConfig | None = None,
) -> LimitEstimate:
    """``lim_{x->c} (f(x) - f(c)) / rho(x)`` for a gauge with ``rho(c) = 0``.

    Raises:
        InvalidGauge: when ``|rho(c)| > 1e-12`` or ``rho`` is undefined at ``c``.
    """
    r0 = evaluate(rho, c)
    if not r0.domain_ok or abs(r0.value) > GAUGE_ZERO_TOL:
        raise InvalidGauge(f"gauge must vanish at c={c!r}, got {r0.value!r}")
    fc = evaluate(f, c)
    if not fc.domain_ok:
        return _exhausted()

    def quotient(x: float) -> EvalResult:
        fx = evaluate(f, x)
        rx = evaluate(rho, x)
        if not (fx.domain_ok and rx.domain_ok) or rx.value == 0.0:
            return EvalResult(math.nan, False)
        return EvalResult((fx.value - fc.value) / rx.value, True)

    return estimate_limit(quotient, c, side, config)


def change_parameters(d_beta_zeta: float, source: DerivParams, target: DerivParams, c: float) -> float:
    """Convert ``D_{beta,zeta}[f](c)`` into ``D_{alpha,omega}[f](c)``.

    ``source`` is ``(beta, zeta)``, ``target`` is ``(alpha, omega)``; the
    factor is ``(beta/alpha) * (c - zeta)**(beta-1) / (c - omega)**(alpha-1)``.

    Raises:
        InvalidPoint: if ``c`` equals either base point.
        DomainViolation: if a fractional power of a non-positive number is needed.
    """
    _check_params(source)
    _check_params(target)
    if c == source.omega or c == target.omega:
        raise InvalidPoint(f"c={c!r} coincides with a base point")
    try:
        num = real_pow(c - source.omega, source.alpha - 1.0)
        den = real_pow(c - target.omega, target.alpha - 1.0)
    except DomainError as exc:
        raise DomainViolation(str(exc)) from None
    return source.alpha / target.alpha * num / den * d_beta_zeta


def classify_at_omega(f: Expr, p: DerivParams, config: LimitConfig | None = None) -> OmegaBehavior:
    """Classify ``D[f](omega)`` as zero, finite or undefined.

    For ``f`` vanishing like ``(x - omega)**beta`` the outcome is zero when
    ``alpha < beta``, undefined when ``alpha > beta`` and finite (here ``1``)
    when they are equal.

    Raises:
        DomainExhaustedError: when ``f`` cannot be sampled right of ``omega``.
    """
    est = alpha_derivative_at(f, p, p.omega, Side.FROM_ABOVE, config)
    if est.status is Status.DOMAIN_EXHAUSTED:
        raise DomainExhaustedError(f"no admissible samples right of omega={p.omega!r}")
    if not est.converged:
        return OmegaBehavior(OmegaKind.UNDEFINED, estimate=est)
    if abs(est.value) <= est.error_estimate + ZERO_TOL:
        return OmegaBehavior(OmegaKind.ZERO, 0.0, est)
    return OmegaBehavior(OmegaKind.FINITE, est.value, est)
