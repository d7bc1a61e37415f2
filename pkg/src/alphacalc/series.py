"""Generalized power series at a branch point.

A function is expanded as ``sum_n c_n * (x - omega)**(alpha * n)`` with
``c_n = D^n[f](omega) / n!``.  For ``f = sin(sqrt(x))`` and
``(alpha, omega) = (1/2, 0)`` this reproduces the familiar series in
half-integer powers of ``x``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .alphaderiv import DerivParams, DomainExhaustedError, InvalidParams, alpha_derivative_at_omega
from .expr import DomainError, EvalResult, Expr, evaluate, format_real, real_pow
from .numlimit import LimitConfig, LimitEstimate, Side, Status, estimate_limit

__all__ = [
    "CoefficientDiverged",
    "PuiseuxSeries",
    "evaluate_series",
    "expand",
    "series_to_text",
]

#: Coefficients smaller than this are left out of the text form.
PRINT_ZERO_TOL = 1e-12


class CoefficientDiverged(ArithmeticError):
    def __init__(self, index: int, estimate: LimitEstimate):
        self.index = index
        self.estimate = estimate
        super().__init__(f"coefficient {index} does not converge ({estimate.status.value})")


@dataclass(frozen=True)
class PuiseuxSeries:
    omega: float
    alpha: float
    coeffs: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "alpha", float(self.alpha))
        # + 0.0 folds -0.0 into 0.0
        object.__setattr__(self, "coeffs", tuple(float(c) + 0.0 for c in self.coeffs))
        if not self.alpha > 0:
            raise InvalidParams(f"alpha must be positive, got {self.alpha!r}")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def exponents(self) -> list[float]:
        return [self.alpha * n for n in range(self.order)]

    def to_dict(self) -> dict:
        return {"omega": self.omega, "alpha": self.alpha, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, data: dict) -> "PuiseuxSeries":
        return cls(float(data["omega"]), float(data["alpha"]), tuple(data["coeffs"]))

    @classmethod
    def from_json(cls, text: str) -> "PuiseuxSeries":
        return cls.from_dict(json.loads(text))


def _value_at_omega(f: Expr, omega: float, config: LimitConfig | None) -> float:
    direct = evaluate(f, omega)
    if direct.domain_ok:
        return direct.value
    est = estimate_limit(lambda x: evaluate(f, x), omega, Side.FROM_ABOVE, config)
    if est.status is Status.DOMAIN_EXHAUSTED:
        raise DomainExhaustedError(f"f cannot be sampled right of omega={omega!r}")
    if not est.converged:
        raise CoefficientDiverged(0, est)
    return est.value


def expand(f: Expr, p: DerivParams, order: int, config: LimitConfig | None = None) -> PuiseuxSeries:
    """First ``order`` coefficients of the expansion of ``f`` at ``p.omega``.

    Raises:
        CoefficientDiverged: the first index whose limit diverges or oscillates.
        DomainExhaustedError: ``f`` (or one of its derivatives) cannot be
            sampled on the right of ``omega``.
    """
    if order < 1:
        raise InvalidParams(f"order must be >= 1, got {order}")
    coeffs = [_value_at_omega(f, p.omega, config)]
    factorial = 1.0
    for n in range(1, order):
        factorial *= n
        est = alpha_derivative_at_omega(f, p, n, config)
        if est.status is Status.DOMAIN_EXHAUSTED:
            raise DomainExhaustedError(f"derivative {n} cannot be sampled right of omega={p.omega!r}")
        if not est.converged:
            raise CoefficientDiverged(n, est)
        coeffs.append(est.value / factorial)
    return PuiseuxSeries(p.omega, p.alpha, tuple(coeffs))


def evaluate_series(s: PuiseuxSeries, x: float) -> EvalResult:
    """Partial sum at ``x``; fractional steps need ``x >= omega``."""
    t = x - s.omega
    total = 0.0
    for n, c in enumerate(s.coeffs):
        if n == 0:
            total += c
            continue
        try:
            total += c * real_pow(t, s.alpha * n)
        except DomainError:
            return EvalResult(math.nan, False)
    if not math.isfinite(total):
        return EvalResult(math.nan, False)
    return EvalResult(total, True)


def _base_text(omega: float) -> str:
    if omega == 0.0:
        return "x"
    if omega < 0.0:
        return f"(x + {format_real(-omega)})"
    return f"(x - {format_real(omega)})"


def series_to_text(s: PuiseuxSeries) -> str:
    """Readable sum such as ``x^0.5 - 0.16666666666666666*x^1.5``."""
    base = _base_text(s.omega)
    parts: list[tuple[bool, str]] = []
    for n, c in enumerate(s.coeffs):
        if abs(c) < PRINT_ZERO_TOL:
            continue
        mag = abs(c)
        if n == 0:
            term = format_real(mag)
        else:
            e = s.alpha * n
            power = base if e == 1.0 else f"{base}^{format_real(e)}"
            term = power if mag == 1.0 else f"{format_real(mag)}*{power}"
        parts.append((c < 0, term))
    if not parts:
        return "0"
    neg, first = parts[0]
    text = ("-" if neg else "") + first
    for neg, term in parts[1:]:
        text += (" - " if neg else " + ") + term
    return text
