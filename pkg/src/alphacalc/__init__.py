"""Symbolic-numeric calculus for the (alpha, omega)-derivative."""

from .alphaderiv import (
    DerivParams,
    DomainExhaustedError,
    DomainViolation,
    InvalidGauge,
    InvalidParams,
    InvalidPoint,
    OmegaBehavior,
    OmegaKind,
    alpha_derivative_at,
    alpha_derivative_at_omega,
    alpha_derivative_expr,
    change_parameters,
    classify_at_omega,
    gauge_derivative_at,
    higher_alpha_derivative_expr,
)
from .expr import EvalResult, Expr, ParseError, evaluate, parse, to_text
from .numlimit import LimitConfig, LimitEstimate, Side, Status, estimate_limit
from .series import CoefficientDiverged, PuiseuxSeries, evaluate_series, expand, series_to_text
from .symbolic import differentiate, simplify

__version__ = "0.1.0"
