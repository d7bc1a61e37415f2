import math

import pytest

from alphacalc.alphaderiv import (
    DerivParams,
    DomainExhaustedError,
    DomainViolation,
    InvalidGauge,
    InvalidParams,
    InvalidPoint,
    OmegaKind,
    alpha_derivative_at,
    alpha_derivative_at_omega,
    alpha_derivative_expr,
    change_parameters,
    classify_at_omega,
    gauge_derivative_at,
    higher_alpha_derivative_expr,
)
from alphacalc.expr import Cos, Sqrt, Var, evaluate, parse, to_text
from alphacalc.numlimit import LimitConfig, Side, Status
from alphacalc.symbolic import differentiate

P = DerivParams
X = Var()
GRID = [4.0 * (i + 1) / 20 for i in range(20)]  # 20 points in (0, 4]

# 12*sqrt(3) to 30 digits (mpmath); also mpmath's limit of the defining quotient for x^2 at 3
TWELVE_ROOT3 = 20.7846096908265275223293560981


def at(text, p, c, side=None):
    return alpha_derivative_at(parse(text), p, c, side)


class TestParams:
    @pytest.mark.parametrize("alpha", [0.0, -1.0, math.nan, math.inf])
    def test_alpha_must_be_positive(self, alpha):
        with pytest.raises(InvalidParams):
            P(alpha, 0.0)

    def test_fractional_flag(self):
        assert P(0.5).fractional
        assert not P(1.0).fractional
        assert not P(2.0 + 1e-13).fractional


class TestAlphaDerivativeAt:
    def test_sin_sqrt_at_zero(self):
        est = at("sin(sqrt(x))", P(0.5, 0.0), 0.0, Side.FROM_ABOVE)
        assert est.status is Status.CONVERGED
        assert est.value == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("c", [0.0, 0.3, 2.0, 10.0])
    def test_sqrt_has_unit_derivative(self, c):
        est = at("x^0.5", P(0.5, 0.0), c)
        assert est.converged
        assert est.value == pytest.approx(1.0, abs=1e-12)

    def test_alpha_one_is_classical(self):
        est = at("x^2", P(1.0, 0.0), 3.0)
        assert est.converged
        assert est.value == pytest.approx(6.0, abs=1e-9)

    def test_left_of_omega_is_exhausted_for_fractional_alpha(self):
        assert at("x", P(0.5, 1.0), 0.5).status is Status.DOMAIN_EXHAUSTED

    def test_undefined_f_at_c_is_exhausted(self):
        assert at("ln(x)", P(1.0, 0.0), 0.0).status is Status.DOMAIN_EXHAUSTED

    def test_non_differentiable_quotient_diverges(self):
        assert at("x^0.3", P(0.5, 0.0), 0.0).status is Status.DIVERGED

    def test_x_squared_with_half_alpha(self):
        est = at("x^2", P(0.5, 0.0), 3.0)
        assert est.value == pytest.approx(TWELVE_ROOT3, rel=1e-9)


class TestClosedForm:
    def test_sin_sqrt(self):
        assert alpha_derivative_expr(parse("sin(sqrt(x))"), P(0.5, 0.0)) == Cos(Sqrt(X))

    def test_power_example(self):
        # (p/alpha) (x - omega)^(1 - alpha) (x - a)^(p - 1) with a=2, p=3
        d = alpha_derivative_expr(parse("(x-2)^3"), P(0.5, 0.0))
        ref = parse("(3/0.5)*x^0.5*(x-2)^2")
        for x in GRID:
            assert evaluate(d, x).value == pytest.approx(evaluate(ref, x).value, rel=1e-13, abs=1e-13)

    def test_power_example_recovers_basic_identity(self):
        d = alpha_derivative_expr(parse("(x - 1.5)^0.7"), P(0.7, 1.5))
        assert to_text(d) == "1"

    def test_identity_classical(self):
        assert to_text(alpha_derivative_expr(parse("x"), P(1.0, 5.0))) == "1"

    def test_rejects_bad_alpha(self):
        with pytest.raises(InvalidParams):
            alpha_derivative_expr(parse("x"), P(-0.5, 0.0))
        with pytest.raises(InvalidParams):
            higher_alpha_derivative_expr(parse("x"), P(1.0), -1)


class TestIterated:
    def test_second_derivative(self):
        d2 = higher_alpha_derivative_expr(parse("sin(sqrt(x))"), P(0.5, 0.0), 2)
        assert to_text(d2) == "-sin(sqrt(x))"

    def test_fourth_derivative_returns_f(self):
        f = parse("sin(sqrt(x))")
        assert higher_alpha_derivative_expr(f, P(0.5, 0.0), 4) == f

    def test_zeroth_is_identity(self):
        f = parse("exp(x)*ln(x)")
        assert higher_alpha_derivative_expr(f, P(0.3, 1.0), 0) is f

    @pytest.mark.parametrize("k", range(1, 9))
    def test_pattern_on_grid(self, k):
        dk = higher_alpha_derivative_expr(parse("sin(sqrt(x))"), P(0.5, 0.0), k)
        for x in GRID:
            s = math.sqrt(x)
            ref = (-1) ** (k // 2) * (math.sin(s) if k % 2 == 0 else math.cos(s))
            assert evaluate(dk, x).value == pytest.approx(ref, abs=1e-12)


class TestAtOmega:
    @pytest.mark.parametrize("k, expected", [(1, 1.0), (2, 0.0), (3, -1.0), (4, 0.0), (5, 1.0)])
    def test_sin_sqrt(self, k, expected):
        est = alpha_derivative_at_omega(parse("sin(sqrt(x))"), P(0.5, 0.0), k)
        assert est.converged
        assert est.value == pytest.approx(expected, abs=1e-8)

    def test_order_must_be_positive(self):
        with pytest.raises(InvalidParams):
            alpha_derivative_at_omega(parse("x"), P(0.5), 0)

    def test_divergent_first_derivative(self):
        est = alpha_derivative_at_omega(parse("x^0.3"), P(0.5, 0.0), 1)
        assert est.status is Status.DIVERGED


class TestGauge:
    def test_identity_quotient(self):
        est = gauge_derivative_at(parse("x^0.5"), parse("x^0.5 - 2"), 4.0)
        assert est.value == pytest.approx(1.0, abs=1e-12)

    def test_classical(self):
        est = gauge_derivative_at(parse("x^2"), parse("x - 1"), 1.0)
        assert est.value == pytest.approx(2.0, abs=1e-9)

    def test_sin_over_sin(self):
        # brute-force samples of sin(x)/sin(x) at 1e-3 * 2^-k are all exactly 1
        assert [math.sin(1e-3 * 2.0**-k) / math.sin(1e-3 * 2.0**-k) for k in range(10)] == [1.0] * 10
        est = gauge_derivative_at(parse("sin(x)"), parse("sin(x)"), 0.0)
        assert est.converged
        assert est.value == pytest.approx(1.0, abs=1e-12)

    def test_gauge_must_vanish(self):
        with pytest.raises(InvalidGauge):
            gauge_derivative_at(parse("x"), parse("x - 1"), 2.0)
        with pytest.raises(InvalidGauge):
            gauge_derivative_at(parse("x"), parse("ln(x)"), 0.0)

    def test_gauge_matches_alpha_derivative(self):
        p, c = P(0.4, -1.0), 0.7
        rho = parse(f"(x + 1)^0.4 - {(c + 1) ** 0.4!r}")
        f = parse("exp(x)*cos(x)")
        g = gauge_derivative_at(f, rho, c)
        d = alpha_derivative_at(f, p, c)
        assert g.value == pytest.approx(d.value, rel=1e-8)


class TestChangeParameters:
    def test_alpha_one_to_half(self):
        assert change_parameters(6.0, P(1.0, 0.0), P(0.5, 0.0), 3.0) == pytest.approx(TWELVE_ROOT3, rel=1e-14)
        # cross-check against the direct limit
        assert at("x^2", P(0.5, 0.0), 3.0).value == pytest.approx(TWELVE_ROOT3, rel=1e-9)

    def test_identity(self):
        p = P(0.7, -0.5)
        assert change_parameters(1.25, p, p, 2.0) == pytest.approx(1.25, rel=1e-15)

    def test_half_to_classical(self):
        out = change_parameters(1.0, P(0.5, 0.0), P(1.0, 0.0), 4.0)
        assert out == pytest.approx(0.25, rel=1e-15)
        assert evaluate(differentiate(parse("sqrt(x)")), 4.0).value == pytest.approx(out, rel=1e-15)

    def test_base_point_rejected(self):
        with pytest.raises(InvalidPoint):
            change_parameters(1.0, P(1.0, 2.0), P(0.5, 0.0), 2.0)
        with pytest.raises(InvalidPoint):
            change_parameters(1.0, P(1.0, 0.0), P(0.5, 2.0), 2.0)

    def test_fractional_power_of_negative_base(self):
        with pytest.raises(DomainViolation):
            change_parameters(1.0, P(0.5, 3.0), P(1.0, 0.0), 2.0)


class TestClassify:
    @pytest.mark.parametrize(
        "text, kind, value",
        [
            ("x^0.7", OmegaKind.ZERO, 0.0),
            ("x^0.3", OmegaKind.UNDEFINED, None),
            ("x^0.5", OmegaKind.FINITE, 1.0),
        ],
    )
    def test_examples(self, text, kind, value):
        b = classify_at_omega(parse(text), P(0.5, 0.0))
        assert b.kind is kind
        if value is not None:
            assert b.value == pytest.approx(value, abs=1e-7)

    def test_unconverged_is_undefined(self):
        b = classify_at_omega(parse("x^0.5 + sin(x)"), P(0.5, 0.0), LimitConfig(tol=0.0))
        assert b.estimate.status is Status.OSCILLATING
        assert b.kind is OmegaKind.UNDEFINED

    def test_domain_exhausted_is_distinct(self):
        with pytest.raises(DomainExhaustedError):
            classify_at_omega(parse("sqrt(-x)"), P(0.5, 0.0))
