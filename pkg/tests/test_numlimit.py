import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphacalc.expr import EvalResult, evaluate, parse
from alphacalc.numlimit import (
    LimitConfig,
    Side,
    Status,
    estimate_limit,
    neville_extrapolate,
    wynn_epsilon,
)


def sampler(text):
    f = parse(text)
    return lambda x: evaluate(f, x)


def test_sin_sqrt_over_sqrt_at_zero():
    est = estimate_limit(sampler("sin(sqrt(x))/sqrt(x)"), 0.0, Side.FROM_ABOVE)
    assert est.status is Status.CONVERGED
    assert est.value == pytest.approx(1.0, abs=1e-12)


def test_negative_power_diverges():
    est = estimate_limit(sampler("x^-0.2"), 0.0, Side.FROM_ABOVE)
    assert est.status is Status.DIVERGED


def test_continuous_two_sided():
    est = estimate_limit(sampler("x^2"), 3.0, Side.TWO_SIDED)
    assert est.status is Status.CONVERGED
    assert est.value == pytest.approx(9.0, abs=1e-12)
    assert est.error_estimate <= 1e-10


@pytest.mark.parametrize("p", [0.2, 0.5, 1.0])
@pytest.mark.parametrize("c", [0.0, 1.3, -2.0])
@pytest.mark.parametrize("side", [Side.FROM_ABOVE, Side.FROM_BELOW, Side.TWO_SIDED])
def test_power_singularity_diverges(p, c, side):
    g = lambda x: EvalResult(abs(x - c) ** -p, True) if x != c else EvalResult(math.nan, False)
    assert estimate_limit(g, c, side).status is Status.DIVERGED


@pytest.mark.parametrize(
    "text, c, limit",
    [
        ("(exp(x) - 1)/x", 0.0, 1.0),
        ("(1 - cos(x))/x^2", 0.0, 0.5),
        ("x^0.2", 0.0, 0.0),
        ("cos(sqrt(x))", 0.0, 1.0),
        ("-sin(sqrt(x))", 0.0, 0.0),
        ("x*ln(x)", 0.0, 0.0),
        ("(sqrt(1 + x) - 1)/x", 0.0, 0.5),
    ],
)
def test_removable_limits(text, c, limit):
    est = estimate_limit(sampler(text), c, Side.FROM_ABOVE)
    assert est.status is Status.CONVERGED
    assert est.value == pytest.approx(limit, abs=1e-9)


def test_oscillation_is_not_a_value():
    est = estimate_limit(sampler("sin(1/x)"), 0.0, Side.FROM_ABOVE)
    assert est.status is Status.OSCILLATING


def test_jump_is_not_two_sided_limit():
    est = estimate_limit(sampler("sqrt(x^2)/x"), 0.0, Side.TWO_SIDED)
    assert est.status is Status.OSCILLATING
    assert estimate_limit(sampler("sqrt(x^2)/x"), 0.0, Side.FROM_ABOVE).value == pytest.approx(1.0)
    assert estimate_limit(sampler("sqrt(x^2)/x"), 0.0, Side.FROM_BELOW).value == pytest.approx(-1.0)


def test_domain_exhausted():
    est = estimate_limit(sampler("sqrt(x)"), 0.0, Side.FROM_BELOW)
    assert est.status is Status.DOMAIN_EXHAUSTED
    assert estimate_limit(sampler("sqrt(x)"), 0.0, Side.TWO_SIDED).status is Status.DOMAIN_EXHAUSTED


def test_few_valid_samples_is_exhausted():
    # only the three largest steps are admissible
    g = lambda x: EvalResult(1.0, True) if x > 2.0 + 1.5e-3 else EvalResult(math.nan, False)
    assert estimate_limit(g, 2.0, Side.FROM_ABOVE).status is Status.DOMAIN_EXHAUSTED


def test_config_is_honoured():
    calls = []

    def g(x):
        calls.append(x)
        return EvalResult(x, True)

    est = estimate_limit(g, 1.0, Side.FROM_ABOVE, LimitConfig(h0=0.1, ratio=0.25, steps=6))
    assert len(calls) == 6
    assert calls[0] == pytest.approx(1.1)
    assert calls[1] == pytest.approx(1.025)
    assert est.value == pytest.approx(1.0)


def test_invalid_config():
    with pytest.raises(ValueError):
        LimitConfig(ratio=1.5)
    with pytest.raises(ValueError):
        LimitConfig(steps=2)


_smooth = st.sampled_from(["sin(x)", "exp(x)", "x^3 - x", "cos(2*x)/(2 + x^2)", "ln(3 + x)"])


@given(_smooth, st.floats(-1.5, 1.5))
@settings(max_examples=100, deadline=None)
def test_continuous_functions_converge_to_value(text, c):
    g = sampler(text)
    est = estimate_limit(g, c, Side.TWO_SIDED)
    assert est.status is Status.CONVERGED
    assert abs(est.value - g(c).value) <= max(1e-9, est.error_estimate)


@given(_smooth, st.floats(-1.5, 1.5))
@settings(max_examples=50, deadline=None)
def test_two_sided_consistent_with_one_sided(text, c):
    g = sampler(text)
    both = estimate_limit(g, c, Side.TWO_SIDED)
    above = estimate_limit(g, c, Side.FROM_ABOVE)
    below = estimate_limit(g, c, Side.FROM_BELOW)
    if both.status is Status.CONVERGED:
        assert above.status is Status.CONVERGED and below.status is Status.CONVERGED
        cfg = LimitConfig()
        slack = cfg.tol * max(1.0, abs(above.value))
        assert abs(above.value - below.value) <= above.error_estimate + below.error_estimate + slack


def test_neville_is_exact_on_polynomials():
    hs = [0.1 * 0.5**k for k in range(6)]
    vals = [3.0 + 2.0 * h - h**2 + 0.5 * h**3 for h in hs]
    est, change = neville_extrapolate(hs, vals, max_degree=4)[-1]
    assert est == pytest.approx(3.0, abs=1e-13)
    assert change <= 1e-12


def test_wynn_is_exact_on_geometric_sequences():
    vals = [2.0 + 0.7 * 0.8**k - 0.3 * 0.5**k for k in range(12)]
    est, change = wynn_epsilon(vals, max_order=4)[-1]
    assert est == pytest.approx(2.0, abs=1e-12)


def test_noisy_small_steps_do_not_win_by_chance():
    # a gauge quotient whose small-step stages are rounding noise; one of them
    # happens to agree with its predecessor to 6e-11 on the right-hand side
    f = parse("-2.410576280685488*sqrt(x) + 1.8706238312626366*exp(sin(x))")
    rho = parse("(x - 0.02111817316541309)^0.10002088911943577 - 1.0364313623087864")
    c = 1.4512399050023979
    fc = evaluate(f, c).value

    def quotient(x):
        return EvalResult((evaluate(f, x).value - fc) / evaluate(rho, x).value, True)

    above = estimate_limit(quotient, c, Side.FROM_ABOVE)
    below = estimate_limit(quotient, c, Side.FROM_BELOW)
    assert above.converged and below.converged
    assert abs(above.value - below.value) <= 1e-9
    assert estimate_limit(quotient, c, Side.TWO_SIDED).converged
