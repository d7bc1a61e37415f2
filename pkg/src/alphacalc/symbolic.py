"""Symbolic d/dx and a small, terminating simplifier."""

from __future__ import annotations

import math

from .expr import (
    Add,
    Const,
    Cos,
    Div,
    Exp,
    Expr,
    Func,
    Ln,
    Mul,
    Pow,
    Sin,
    Sqrt,
    Sub,
    Var,
    as_integer,
    evaluate,
)

__all__ = ["MAX_PASSES", "differentiate", "is_positive", "simplify"]

#: Upper bound on rewrite passes in :func:`simplify`.
MAX_PASSES = 32

_ZERO = Const(0.0)
_ONE = Const(1.0)


def _is_const(f: Expr, value: float) -> bool:
    return isinstance(f, Const) and f.value == value


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return _ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Mul(a, b)


def _add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return _mul(Const(-1.0), b)
    return Sub(a, b)


def differentiate(f: Expr) -> Expr:
    """Derivative of ``f`` with respect to ``x``.

    Only trivial ``0``/``1`` factors are elided; pass the result through
    :func:`simplify` for a compact form.

    >>> from alphacalc.expr import parse, to_text
    >>> to_text(differentiate(parse("x^2")))
    '2*x^1'
    """
    if isinstance(f, Const):
        return _ZERO
    if isinstance(f, Var):
        return _ONE
    if isinstance(f, Add):
        return _add(differentiate(f.left), differentiate(f.right))
    if isinstance(f, Sub):
        return _sub(differentiate(f.left), differentiate(f.right))
    if isinstance(f, Mul):
        return _add(
            _mul(differentiate(f.left), f.right),
            _mul(f.left, differentiate(f.right)),
        )
    if isinstance(f, Div):
        num = _sub(
            _mul(differentiate(f.left), f.right),
            _mul(f.left, differentiate(f.right)),
        )
        if _is_const(num, 0.0):
            return _ZERO
        return Div(num, Pow(f.right, 2.0))
    if isinstance(f, Pow):
        p = f.exponent
        if p == 0.0:
            return _ZERO
        du = differentiate(f.base)
        if p == 1.0:
            return du
        return _mul(_mul(Const(p), Pow(f.base, p - 1.0)), du)
    if isinstance(f, Func):
        u = f.arg
        du = differentiate(u)
        if isinstance(f, Sin):
            outer = Cos(u)
        elif isinstance(f, Cos):
            outer = Mul(Const(-1.0), Sin(u))
        elif isinstance(f, Exp):
            outer = f
        elif isinstance(f, Ln):
            return _ZERO if _is_const(du, 0.0) else Div(du, u)
        elif isinstance(f, Sqrt):
            outer = Mul(Const(0.5), Pow(u, -0.5))
        else:
            raise TypeError(f"unsupported function node {f!r}")
        return _mul(outer, du)
    raise TypeError(f"not an expression node: {f!r}")


# --------------------------------------------------------------------------
# sign analysis under the assumption x > lower


def is_positive(f: Expr, lower: float | None) -> bool:
    """True when ``f(x) > 0`` for every ``x > lower`` at which ``f`` is defined.

    ``lower=None`` means nothing is known about ``x``.  The analysis is
    conservative: ``False`` only means "not proven".
    """
    if isinstance(f, Const):
        return f.value > 0.0
    if isinstance(f, Var):
        return lower is not None and lower >= 0.0
    if isinstance(f, Add):
        shift = _var_shift(f)
        if shift is not None:
            return lower is not None and lower + shift >= 0.0
        return (is_positive(f.left, lower) and _is_nonneg(f.right, lower)) or (
            _is_nonneg(f.left, lower) and is_positive(f.right, lower)
        )
    if isinstance(f, Sub):
        shift = _var_shift(f)
        if shift is not None:
            return lower is not None and lower + shift >= 0.0
        return False
    if isinstance(f, (Mul, Div)):
        return is_positive(f.left, lower) and is_positive(f.right, lower)
    if isinstance(f, Pow):
        return is_positive(f.base, lower)
    if isinstance(f, Exp):
        return True
    if isinstance(f, Sqrt):
        return is_positive(f.arg, lower)
    return False


def _is_nonneg(f: Expr, lower: float | None) -> bool:
    if is_positive(f, lower):
        return True
    if isinstance(f, Const):
        return f.value >= 0.0
    if isinstance(f, Sqrt):
        return True
    if isinstance(f, Pow):
        n = as_integer(f.exponent)
        return (n is not None and n % 2 == 0) or _is_nonneg(f.base, lower)
    if isinstance(f, (Mul, Div)):
        return _is_nonneg(f.left, lower) and _is_nonneg(f.right, lower)
    if isinstance(f, Add):
        return _is_nonneg(f.left, lower) and _is_nonneg(f.right, lower)
    return False


def _var_shift(f: Expr) -> float | None:
    """``a`` when ``f`` is ``x + a`` (in any of its literal spellings)."""
    if isinstance(f, Add):
        if isinstance(f.left, Var) and isinstance(f.right, Const):
            return f.right.value
        if isinstance(f.left, Const) and isinstance(f.right, Var):
            return f.left.value
    if isinstance(f, Sub) and isinstance(f.left, Var) and isinstance(f.right, Const):
        return -f.right.value
    return None


# --------------------------------------------------------------------------
# simplifier


def _snap(p: float) -> float:
    n = as_integer(p)
    return float(n) if n is not None else p


def _fold(f: Expr) -> Expr:
    value = evaluate(f, 0.0)
    return Const(value.value) if value.domain_ok else f


def _collect_factors(f: Expr, sign: float, coef: list[float], factors: list[tuple[Expr, float, bool]]) -> None:
    # sign is +1 for numerator factors, -1 for denominator factors
    if isinstance(f, Const):
        if sign > 0:
            coef[0] *= f.value
        else:
            coef[0] = coef[0] / f.value if f.value != 0.0 else math.nan
    elif isinstance(f, Mul):
        _collect_factors(f.left, sign, coef, factors)
        _collect_factors(f.right, sign, coef, factors)
    elif isinstance(f, Div) and not _is_const(f.right, 0.0):
        _collect_factors(f.left, sign, coef, factors)
        _collect_factors(f.right, -sign, coef, factors)
    elif isinstance(f, Pow):
        factors.append((f.base, sign * f.exponent, sign < 0))
    elif isinstance(f, Sqrt):
        factors.append((f.arg, sign * 0.5, sign < 0))
    else:
        factors.append((f, sign, sign < 0))


def _merge_allowed(base: Expr, p: float, q: float, lower: float | None) -> bool:
    if as_integer(p) is not None and as_integer(q) is not None:
        return True
    return is_positive(base, lower)


def _simplify_product(f: Expr, lower: float | None) -> Expr:
    coef = [1.0]
    raw: list[tuple[Expr, float, bool]] = []
    _collect_factors(f, 1.0, coef, raw)
    c = coef[0]
    if not math.isfinite(c):
        return f
    if c == 0.0:
        return _ZERO

    merged: list[list] = []
    for base, p, below in raw:
        for entry in merged:
            if entry[0] == base and _merge_allowed(base, entry[1], p, lower):
                entry[1] = _snap(entry[1] + p)
                entry[2] = entry[2] or below
                break
        else:
            merged.append([base, p, below])

    # a divisor stays a divisor: b^-1 can overflow where a/b is fine
    num: list[Expr] = []
    den: list[Expr] = []
    for base, p, below in merged:
        if p == 0.0:
            continue
        if below and p < 0.0:
            den.append(base if p == -1.0 else Pow(base, -p))
        else:
            num.append(base if p == 1.0 else Pow(base, p))
    if c != 1.0 or not num:
        num.insert(0, Const(c))
    body = _product(num)
    return Div(body, _product(den)) if den else body


def _product(parts: list[Expr]) -> Expr:
    body = parts[0]
    for part in parts[1:]:
        body = Mul(body, part)
    return body


def _split_coef(term: Expr) -> tuple[float, Expr | None]:
    # products are built left-assoc with the coefficient leftmost
    if isinstance(term, Const):
        return term.value, None
    if isinstance(term, Mul):
        if isinstance(term.left, Const):
            return term.left.value, term.right
        c, rest = _split_coef(term.left)
        if c != 1.0 and rest is not None:
            return c, Mul(rest, term.right)
    return 1.0, term


def _collect_terms(f: Expr, sign: float, terms: list[list]) -> None:
    if isinstance(f, Add):
        _collect_terms(f.left, sign, terms)
        _collect_terms(f.right, sign, terms)
        return
    if isinstance(f, Sub):
        _collect_terms(f.left, sign, terms)
        _collect_terms(f.right, -sign, terms)
        return
    coef, rest = _split_coef(f)
    for entry in terms:
        if entry[1] == rest:
            entry[0] += sign * coef
            return
    terms.append([sign * coef, rest])


def _scaled(c: float, rest: Expr | None) -> Expr:
    if rest is None:
        return Const(c)
    if c == 1.0:
        return rest
    return _prepend_coef(c, rest)


def _prepend_coef(c: float, f: Expr) -> Expr:
    if isinstance(f, Mul):
        return Mul(_prepend_coef(c, f.left), f.right)
    return Mul(Const(c), f)


def _simplify_sum(f: Expr) -> Expr:
    terms: list[list] = []
    _collect_terms(f, 1.0, terms)
    if not all(math.isfinite(t[0]) for t in terms):
        return f
    terms = [t for t in terms if t[0] != 0.0]
    if not terms:
        return _ZERO
    acc = _scaled(*terms[0])
    for c, rest in terms[1:]:
        acc = Sub(acc, _scaled(-c, rest)) if c < 0.0 else Add(acc, _scaled(c, rest))
    return acc


def _step(f: Expr, lower: float | None) -> Expr:
    if isinstance(f, (Const, Var)):
        return f
    if isinstance(f, (Add, Sub)):
        g = type(f)(_step(f.left, lower), _step(f.right, lower))
        if isinstance(g.left, Const) and isinstance(g.right, Const):
            return _fold(g)
        return _simplify_sum(g)
    if isinstance(f, (Mul, Div)):
        g = type(f)(_step(f.left, lower), _step(f.right, lower))
        if isinstance(g.left, Const) and isinstance(g.right, Const):
            return _fold(g)
        return _simplify_product(g, lower)
    if isinstance(f, Pow):
        base = _step(f.base, lower)
        p = _snap(f.exponent)
        if p == 0.0:
            return _ONE
        if p == 1.0:
            return base
        if isinstance(base, Const):
            return _fold(Pow(base, p))
        if isinstance(base, Pow) and (as_integer(p) is not None or is_positive(base.base, lower)):
            return Pow(base.base, _snap(base.exponent * p))
        if isinstance(base, Sqrt) and (as_integer(p) is not None or is_positive(base.arg, lower)):
            return Pow(base.arg, _snap(0.5 * p))
        return Pow(base, p)
    if isinstance(f, Func):
        arg = _step(f.arg, lower)
        if isinstance(arg, Const):
            return _fold(type(f)(arg))
        if isinstance(f, Ln) and isinstance(arg, Exp):
            return arg.arg
        if isinstance(f, Exp) and isinstance(arg, Ln):
            return arg.arg
        return type(f)(arg)
    raise TypeError(f"not an expression node: {f!r}")


def simplify(f: Expr, assume_above: float | None = None) -> Expr:
    """Best-effort simplification, pointwise equal to ``f`` where both are defined.

    Performs constant folding, removes ``0``/``1`` identities, collects like
    terms and merges powers of a common base.  Merges that would change the
    domain of a fractional power are only done when the base is provably
    positive for ``x > assume_above``.  Never turns a defined point into an
    undefined one.
    """
    for _ in range(MAX_PASSES):
        g = _step(f, assume_above)
        if g == f:
            break
        f = g
    return f
