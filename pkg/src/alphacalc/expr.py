"""Expression trees over a single real variable ``x``.

The node set is deliberately small: constants, the variable, the four
arithmetic operators, powers with a literal real exponent and the unary
functions ``sin``, ``cos``, ``exp``, ``ln`` and ``sqrt``.

Text format::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('-')? power
    power  := atom ('^' factor)?
    atom   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'

``^`` is right associative and binds tighter than unary minus, so ``-x^2``
is ``-(x^2)``.  The exponent must not depend on ``x``; it is folded to a
float when parsed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import ClassVar, NamedTuple

__all__ = [
    "INTEGER_TOL",
    "Add",
    "Const",
    "Cos",
    "Div",
    "EvalResult",
    "Exp",
    "Expr",
    "Ln",
    "Mul",
    "ParseError",
    "Pow",
    "Sin",
    "Sqrt",
    "Sub",
    "Var",
    "as_integer",
    "evaluate",
    "format_real",
    "parse",
    "real_pow",
    "to_text",
]

#: Exponents within this distance of an integer are treated as that integer.
INTEGER_TOL = 1e-12


class DomainError(ArithmeticError):
    """Raised internally when evaluation leaves the real domain."""


class ParseError(ValueError):
    """Malformed expression text.

    Attributes:
        offset: byte offset in the input where parsing failed.
        expected: sorted tuple of token descriptions that would have been accepted.
    """

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class Expr:
    """Base class of all expression nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float


@dataclass(frozen=True)
class Func(Expr):
    arg: Expr
    name: ClassVar[str] = ""


@dataclass(frozen=True)
class Sin(Func):
    name: ClassVar[str] = "sin"


@dataclass(frozen=True)
class Cos(Func):
    name: ClassVar[str] = "cos"


@dataclass(frozen=True)
class Exp(Func):
    name: ClassVar[str] = "exp"


@dataclass(frozen=True)
class Ln(Func):
    name: ClassVar[str] = "ln"


@dataclass(frozen=True)
class Sqrt(Func):
    name: ClassVar[str] = "sqrt"


FUNCTIONS: dict[str, type[Func]] = {cls.name: cls for cls in (Sin, Cos, Exp, Ln, Sqrt)}


# --------------------------------------------------------------------------
# evaluation


class EvalResult(NamedTuple):
    value: float
    domain_ok: bool


def as_integer(p: float) -> int | None:
    """Return ``round(p)`` when ``p`` is within :data:`INTEGER_TOL` of it."""
    if not math.isfinite(p):
        return None
    n = round(p)
    return int(n) if abs(p - n) <= INTEGER_TOL else None


def real_pow(base: float, p: float) -> float:
    """``base ** p`` restricted to the real branch.

    Non-integer powers need ``base > 0``; ``0 ** p`` is ``0`` for ``p > 0`` and
    a domain violation otherwise.  Raises :class:`DomainError`.
    """
    n = as_integer(p)
    if n is not None:
        if base == 0.0:
            if n < 0:
                raise DomainError("zero to a negative power")
            return 1.0 if n == 0 else 0.0
        return base**n
    if base > 0.0:
        return base**p
    if base == 0.0 and p > 0.0:
        return 0.0
    raise DomainError("non-integer power of a non-positive base")


def _eval(f: Expr, x: float) -> float:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        return x
    if isinstance(f, Add):
        return _eval(f.left, x) + _eval(f.right, x)
    if isinstance(f, Sub):
        return _eval(f.left, x) - _eval(f.right, x)
    if isinstance(f, Mul):
        return _eval(f.left, x) * _eval(f.right, x)
    if isinstance(f, Div):
        den = _eval(f.right, x)
        num = _eval(f.left, x)
        if den == 0.0:
            raise DomainError("division by zero")
        return num / den
    if isinstance(f, Pow):
        return real_pow(_eval(f.base, x), f.exponent)
    if isinstance(f, Func):
        a = _eval(f.arg, x)
        if isinstance(f, Sin):
            return math.sin(a)
        if isinstance(f, Cos):
            return math.cos(a)
        if isinstance(f, Exp):
            return math.exp(a)
        if isinstance(f, Ln):
            if a <= 0.0:
                raise DomainError("logarithm of a non-positive number")
            return math.log(a)
        if isinstance(f, Sqrt):
            if a < 0.0:
                raise DomainError("square root of a negative number")
            return math.sqrt(a)
    raise TypeError(f"not an expression node: {f!r}")


def evaluate(f: Expr, x: float) -> EvalResult:
    """Evaluate ``f`` at ``x``.

    Domain violations and non-finite intermediate results are reported with
    ``domain_ok=False`` and a NaN value instead of raising.
    """
    try:
        value = _eval(f, x)
    except (DomainError, OverflowError, ValueError):
        return EvalResult(math.nan, False)
    if not math.isfinite(value):
        return EvalResult(math.nan, False)
    return EvalResult(value, True)


# --------------------------------------------------------------------------
# printing

_PREC_SUM, _PREC_PRODUCT, _PREC_FACTOR, _PREC_POWER, _PREC_ATOM = range(1, 6)


def format_real(v: float) -> str:
    """Shortest round-trip decimal form, without a trailing ``.0``."""
    text = repr(float(v))
    if text.endswith(".0"):
        text = text[:-2]
    return text


def _is_negation(f: Expr) -> bool:
    return (
        isinstance(f, Mul)
        and isinstance(f.left, Const)
        and f.left.value == -1.0
        and not isinstance(f.right, Const)
        and _precedence(f.right) >= _PREC_POWER
    )


def _precedence(f: Expr) -> int:
    if isinstance(f, (Add, Sub)):
        return _PREC_SUM
    if _is_negation(f):
        return _PREC_FACTOR
    if isinstance(f, (Mul, Div)):
        return _PREC_PRODUCT
    if isinstance(f, Pow):
        return _PREC_POWER
    if isinstance(f, Const) and (f.value < 0 or math.copysign(1.0, f.value) < 0):
        return _PREC_FACTOR
    return _PREC_ATOM


def _wrap(f: Expr, min_prec: int) -> str:
    text = to_text(f)
    return text if _precedence(f) >= min_prec else f"({text})"


def to_text(f: Expr) -> str:
    """Render ``f`` in the grammar accepted by :func:`parse`."""
    if isinstance(f, Const):
        if not math.isfinite(f.value):
            raise ValueError(f"cannot render non-finite constant {f.value!r}")
        return format_real(f.value)
    if isinstance(f, Var):
        return "x"
    if isinstance(f, Add):
        return f"{_wrap(f.left, _PREC_SUM)} + {_wrap(f.right, _PREC_SUM + 1)}"
    if isinstance(f, Sub):
        return f"{_wrap(f.left, _PREC_SUM)} - {_wrap(f.right, _PREC_SUM + 1)}"
    if _is_negation(f):
        return "-" + to_text(f.right)
    if isinstance(f, Mul):
        return f"{_wrap(f.left, _PREC_PRODUCT)}*{_wrap(f.right, _PREC_PRODUCT + 1)}"
    if isinstance(f, Div):
        return f"{_wrap(f.left, _PREC_PRODUCT)}/{_wrap(f.right, _PREC_PRODUCT + 1)}"
    if isinstance(f, Pow):
        if not math.isfinite(f.exponent):
            raise ValueError(f"cannot render non-finite exponent {f.exponent!r}")
        return f"{_wrap(f.base, _PREC_ATOM)}^{format_real(f.exponent)}"
    if isinstance(f, Func):
        return f"{f.name}({to_text(f.arg)})"
    raise TypeError(f"not an expression node: {f!r}")


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_ATOM_START = ("NUMBER", "'x'", "function name", "'('")


class _Token(NamedTuple):
    kind: str  # "number", "name", "op" or "end"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos), _ATOM_START)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, expected: tuple[str, ...], message: str | None = None) -> ParseError:
        tok = self.tok
        if message is None:
            message = "unexpected end of input" if tok.kind == "end" else f"unexpected token {tok.text!r}"
        return ParseError(message, _byte_offset(self.text, tok.offset), expected)

    def accept(self, *ops: str) -> str | None:
        if self.tok.kind == "op" and self.tok.text in ops:
            self.i += 1
            return self.tokens[self.i - 1].text
        return None

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.fail(("'+'", "'-'", "'*'", "'/'", "'^'", "end of input"))
        return node

    def expr(self) -> Expr:
        node = self.term()
        while (op := self.accept("+", "-")) is not None:
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while (op := self.accept("*", "/")) is not None:
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Expr:
        if self.accept("-") is None:
            return self.power()
        operand = self.power()
        if isinstance(operand, Const):
            return Const(-operand.value)
        return Mul(Const(-1.0), operand)

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^") is None:
            return base
        start = self.tok
        exponent = self.factor()
        value = evaluate(exponent, 0.0) if _is_constant(exponent) else None
        if value is None or not value.domain_ok:
            raise ParseError(
                "exponent must be a numeric constant", _byte_offset(self.text, start.offset), ("NUMBER",)
            )
        return Pow(base, value.value)

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Const(float(tok.text))
        if tok.kind == "name":
            if tok.text == "x":
                self.i += 1
                return Var()
            cls = FUNCTIONS.get(tok.text)
            if cls is None:
                raise self.fail(_ATOM_START, f"unknown name {tok.text!r}")
            self.i += 1
            if self.accept("(") is None:
                raise self.fail(("'('",))
            arg = self.expr()
            if self.accept(")") is None:
                raise self.fail(("')'",))
            return cls(arg)
        if self.accept("(") is not None:
            node = self.expr()
            if self.accept(")") is None:
                raise self.fail(("')'",))
            return node
        raise self.fail(_ATOM_START + ("'-'",) if tok.text != "-" else _ATOM_START)


def _is_constant(f: Expr) -> bool:
    if isinstance(f, Var):
        return False
    if isinstance(f, Const):
        return True
    if isinstance(f, (Add, Sub, Mul, Div)):
        return _is_constant(f.left) and _is_constant(f.right)
    if isinstance(f, Pow):
        return _is_constant(f.base)
    if isinstance(f, Func):
        return _is_constant(f.arg)
    return False


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Raises:
        ParseError: with the byte offset of the offending token and the set
            of tokens that would have been accepted there.
    """
    return _Parser(text).parse()
