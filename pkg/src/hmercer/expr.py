"""A tiny arithmetic language in one variable ``x``.

Grammar (precedence low to high)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := unary ('^' factor)?          # right-associative
    unary   := '-' unary | primary
    primary := number | 'x' | ident '(' args ')' | '(' expr ')'

Unary minus binds tighter than ``^``, so ``-x^2`` is ``(-x)^2``. There is
no implicit multiplication. All arithmetic is IEEE double precision.

Expressions are evaluated either on a single float (:func:`evaluate`) or
elementwise on a numpy array (:func:`evaluate_array`); the latter is what
the grid certifiers use.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ArityError, DomainError, ExprSyntaxError, UnknownIdentifier

__all__ = [
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Expression",
    "parse",
    "evaluate",
    "evaluate_array",
    "to_source",
]


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Node = Const | Var | Neg | BinOp | Call

# name -> (min arity, max arity); None means unbounded
FUNCTIONS: dict[str, tuple[int, int | None]] = {
    "abs": (1, 1),
    "exp": (1, 1),
    "ln": (1, 1),
    "sqrt": (1, 1),
    "pow": (2, 2),
    "min": (2, None),
    "max": (2, None),
}


@dataclass(frozen=True)
class Expression:
    """A parsed expression. Equality and hashing use the tree only."""

    ast: Node
    source: str = field(default="", compare=False)

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            return evaluate_array(self, x)
        return evaluate(self, x)

    def __str__(self) -> str:
        return to_source(self)


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),−])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, ident, op, end
    text: str
    pos: int


def _tokenize(source: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(pos, "a number, identifier or operator", source[pos])
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if text == "−":
                text = "-"
            toks.append(_Tok(kind, text, pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(source)))
    return toks


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, source: str):
        self.toks = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _accept(self, *ops: str) -> str | None:
        t = self.tok
        if t.kind == "op" and t.text in ops:
            self.i += 1
            return t.text
        return None

    def _expect(self, op: str) -> None:
        if self._accept(op) is None:
            raise ExprSyntaxError(self.tok.pos, repr(op), self.tok.text or "end of input")

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(self.tok.pos, "an operator or end of input", self.tok.text)
        return node

    def expr(self) -> Node:
        node = self.term()
        while (op := self._accept("+", "-")) is not None:
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while (op := self._accept("*", "/")) is not None:
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self._accept("^") is not None:
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Node:
        if self._accept("-") is not None:
            return Neg(self.unary())
        return self.primary()

    def primary(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            value = float(t.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(t.pos, "a finite number", t.text)
            return Const(value)
        if t.kind == "ident":
            self.i += 1
            if t.text == "x":
                return Var()
            if t.text not in FUNCTIONS:
                raise UnknownIdentifier(t.text, t.pos)
            self._expect("(")
            args = [self.expr()]
            while self._accept(",") is not None:
                args.append(self.expr())
            self._expect(")")
            lo, hi = FUNCTIONS[t.text]
            if len(args) < lo or (hi is not None and len(args) > hi):
                want = str(lo) if lo == hi else f"at least {lo}"
                raise ArityError(t.text, len(args), want)
            return Call(t.text, tuple(args))
        if self._accept("(") is not None:
            node = self.expr()
            self._expect(")")
            return node
        raise ExprSyntaxError(t.pos, "a number, 'x', a function call or '('", t.text or "end of input")


def parse(source: str) -> Expression:
    if not source or not source.strip():
        raise ExprSyntaxError(0, "a non-empty expression")
    return Expression(_Parser(source).parse(), source)


# ---------------------------------------------------------------------------
# Printer


def _src(node: Node) -> str:
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        # binary operands print parenthesized already
        return "-" + _src(node.operand)
    if isinstance(node, BinOp):
        return f"({_src(node.left)} {node.op} {_src(node.right)})"
    return f"{node.name}({', '.join(_src(a) for a in node.args)})"


def to_source(e: Expression | Node) -> str:
    """Fully parenthesized source text; re-parsing gives the same tree."""
    return _src(e.ast if isinstance(e, Expression) else e)


# ---------------------------------------------------------------------------
# Scalar evaluation


def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise OverflowError(f"non-finite intermediate in {what}")
    return value


def _pow(a: float, b: float) -> float:
    if a == 0.0 and b < 0.0:
        raise DomainError("division by zero in power")
    if a < 0.0 and not float(b).is_integer():
        raise DomainError(f"negative base {a!r} with non-integer exponent {b!r}")
    try:
        return _finite(a**b, "power")
    except OverflowError as exc:
        raise OverflowError(f"overflow in {a!r}^{b!r}") from exc


def _eval(node: Node, x: float) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    if isinstance(node, BinOp):
        a = _eval(node.left, x)
        b = _eval(node.right, x)
        op = node.op
        if op == "+":
            return _finite(a + b, "addition")
        if op == "-":
            return _finite(a - b, "subtraction")
        if op == "*":
            return _finite(a * b, "multiplication")
        if op == "/":
            if b == 0.0:
                raise DomainError("division by zero")
            return _finite(a / b, "division")
        return _pow(a, b)
    args = [_eval(a, x) for a in node.args]
    name = node.name
    if name == "abs":
        return abs(args[0])
    if name == "exp":
        try:
            return _finite(math.exp(args[0]), "exp")
        except OverflowError as exc:
            raise OverflowError(f"overflow in exp({args[0]!r})") from exc
    if name == "ln":
        if args[0] <= 0.0:
            raise DomainError(f"ln of non-positive value {args[0]!r}")
        return math.log(args[0])
    if name == "sqrt":
        if args[0] < 0.0:
            raise DomainError(f"sqrt of negative value {args[0]!r}")
        return math.sqrt(args[0])
    if name == "pow":
        return _pow(args[0], args[1])
    if name == "min":
        return min(args)
    return max(args)


def evaluate(e: Expression, x: float) -> float:
    if not math.isfinite(x):
        raise DomainError(f"non-finite argument {x!r}")
    return float(_eval(e.ast, float(x)))


# ---------------------------------------------------------------------------
# Array evaluation


def _afinite(value: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(value)):
        raise OverflowError(f"non-finite intermediate in {what}")
    return value


def _apow(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.broadcast_arrays(a, b)
    if np.any((a == 0.0) & (b < 0.0)):
        raise DomainError("division by zero in power")
    if np.any((a < 0.0) & (b != np.floor(b))):
        raise DomainError("negative base with non-integer exponent")
    return _afinite(np.power(a, b), "power")


def _aeval(node: Node, x: np.ndarray) -> np.ndarray:
    if isinstance(node, Const):
        return np.full_like(x, node.value)
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_aeval(node.operand, x)
    if isinstance(node, BinOp):
        a = _aeval(node.left, x)
        b = _aeval(node.right, x)
        op = node.op
        if op == "+":
            return _afinite(a + b, "addition")
        if op == "-":
            return _afinite(a - b, "subtraction")
        if op == "*":
            return _afinite(a * b, "multiplication")
        if op == "/":
            if np.any(b == 0.0):
                raise DomainError("division by zero")
            return _afinite(a / b, "division")
        return _apow(a, b)
    args = [_aeval(a, x) for a in node.args]
    name = node.name
    if name == "abs":
        return np.abs(args[0])
    if name == "exp":
        return _afinite(np.exp(args[0]), "exp")
    if name == "ln":
        if np.any(args[0] <= 0.0):
            raise DomainError("ln of non-positive value")
        return np.log(args[0])
    if name == "sqrt":
        if np.any(args[0] < 0.0):
            raise DomainError("sqrt of negative value")
        return np.sqrt(args[0])
    if name == "pow":
        return _apow(args[0], args[1])
    out = args[0]
    for a in args[1:]:
        out = np.minimum(out, a) if name == "min" else np.maximum(out, a)
    return out


def evaluate_array(e: Expression, xs) -> np.ndarray:
    """Elementwise evaluation; raises if *any* element is out of domain."""
    xs = np.asarray(xs, dtype=float)
    if not np.all(np.isfinite(xs)):
        raise DomainError("non-finite argument")
    with np.errstate(all="ignore"):
        return np.asarray(_aeval(e.ast, xs), dtype=float)
