"""Scalar expressions in one variable.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' factor)?
    unary  := '-'? atom
    atom   := number | variable | func '(' expr ')' | '(' expr ')'

Note that unary minus binds tighter than ``^``: ``-t^2`` is ``(-t)^2``.
Expressions evaluate on :class:`~galmann.jets.Taylor` series, so derivatives
come out exactly (up to rounding) rather than by differencing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import jets
from .jets import DomainError, Jet3, Taylor

FUNCTIONS = {
    "sin": jets.sin,
    "cos": jets.cos,
    "tan": jets.tan,
    "exp": jets.exp,
    "log": jets.log,
    "sqrt": jets.sqrt,
    "sinh": jets.sinh,
    "cosh": jets.cosh,
    "tanh": jets.tanh,
    "abs": jets.fabs,
}

CONSTANTS = {"pi": math.pi, "e": math.e}


# -- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


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
    func: str
    arg: "Node"


Node = Union[Num, Const, Var, Neg, BinOp, Call]


# -- errors -------------------------------------------------------------------

class ExpressionError(ValueError):
    """Base class for parse-time failures; carries a byte offset."""

    def __init__(self, message: str, offset: int, source: str = ""):
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at offset {offset}")


class ParseError(ExpressionError):
    def __init__(self, offset: int, expected, found: str, source: str = ""):
        self.expected = frozenset(expected)
        self.found = found
        wanted = ", ".join(sorted(self.expected))
        super().__init__(f"expected one of {{{wanted}}} but found {found}", offset, source)


class UnknownIdentifier(ExpressionError):
    def __init__(self, name: str, offset: int, source: str = ""):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset, source)


class UnknownFunction(ExpressionError):
    def __init__(self, name: str, offset: int, source: str = ""):
        self.name = name
        super().__init__(f"unknown function {name!r}", offset, source)


class EvaluationError(DomainError):
    """Domain error raised during evaluation, naming the offending subexpression."""

    def __init__(self, reason: str, subexpression: str):
        self.reason = reason
        self.subexpression = subexpression
        super().__init__(f"{reason} in {subexpression}")


# -- tokenizer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number", "ident", an operator character, or "end"
    text: str
    offset: int  # byte offset into the UTF-8 source


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    byte_pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(byte_pos, {"number", "identifier", "operator", "("},
                             repr(source[pos]), source)
        text = m.group()
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(text if kind == "op" else kind, text, byte_pos))
        pos = m.end()
        byte_pos += len(text.encode("utf-8"))
    tokens.append(_Token("end", "", byte_pos))
    return tokens


_DISPLAY = {"number": "number", "ident": "identifier", "end": "end of input"}


class _Parser:
    def __init__(self, source: str, variable: str):
        self.source = source
        self.variable = variable
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, expected) -> ParseError:
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        return ParseError(tok.offset, expected, found, self.source)

    def expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            raise self.fail({_DISPLAY.get(kind, kind)})
        tok = self.tok
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise self.fail({"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.tok.kind
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.tok.kind in ("*", "/"):
            op = self.tok.kind
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self.tok.kind == "^":
            self.i += 1
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Node:
        if self.tok.kind == "-":
            self.i += 1
            return Neg(self.atom())
        return self.atom()

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Num(float(tok.text))
        if tok.kind == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "ident":
            self.i += 1
            name = tok.text
            if self.tok.kind == "(":
                if name not in FUNCTIONS:
                    raise UnknownFunction(name, tok.offset, self.source)
                self.i += 1
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            if name == self.variable:
                return Var(name)
            if name in CONSTANTS:
                return Const(name)
            if name in FUNCTIONS:
                raise self.fail({"("})
            raise UnknownIdentifier(name, tok.offset, self.source)
        raise self.fail({"number", "identifier", "("})


@dataclass(frozen=True)
class Expression:
    """Parsed expression together with its source text."""

    ast: Node
    source: str
    variable: str = "t"

    def __str__(self) -> str:
        return self.source

    def evaluate(self, arg, order: int = 3) -> Taylor:
        """Evaluate on a series argument (composition) or at a point."""
        if not isinstance(arg, Taylor):
            arg = Taylor.variable(arg, order)
        return _eval(self.ast, arg)

    def value(self, t):
        return self.evaluate(t, order=0).c[0]


def parse_expression(source: str, variable_name: str = "t") -> Expression:
    """Parse ``source`` into an :class:`Expression` over ``variable_name``.

    Raises :class:`ParseError` (with byte offset and expected-token set),
    :class:`UnknownIdentifier` or :class:`UnknownFunction`.
    """
    if not source or not source.strip():
        raise ParseError(0, {"number", "identifier", "("}, "end of input", source)
    if variable_name in FUNCTIONS:
        raise ValueError(f"variable name {variable_name!r} shadows a function")
    ast = _Parser(source, variable_name).parse()
    return Expression(ast, source, variable_name)


def to_source(node: Node) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(node, Num):
        v = float(node.value)
        return repr(v) if math.copysign(1.0, v) > 0 else f"(-{-v!r})"
    if isinstance(node, (Const, Var)):
        return node.name
    if isinstance(node, Neg):
        return f"-({to_source(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    return f"({to_source(node.left)}{node.op}{to_source(node.right)})"


def depends_on_variable(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (Num, Const)):
        return False
    if isinstance(node, Neg):
        return depends_on_variable(node.operand)
    if isinstance(node, Call):
        return depends_on_variable(node.arg)
    return depends_on_variable(node.left) or depends_on_variable(node.right)


def _constant_value(node: Node) -> float:
    return float(_eval(node, Taylor.constant(0.0, 0)).c[0])


def _eval(node: Node, x: Taylor) -> Taylor:
    if isinstance(node, Var):
        return x
    if isinstance(node, Num):
        return Taylor.constant(node.value, x.order)
    if isinstance(node, Const):
        return Taylor.constant(CONSTANTS[node.name], x.order)
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    try:
        if isinstance(node, Call):
            return FUNCTIONS[node.func](_eval(node.arg, x))
        left = _eval(node.left, x)
        if node.op == "^":
            if depends_on_variable(node.right):
                return left ** _eval(node.right, x)
            return left ** _constant_value(node.right)
        right = _eval(node.right, x)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right
    except EvaluationError:
        raise
    except DomainError as exc:
        raise EvaluationError(str(exc), to_source(node)) from None


def eval_jet3(expr: Expression, t) -> Jet3:
    """Value and derivatives of orders 1-3 at ``t`` (scalar or array)."""
    with np.errstate(all="ignore"):
        return Jet3.from_taylor(expr.evaluate(t, order=3))
