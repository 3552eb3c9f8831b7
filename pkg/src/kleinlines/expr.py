"""A tiny expression language over p1, p2, q1, q2 with exact rational literals.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ['-'] atom ('^' uint)?
    atom   := rational | p1 | p2 | q1 | q2 | '(' expr ')'
    rational := digits ('/' digits)?

Whitespace is ignored.  ``-x^2`` parses as ``-(x^2)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import ExprSyntaxError, UnknownVariable

VARIABLES = ("p1", "p2", "q1", "q2")
MAX_POWER = 16

_TOKEN = re.compile(r"\s*(?:(\d+(?:\s*/\s*\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Neg, Add, Sub, Mul, Pow]


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            break  # trailing whitespace
        if m.group(1) is not None:
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        else:
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.take()
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected {op!r}, found {text or 'end of input'!r}", pos)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            node = Mul(node, self.factor())
        return node

    def factor(self) -> Expr:
        negate = False
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            negate = True
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, text, pos = self.take()
            if kind != "num" or "/" in text:
                raise ExprSyntaxError("exponent must be a non-negative integer", pos)
            e = int(text)
            if e > MAX_POWER:
                raise ExprSyntaxError(f"exponent {e} exceeds {MAX_POWER}", pos)
            node = Pow(node, e)
        return Neg(node) if negate else node

    def atom(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            num, _, den = text.replace(" ", "").partition("/")
            if den and int(den) == 0:
                raise ExprSyntaxError("zero denominator", pos)
            return Num(Fraction(int(num), int(den) if den else 1))
        if kind == "name":
            if text not in VARIABLES:
                raise UnknownVariable(f"unknown variable {text!r} at position {pos}")
            return Var(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", pos)


def parse_expr(src: str) -> Expr:
    p = _Parser(src)
    node = p.expr()
    kind, text, pos = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {text!r}", pos)
    return node


def evaluate(node: Expr, env: Mapping[str, object]):
    """Evaluate with the variables bound in ``env`` (Fractions or symbolic values)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.arg, env)
    if isinstance(node, Add):
        return evaluate(node.left, env) + evaluate(node.right, env)
    if isinstance(node, Sub):
        return evaluate(node.left, env) - evaluate(node.right, env)
    if isinstance(node, Mul):
        return evaluate(node.left, env) * evaluate(node.right, env)
    if isinstance(node, Pow):
        base = evaluate(node.base, env)
        out = 1
        for _ in range(node.exponent):
            out = out * base
        return out
    raise TypeError(f"not an expression node: {node!r}")


def evaluate_at(node: Expr, p, q):
    return evaluate(node, {"p1": p[0], "p2": p[1], "q1": q[0], "q2": q[1]})


def to_source(node: Expr) -> str:
    """Fully parenthesised source that parses back to an equal tree."""
    if isinstance(node, Num):
        v = node.value
        return f"{v.numerator}/{v.denominator}" if v >= 0 else f"(-{-v.numerator}/{v.denominator})"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.arg)})"
    if isinstance(node, Pow):
        return f"({to_source(node.base)})^{node.exponent}"
    sym = {Add: "+", Sub: "-", Mul: "*"}[type(node)]
    return f"({to_source(node.left)}{sym}{to_source(node.right)})"
