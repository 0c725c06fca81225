"""Arithmetic expressions in one variable ``x``.

Grammar (``^`` binds tighter than unary minus and is right-associative)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
import scipy.special


class ParseError(ValueError):
    """Syntax error or unknown name; ``offset`` is a byte offset into the source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "besselj0": scipy.special.j0,
}
CONSTANTS = {"pi": np.pi, "e": np.e}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


Expr = Num | Var | Const | Neg | BinOp | Call

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(src: str):
    toks = []
    i = 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if m is None:
            raise ParseError(f"unexpected character {src[i]!r}", len(src[:i].encode()))
        kind = m.lastgroup
        if kind != "ws":
            toks.append((kind, m.group(), len(src[:i].encode())))
        i = m.end()
    toks.append(("end", "", len(src.encode())))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, text=None):
        tok = self.toks[self.i]
        if text is not None and tok[1] != text:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {text!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.term())
        return left

    def term(self):
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            left = BinOp(op, left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.unary())
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, text, off = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if self.peek()[1] == "(":
                if text not in FUNCTIONS:
                    raise ParseError(f"unknown function {text!r}", off)
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Call(text, arg)
            if text == "x":
                return Var()
            if text in CONSTANTS:
                return Const(text)
            raise ParseError(f"unknown name {text!r}", off)
        if kind == "op" and text == "(":
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {what}", off)


def parse_expr(src: str) -> Expr:
    """Parse ``src`` into an expression tree.

    >>> evaluate(parse_expr("2^3^2"), 0.0)
    512.0
    """
    p = _Parser(src)
    tree = p.expr()
    kind, text, off = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {text!r}", off)
    return tree


def to_string(e: Expr) -> str:
    """Fully parenthesized source text; parsing it gives back ``e``."""
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_string(e.arg)})"
    if isinstance(e, BinOp):
        return f"({to_string(e.left)} {e.op} {to_string(e.right)})"
    return f"{e.name}({to_string(e.arg)})"


def evaluate(e: Expr, x):
    """Evaluate ``e`` elementwise at ``x``."""
    if isinstance(e, Num):
        return e.value + 0.0 * np.asarray(x, dtype=float)
    if isinstance(e, Var):
        return np.asarray(x, dtype=float)
    if isinstance(e, Const):
        return CONSTANTS[e.name] + 0.0 * np.asarray(x, dtype=float)
    if isinstance(e, Neg):
        return -evaluate(e.arg, x)
    if isinstance(e, BinOp):
        a = evaluate(e.left, x)
        b = evaluate(e.right, x)
        with np.errstate(all="ignore"):
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            if e.op == "/":
                return a / b
            return np.power(a, b)
    with np.errstate(all="ignore"):
        return FUNCTIONS[e.name](evaluate(e.arg, x))


def compile_expr(src: str):
    """Parse ``src`` and return a vectorized callable ``f(x)``."""
    tree = parse_expr(src)
    return lambda x: evaluate(tree, x)
