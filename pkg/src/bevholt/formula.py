"""Tiny expression language for index-dependent coefficients.

Supported: the index ``n``, integer/decimal/rational literals, ``+ - * /``
(also ``− × ÷``), unary minus, parentheses, ``sin``, ``cos`` and ``pi`` (or
``π``).  Juxtaposition multiplies, so ``sin(nπ/8)`` parses as ``sin(n*π/8)``.

Formulas without ``sin``/``cos``/``pi`` evaluate exactly over
:class:`fractions.Fraction`; the others only evaluate in floating point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

__all__ = ["Formula", "FormulaError", "parse_formula"]

Number = Union[Fraction, float]


class FormulaError(ValueError):
    """Raised for malformed formula strings (carries the column)."""

    def __init__(self, message: str, source: str, pos: int):
        super().__init__(f"{message} at column {pos + 1} in {source!r}")
        self.source = source
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_]+|π)|(?P<op>[-+*/()−×÷]))"
)
_OP_ALIASES = {"−": "-", "×": "*", "÷": "/"}
_FUNCS = {"sin": math.sin, "cos": math.cos}


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    stripped = source.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if m is None or m.end() == pos:
            raise FormulaError("unexpected character", source, pos)
        start = m.start(m.lastgroup)
        text = m.group(m.lastgroup)
        kind = m.lastgroup
        if kind == "op":
            text = _OP_ALIASES.get(text, text)
        elif kind == "name" and text == "π":
            text = "pi"
        tokens.append((kind, text, start))
        pos = m.end()
    tokens.append(("end", "", len(stripped)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, got, pos = self.take()
        if got != text:
            raise FormulaError(f"expected {text!r}", self.source, pos)

    def parse(self):
        tree = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise FormulaError(f"unexpected {text!r}", self.source, pos)
        return tree

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = (op, node, self.term())
        return node

    def _starts_atom(self) -> bool:
        kind, text, _ = self.peek()
        return kind in ("num", "name") or (kind == "op" and text == "(")

    def term(self):
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in ("*", "/"):
                self.take()
                node = (text, node, self.unary())
            elif self._starts_atom():
                node = ("*", node, self.unary())
            else:
                return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text in ("+", "-"):
            self.take()
            operand = self.unary()
            return operand if text == "+" else ("neg", operand)
        return self.atom()

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return ("num", Fraction(text))
        if kind == "name":
            if text == "n":
                return ("n",)
            if text == "pi":
                return ("pi",)
            if text in _FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return ("call", text, arg)
            raise FormulaError(f"unknown name {text!r}", self.source, pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise FormulaError("expected a number, 'n', a function or '('", self.source, pos)


def _is_transcendental(node) -> bool:
    tag = node[0]
    if tag in ("pi", "call"):
        return True
    if tag in ("num", "n"):
        return False
    if tag == "neg":
        return _is_transcendental(node[1])
    return _is_transcendental(node[1]) or _is_transcendental(node[2])


def _evaluate(node, n, exact: bool):
    tag = node[0]
    if tag == "num":
        return node[1] if exact else float(node[1])
    if tag == "n":
        return Fraction(n) if exact else float(n)
    if tag == "pi":
        return math.pi
    if tag == "neg":
        return -_evaluate(node[1], n, exact)
    if tag == "call":
        return _FUNCS[node[1]](_evaluate(node[2], n, exact))
    left = _evaluate(node[1], n, exact)
    right = _evaluate(node[2], n, exact)
    if tag == "+":
        return left + right
    if tag == "-":
        return left - right
    if tag == "*":
        return left * right
    if right == 0:
        raise ZeroDivisionError(f"division by zero evaluating formula at n={n}")
    return left / right


@dataclass(frozen=True)
class Formula:
    source: str
    _tree: tuple = field(compare=False, repr=False)

    @property
    def transcendental(self) -> bool:
        return _is_transcendental(self._tree)

    def exact(self, n: int) -> Fraction:
        if self.transcendental:
            raise ValueError(f"formula {self.source!r} has no exact value")
        return _evaluate(self._tree, n, exact=True)

    def __call__(self, n: int) -> float:
        return float(_evaluate(self._tree, n, exact=False))


def parse_formula(source: str) -> Formula:
    return Formula(source.strip(), _Parser(source).parse())
