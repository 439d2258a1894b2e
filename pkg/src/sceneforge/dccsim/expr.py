"""Arithmetic expressions over object parameters.

Grammar (binds like ordinary arithmetic):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := NUMBER | REF | '-' factor | '(' expr ')'
    REF    := NAME '.' NAME

The AST is plain tuples: ("num", value), ("ref", obj, param),
("neg", operand), ("bin", op, left, right). Diagnostics carry 1-based
columns relative to the text handed to parse_expression.
"""

from __future__ import annotations

import re
from typing import Any, Callable

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?")


class ExprDiagnostic(Exception):
    """A parse problem at a specific 1-based column."""

    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column


class EvalError(Exception):
    """Expression evaluation failed (bad reference or division by zero)."""


def _tokenize(text: str, offset: int) -> list[tuple[str, Any, int]]:
    """Tokens as (kind, value, column); columns are offset+position."""
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        col = offset + i
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/()":
            tokens.append(("op", ch, col))
            i += 1
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            raw = m.group(0)
            value = float(raw)
            tokens.append(("num", value, col))
            i = m.end()
            continue
        m = NAME_RE.match(text, i)
        if m:
            name = m.group(0)
            i = m.end()
            if i < len(text) and text[i] == ".":
                m2 = NAME_RE.match(text, i + 1)
                if not m2:
                    raise ExprDiagnostic("expected parameter name after '.'", offset + i + 1)
                tokens.append(("ref", (name, m2.group(0)), col))
                i = m2.end()
            else:
                raise ExprDiagnostic(
                    f"bare name {name!r}; references are written object.param", col
                )
            continue
        raise ExprDiagnostic(f"unexpected character {ch!r}", col)
    tokens.append(("end", None, offset + len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, Any, int]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = ("bin", op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = ("bin", op, node, self.factor())
        return node

    def factor(self):
        kind, value, col = self.peek()
        if kind == "num":
            self.take()
            return ("num", value)
        if kind == "ref":
            self.take()
            return ("ref", value[0], value[1])
        if kind == "op" and value == "-":
            self.take()
            return ("neg", self.factor())
        if kind == "op" and value == "(":
            self.take()
            node = self.expr()
            kind, value, col = self.peek()
            if not (kind == "op" and value == ")"):
                raise ExprDiagnostic("expected ')'", col)
            self.take()
            return node
        if kind == "end":
            raise ExprDiagnostic("expected a number, reference, or '('", col)
        raise ExprDiagnostic(f"unexpected {value!r}", col)


def parse_expression(text: str, column_offset: int = 1) -> tuple:
    """Parse an expression; column_offset is the 1-based column of text[0]."""
    if not text.strip():
        raise ExprDiagnostic("empty expression", column_offset + len(text))
    parser = _Parser(_tokenize(text, column_offset))
    node = parser.expr()
    kind, value, col = parser.peek()
    if kind != "end":
        raise ExprDiagnostic(f"unexpected trailing {value!r}", col)
    return node


def expr_refs(node: tuple) -> set[tuple[str, str]]:
    """All object.param references in the tree."""
    kind = node[0]
    if kind == "num":
        return set()
    if kind == "ref":
        return {(node[1], node[2])}
    if kind == "neg":
        return expr_refs(node[1])
    return expr_refs(node[2]) | expr_refs(node[3])


def evaluate(node: tuple, lookup: Callable[[str, str], float]) -> float:
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "ref":
        return lookup(node[1], node[2])
    if kind == "neg":
        return -evaluate(node[1], lookup)
    op, left, right = node[1], evaluate(node[2], lookup), evaluate(node[3], lookup)
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if right == 0:
        raise EvalError("division by zero")
    return left / right


def _precedence(node: tuple) -> int:
    if node[0] in ("num", "ref"):
        return 3
    if node[0] == "neg":
        return 2
    return 1 if node[1] in "+-" else 2


def format_expression(node: tuple) -> str:
    """Canonical text form; parenthesizes only where precedence demands."""
    kind = node[0]
    if kind == "num":
        value = node[1]
        return str(int(value)) if float(value).is_integer() else repr(value)
    if kind == "ref":
        return f"{node[1]}.{node[2]}"
    if kind == "neg":
        inner = format_expression(node[1])
        # "-x * y" re-parses as (-x) * y, so any binary operand needs parens.
        if node[1][0] == "bin":
            inner = f"({inner})"
        return f"-{inner}"
    op, left, right = node[1], node[2], node[3]
    lt = format_expression(left)
    rt = format_expression(right)
    if _precedence(left) < _precedence(node):
        lt = f"({lt})"
    # Right side needs parens at equal precedence too: a - (b - c).
    if _precedence(right) <= _precedence(node):
        rt = f"({rt})"
    return f"{lt} {op} {rt}"
