"""Parsing and evaluation of complex-valued expressions in one variable ``z``.

Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?            # right associative
    primary := NUMBER | 'z' | CONSTANT | FUNC '(' expr ')' | '(' expr ')'

Constants are ``i``, ``pi`` and ``e``; functions are sin, cos, tan, sinh,
cosh, tanh, exp, log and sqrt. Logarithms, square roots and non-integer
powers use the principal branch. Integer powers are computed by repeated
squaring so that e.g. ``z^3`` never goes through ``exp(3 log z)``.

Evaluation never raises for arithmetic failures: a pole or an overflow
produces a :class:`NonFinite` value, which is a ``complex`` carrying a
``reason`` string, and it propagates up the tree unchanged.
"""
from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import ArityMismatch, ExpressionSyntaxError, UnknownIdentifier

__all__ = [
    "Expression", "NonFinite", "parse", "evaluate", "is_finite",
    "Const", "Var", "Unary", "Binary", "Call",
]

MAX_DEPTH = 100
_MAX_INT_POWER = 2**31


class NonFinite(complex):
    """A non-finite evaluation result tagged with what produced it."""

    reason: str

    def __new__(cls, reason, value=complex(math.nan, math.nan)):
        self = super().__new__(cls, value)
        self.reason = reason
        return self

    def __repr__(self):
        return f"NonFinite({self.reason!r})"


def is_finite(value) -> bool:
    return not isinstance(value, NonFinite) and cmath.isfinite(value)


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    name: str = "z"


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"


Node = Union[Const, Var, Unary, Binary, Call]

CONSTANTS = {"i": 1j, "pi": complex(math.pi), "e": complex(math.e)}
FUNCTIONS = {
    "sin": cmath.sin,
    "cos": cmath.cos,
    "tan": cmath.tan,
    "sinh": cmath.sinh,
    "cosh": cmath.cosh,
    "tanh": cmath.tanh,
    "exp": cmath.exp,
    "log": cmath.log,
    "sqrt": cmath.sqrt,
}


# --- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    column: int  # 1-based


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {src[pos]!r}", pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos + 1))
        pos = m.end()
    tokens.append(_Token("end", "", len(src) + 1))
    return tokens


# --- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, src):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.depth = 0

    @property
    def tok(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text):
        tok = self.tok
        if tok.text != text or tok.kind == "end":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ExpressionSyntaxError(f"expected {text!r}, found {found}", tok.column)
        return self.advance()

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ExpressionSyntaxError("expression nested too deeply", self.tok.column)

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.tok.text!r}", self.tok.column)
        return node

    def expr(self):
        self.enter()
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        self.depth -= 1
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text in "+-":
            self.enter()
            op = self.advance().text
            node = Unary(op, self.unary())
            self.depth -= 1
            return node
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            self.enter()
            exponent = self.unary()
            self.depth -= 1
            return Binary("^", base, exponent)
        return base

    def primary(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Const(complex(float(tok.text)))
        if tok.kind == "ident":
            self.advance()
            return self.identifier(tok)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExpressionSyntaxError(f"unexpected {found}", tok.column)

    def identifier(self, tok):
        name = tok.text
        is_call = self.tok.kind == "op" and self.tok.text == "("
        if name in FUNCTIONS:
            if not is_call:
                raise ArityMismatch(f"function {name!r} takes 1 argument, got 0", tok.column)
            self.advance()
            args = self.arguments()
            if len(args) != 1:
                raise ArityMismatch(
                    f"function {name!r} takes 1 argument, got {len(args)}", tok.column)
            return Call(name, args[0])
        if name == "z" or name in CONSTANTS:
            if is_call:
                raise ArityMismatch(f"{name!r} is not a function", tok.column)
            return Var() if name == "z" else Const(CONSTANTS[name])
        raise UnknownIdentifier(f"unknown identifier {name!r}", tok.column)

    def arguments(self):
        if self.tok.kind == "op" and self.tok.text == ")":
            self.advance()
            return []
        args = [self.expr()]
        while self.tok.kind == "op" and self.tok.text == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        return args


# --- evaluation ------------------------------------------------------------

def _int_power(base: complex, n: int) -> complex:
    if n < 0:
        return 1 / _int_power(base, -n)
    result = complex(1.0)
    while n:
        if n & 1:
            result *= base
        n >>= 1
        if n:
            base *= base
    return result


def _power(base: complex, exponent: complex) -> complex:
    if exponent.imag == 0 and exponent.real.is_integer() and abs(exponent.real) <= _MAX_INT_POWER:
        return _int_power(base, int(exponent.real))
    if base == 0:
        if exponent.real > 0:
            return 0j
        raise ZeroDivisionError("zero to a non-positive power")
    return cmath.exp(exponent * cmath.log(base))


def _compile(root: Node) -> tuple:
    """Flatten the tree into postfix order without recursing."""
    code = []
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, (Const, Var)):
            code.append(node)
        elif expanded:
            code.append(node)
        else:
            stack.append((node, True))
            if isinstance(node, Binary):
                stack.append((node.right, False))
                stack.append((node.left, False))
            elif isinstance(node, Unary):
                stack.append((node.operand, False))
            elif isinstance(node, Call):
                stack.append((node.arg, False))
            else:
                raise TypeError(f"not an expression node: {node!r}")
    return tuple(code)


def _binary(op, a, b):
    try:
        if op == "+":
            v = a + b
        elif op == "-":
            v = a - b
        elif op == "*":
            v = a * b
        elif op == "/":
            v = a / b
        else:
            v = _power(a, b)
    except ZeroDivisionError:
        return NonFinite("division by zero")
    except OverflowError:
        return NonFinite(f"overflow in {op!r}")
    if not cmath.isfinite(v):
        return NonFinite(f"non-finite result of {op!r}", v)
    return v


def _call(name, a):
    try:
        v = FUNCTIONS[name](a)
    except (ValueError, ZeroDivisionError):
        return NonFinite(f"{name} is singular here")
    except OverflowError:
        return NonFinite(f"overflow in {name}")
    if not cmath.isfinite(v):
        return NonFinite(f"non-finite result of {name}", v)
    return v


def _run(code, z):
    stack = []
    push, pop = stack.append, stack.pop
    for node in code:
        if isinstance(node, Const):
            push(node.value)
        elif isinstance(node, Var):
            push(z)
        elif isinstance(node, Binary):
            b = pop()
            a = pop()
            if isinstance(a, NonFinite):
                push(a)
            elif isinstance(b, NonFinite):
                push(b)
            else:
                push(_binary(node.op, a, b))
        elif isinstance(node, Unary):
            a = pop()
            push(-a if node.op == "-" and not isinstance(a, NonFinite) else a)
        else:
            a = pop()
            push(a if isinstance(a, NonFinite) else _call(node.name, a))
    return stack[0]


class Expression:
    """Parsed expression; immutable and safe to share between threads."""

    __slots__ = ("ast", "source", "_code")

    def __init__(self, ast: Node, source: str | None = None):
        self.ast = ast
        self.source = source
        self._code = _compile(ast)

    def __call__(self, z) -> complex:
        return evaluate(self, z)

    def __repr__(self):
        if self.source is not None:
            return f"Expression({self.source!r})"
        return f"Expression({self.ast!r})"


def parse(src: str) -> Expression:
    """Parse ``src`` into an :class:`Expression`.

    Raises a subclass of :class:`~gensecant.errors.ExpressionError` with a
    1-based column on malformed input.
    """
    return Expression(_Parser(src).parse(), src)


def evaluate(expr: Expression | Node, z) -> complex:
    """Value of ``expr`` at ``z``; a :class:`NonFinite` instead of raising."""
    if not isinstance(expr, Expression):
        expr = Expression(expr)
    z = complex(z)
    if not cmath.isfinite(z):
        return NonFinite("non-finite argument", z)
    return _run(expr._code, z)
