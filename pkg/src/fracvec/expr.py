"""Field expressions: parsing, symbolic differentiation and evaluation.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := number | name | func '(' expr ')' | '(' expr ')'

Names are ``r``, ``z`` and the constant ``pi``; functions are ``ln``,
``exp``, ``sin``, ``cos``, ``sqrt`` and ``abs``. ``-r^2`` parses as
``-(r^2)`` and ``2^-1`` as ``2^(-1)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .fields import AxialField, RadialScalarField

__all__ = [
    "ExpressionSyntaxError",
    "UnknownIdentifierError",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "FieldExpression",
    "parse_expression",
    "differentiate",
    "simplify",
    "to_text",
    "evaluate",
]


class ExpressionSyntaxError(DomainError):
    """Malformed expression; ``offset`` is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(DomainError):
    def __init__(self, name, offset):
        super().__init__(f"unknown identifier {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

VARIABLES = ("r", "z")
CONSTANTS = {"pi": math.pi}
FUNCTIONS = {
    "ln": np.log,
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

# ---------------------------------------------------------------- lexer

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        kind, val, off = self.peek()
        if val != value or kind != "op":
            what = "end of input" if kind == "end" else repr(val)
            raise ExpressionSyntaxError(f"expected {value!r}, found {what}", off)
        self.i += 1

    def parse(self):
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {val!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in ("-", "+"):
            self.take()
            arg = self.unary()
            return Neg(arg) if val == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, val, off = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in VARIABLES:
                return Var(val)
            if val in CONSTANTS:
                return Var(val)
            raise UnknownIdentifierError(val, off)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(val)
        raise ExpressionSyntaxError(f"unexpected {what}", off)


# ---------------------------------------------------------------- printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_UNARY_PREC = 3


def _num_text(v):
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _UNARY_PREC
    if isinstance(node, Num) and node.value < 0:
        return _UNARY_PREC
    return 5


def to_text(node: Node) -> str:
    """Render ``node`` with the minimal parentheses needed to re-parse it identically."""
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    if isinstance(node, Neg):
        inner = to_text(node.arg)
        if _prec(node.arg) < _UNARY_PREC:
            inner = f"({inner})"
        return f"-{inner}"
    p = _PREC[node.op]
    lt, rt = to_text(node.left), to_text(node.right)
    if node.op == "^":
        # left operand binds tighter than ^ only if atomic; right side may be unary
        if _prec(node.left) <= p:
            lt = f"({lt})"
        if _prec(node.right) < _UNARY_PREC:
            rt = f"({rt})"
    else:
        if _prec(node.left) < p:
            lt = f"({lt})"
        if _prec(node.right) <= p:
            rt = f"({rt})"
    return f"{lt} {node.op} {rt}" if p == 1 else f"{lt}{node.op}{rt}"


# ---------------------------------------------------------------- simplification


def _is(node, v):
    return isinstance(node, Num) and node.value == v


def _mk(op, a, b):
    """Build ``a op b`` with constant folding and identity removal."""
    if isinstance(a, Num) and isinstance(b, Num):
        try:
            val = {"+": lambda: a.value + b.value, "-": lambda: a.value - b.value,
                   "*": lambda: a.value * b.value, "/": lambda: a.value / b.value,
                   "^": lambda: a.value ** b.value}[op]()
        except (ZeroDivisionError, OverflowError):
            val = None
        if isinstance(val, float) and math.isfinite(val):
            return Num(val)
    if op == "+":
        if _is(a, 0):
            return b
        if _is(b, 0):
            return a
        if isinstance(b, Neg):
            return _mk("-", a, b.arg)
    elif op == "-":
        if _is(b, 0):
            return a
        if _is(a, 0):
            return _neg(b)
        if isinstance(b, Neg):
            return _mk("+", a, b.arg)
    elif op == "*":
        if _is(a, 0) or _is(b, 0):
            return Num(0.0)
        if _is(a, 1):
            return b
        if _is(b, 1):
            return a
        if _is(a, -1):
            return _neg(b)
        if _is(b, -1):
            return _neg(a)
        if isinstance(a, Neg):
            return _neg(_mk("*", a.arg, b))
        if isinstance(b, Neg):
            return _neg(_mk("*", a, b.arg))
    elif op == "/":
        if _is(a, 0) and not _is(b, 0):
            return Num(0.0)
        if _is(b, 1):
            return a
        if isinstance(a, Neg):
            return _neg(_mk("/", a.arg, b))
    elif op == "^":
        if _is(b, 0):
            return Num(1.0)
        if _is(b, 1):
            return a
    return BinOp(op, a, b)


def _neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def simplify(node: Node) -> Node:
    """Bottom-up constant folding and removal of ``+0``, ``*1``, ``^1`` and friends."""
    if isinstance(node, (Num, Var)):
        return node
    if isinstance(node, Neg):
        return _neg(simplify(node.arg))
    if isinstance(node, Call):
        arg = simplify(node.arg)
        if isinstance(arg, Num):
            with np.errstate(all="ignore"):
                v = float(FUNCTIONS[node.func](arg.value))
            if math.isfinite(v):
                return Num(v)
        return Call(node.func, arg)
    return _mk(node.op, simplify(node.left), simplify(node.right))


# ---------------------------------------------------------------- differentiation


def _depends(node, var):
    if isinstance(node, Var):
        return node.name == var
    if isinstance(node, Num):
        return False
    if isinstance(node, (Neg, Call)):
        return _depends(node.arg, var)
    return _depends(node.left, var) or _depends(node.right, var)


def _d(node, var):
    if not _depends(node, var):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Neg):
        return _neg(_d(node.arg, var))
    if isinstance(node, Call):
        u = node.arg
        du = _d(u, var)
        f = node.func
        if f == "ln":
            outer = _mk("/", Num(1.0), u)
        elif f == "exp":
            outer = node
        elif f == "sin":
            outer = Call("cos", u)
        elif f == "cos":
            outer = _neg(Call("sin", u))
        elif f == "sqrt":
            outer = _mk("/", Num(0.5), node)
        else:  # abs
            outer = _mk("/", u, node)
        return _mk("*", outer, du)
    a, b = node.left, node.right
    op = node.op
    if op in ("+", "-"):
        return _mk(op, _d(a, var), _d(b, var))
    if op == "*":
        return _mk("+", _mk("*", _d(a, var), b), _mk("*", a, _d(b, var)))
    if op == "/":
        num = _mk("-", _mk("*", _d(a, var), b), _mk("*", a, _d(b, var)))
        return _mk("/", num, _mk("^", b, Num(2.0)))
    # power
    if not _depends(b, var):
        return _mk("*", _mk("*", b, _mk("^", a, _mk("-", b, Num(1.0)))), _d(a, var))
    if not _depends(a, var):
        return _mk("*", _mk("*", node, Call("ln", a)), _d(b, var))
    inner = _mk("+", _mk("*", _d(b, var), Call("ln", a)), _mk("/", _mk("*", b, _d(a, var)), a))
    return _mk("*", node, inner)


def differentiate(node: Node, var="r") -> Node:
    """Symbolic partial derivative with respect to ``var``, simplified."""
    return simplify(_d(simplify(node), var))


# ---------------------------------------------------------------- evaluation


def evaluate(node: Node, r, z=0.0):
    """Evaluate with numpy semantics; ``r`` and ``z`` may be scalars or arrays."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name == "r":
            return r
        if node.name == "z":
            return z
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.arg, r, z)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](evaluate(node.arg, r, z))
    a = evaluate(node.left, r, z)
    b = evaluate(node.right, r, z)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return np.divide(a, b)
    return np.power(np.asarray(a, dtype=float), b)


class FieldExpression:
    """A parsed expression with cached symbolic derivatives."""

    def __init__(self, text: str):
        if not isinstance(text, str) or not text.strip():
            raise ExpressionSyntaxError("empty expression", 0)
        self.text = text
        self.ast = _Parser(text).parse()
        self._derivs = {}

    def __repr__(self):
        return f"FieldExpression({self.text!r})"

    def derivative(self, var="r", order=1) -> Node:
        key = (var, order)
        if key not in self._derivs:
            base = self.ast if order == 1 else self.derivative(var, order - 1)
            self._derivs[key] = differentiate(base, var)
        return self._derivs[key]

    def _scalar(self, node, r, z):
        with np.errstate(all="ignore"):
            v = evaluate(node, r, z)
        if np.ndim(v) == 0:
            return float(v)
        return np.broadcast_to(np.asarray(v, dtype=float), np.broadcast(r, z).shape).copy()

    def __call__(self, r, z=0.0):
        return self._scalar(self.ast, r, z)

    def d(self, r, z=0.0, var="r", order=1):
        return self._scalar(self.derivative(var, order), r, z)

    def pretty(self):
        return to_text(self.ast)

    def to_field(self) -> RadialScalarField:
        """Radial field with symbolic ``d/dr`` and ``d^2/dr^2`` (``z`` fixed at 0)."""
        return RadialScalarField(
            lambda r: self(r),
            lambda r: self.d(r, order=1),
            lambda r: self.d(r, order=2),
        )


def parse_expression(text: str) -> FieldExpression:
    return FieldExpression(text)


def axial_field(u_r: FieldExpression, u_z: FieldExpression) -> AxialField:
    """Axisymmetric vector field from two expressions with symbolic cross partials."""
    return AxialField(
        lambda r, z: u_r(r, z),
        lambda r, z: u_z(r, z),
        lambda r, z: u_r.d(r, z, var="z"),
        lambda r, z: u_z.d(r, z, var="r"),
    )
