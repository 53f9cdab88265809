"""A small formula language for net representatives.

Grammar (standard precedence, left associative, ``^`` binds tightest)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' ['-'] INT)?
    atom   := NUMBER | 'eps' | 'k' | FUNC '(' expr ')'
            | 'chi' '(' pred ')' | '(' expr ')'
    pred   := 'even' '(' expr ')' | 'odd' '(' expr ')'
            | 'mod' '(' expr ',' INT ',' INT ')' | expr CMP expr
    FUNC   := abs | sqrt | sin | cos | exp | log
    CMP    := '<' | '<=' | '=' | '>=' | '>'

``eps`` is the grid value eps_k and ``k`` the grid index, so on a dyadic grid
``chi(even(k))`` is an idempotent that is neither 0 nor 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError, ParseError
from .scalar import GenScalar

FUNCS = ("abs", "sqrt", "sin", "cos", "exp", "log")
BINOPS = {"+": "add", "-": "sub", "*": "mul", "/": "div"}
CMPS = ("<", "<=", "=", ">=", ">")


# AST


class Node:
    __slots__ = ()


class Pred:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Node):
    value: float


@dataclass(frozen=True)
class Eps(Node):
    pass


@dataclass(frozen=True)
class K(Node):
    pass


@dataclass(frozen=True)
class Unary(Node):
    op: str
    arg: Node


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, int):
            raise TypeError("pow exponent must be an integer literal")


@dataclass(frozen=True)
class Chi(Node):
    pred: Pred


@dataclass(frozen=True)
class Even(Pred):
    arg: Node


@dataclass(frozen=True)
class Odd(Pred):
    arg: Node


@dataclass(frozen=True)
class Mod(Pred):
    arg: Node
    modulus: int
    residue: int


@dataclass(frozen=True)
class Cmp(Pred):
    left: Node
    op: str
    right: Node


# lexer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|==|≤|≥|[-+*/^(),<>=])
    """,
    re.VERBOSE,
)
_OP_ALIASES = {"≤": "<=", "≥": ">=", "==": "="}


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, end
    text: str
    offset: int


def tokenize(source: str) -> list:
    tokens = []
    pos = 0
    raw = source.encode("utf-8")

    def byte_offset(i):
        return len(source[:i].encode("utf-8"))

    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", byte_offset(pos))
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if kind == "op":
                text = _OP_ALIASES.get(text, text)
            tokens.append(Token(kind, text, byte_offset(pos)))
        pos = m.end()
    tokens.append(Token("end", "", len(raw)))
    return tokens


class _Parser:
    def __init__(self, source):
        self.toks = tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "end" else f"token {t.text!r}"
        raise ParseError(f"unexpected {what}", t.offset, expected)

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.fail([f"'{text}'"])

    def integer(self):
        neg = self.accept("-")
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            self.fail(["integer"])
        self.i += 1
        return -int(t.text) if neg else int(t.text)

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self.fail(["operator", "end of input"])
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = BINOPS[self.tok.text]
            self.i += 1
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = BINOPS[self.tok.text]
            self.i += 1
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        if self.accept("-"):
            return Unary("neg", self.factor())
        node = self.atom()
        if self.accept("^"):
            node = Pow(node, self.integer())
        return node

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(float(t.text))
        if t.kind == "ident":
            if t.text == "eps":
                self.i += 1
                return Eps()
            if t.text == "k":
                self.i += 1
                return K()
            if t.text in FUNCS:
                self.i += 1
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(t.text, arg)
            if t.text == "chi":
                self.i += 1
                self.expect("(")
                p = self.pred()
                self.expect(")")
                return Chi(p)
            raise ParseError(f"unknown name {t.text!r}", t.offset, _ATOM_START)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.fail(_ATOM_START)

    def pred(self):
        t = self.tok
        if t.kind == "ident" and t.text in ("even", "odd", "mod") and \
                self.toks[self.i + 1].text == "(":
            self.i += 2
            arg = self.expr()
            if t.text == "mod":
                self.expect(",")
                m = self.integer()
                self.expect(",")
                r = self.integer()
                self.expect(")")
                if m < 1:
                    raise ParseError("modulus must be positive", t.offset)
                return Mod(arg, m, r)
            self.expect(")")
            return Even(arg) if t.text == "even" else Odd(arg)
        left = self.expr()
        if self.tok.kind == "op" and self.tok.text in CMPS:
            op = self.tok.text
            self.i += 1
            return Cmp(left, op, self.expr())
        self.fail([f"'{c}'" for c in CMPS])


_ATOM_START = ["number", "'eps'", "'k'", "'chi'", "'('", "'-'"] + [f"'{f}'" for f in FUNCS]


def parse(source: str) -> Node:
    """Parse ``source`` into an AST; raises :class:`ParseError` with a byte offset."""
    return _Parser(source).parse()


# printing

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2}
_SYM = {v: k for k, v in BINOPS.items()}


def _prec(node):
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary) and node.op == "neg":
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _num(v):
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def pretty(node) -> str:
    """Render an AST back to source text that reparses to the same AST."""
    if isinstance(node, Num):
        return _num(node.value)
    if isinstance(node, Eps):
        return "eps"
    if isinstance(node, K):
        return "k"
    if isinstance(node, Unary):
        if node.op == "neg":
            inner = pretty(node.arg)
            return f"-({inner})" if _prec(node.arg) < 3 else f"-{inner}"
        return f"{node.op}({pretty(node.arg)})"
    if isinstance(node, Pow):
        base = pretty(node.base)
        if _prec(node.base) < 5:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Binary):
        p = _PREC[node.op]
        left, right = pretty(node.left), pretty(node.right)
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left} {_SYM[node.op]} {right}"
    if isinstance(node, Chi):
        return f"chi({pretty(node.pred)})"
    if isinstance(node, Even):
        return f"even({pretty(node.arg)})"
    if isinstance(node, Odd):
        return f"odd({pretty(node.arg)})"
    if isinstance(node, Mod):
        return f"mod({pretty(node.arg)}, {node.modulus}, {node.residue})"
    if isinstance(node, Cmp):
        return f"{pretty(node.left)} {node.op} {pretty(node.right)}"
    raise TypeError(f"not an expression node: {node!r}")


# evaluation


def _first_bad(grid, bad, message):
    idx = np.flatnonzero(bad)
    if len(idx):
        raise EvaluationError(message, int(grid.ks[idx[0]]))


def _integral(grid, v, what):
    _first_bad(grid, v != np.round(v), f"{what} of a non-integer value")
    return np.round(v).astype(np.int64)


def _eval(node, grid):
    if isinstance(node, Num):
        return np.full(len(grid), node.value, dtype=float)
    if isinstance(node, Eps):
        return np.array(grid.eps, dtype=float)
    if isinstance(node, K):
        return grid.ks.astype(float)
    if isinstance(node, Unary):
        x = _eval(node.arg, grid)
        if node.op == "neg":
            return -x
        if node.op == "abs":
            return np.abs(x)
        if node.op == "sqrt":
            _first_bad(grid, x < 0, "sqrt of a negative value")
            return np.sqrt(x)
        if node.op == "log":
            _first_bad(grid, x <= 0, "log of a nonpositive value")
            return np.log(x)
        with np.errstate(over="ignore"):
            return getattr(np, node.op)(x)
    if isinstance(node, Binary):
        a, b = _eval(node.left, grid), _eval(node.right, grid)
        if node.op == "add":
            return a + b
        if node.op == "sub":
            return a - b
        if node.op == "mul":
            return a * b
        _first_bad(grid, b == 0, "division by zero")
        return a / b
    if isinstance(node, Pow):
        x = _eval(node.base, grid)
        if node.exponent < 0:
            _first_bad(grid, x == 0, "negative power of zero")
        with np.errstate(over="ignore", divide="ignore"):
            return x ** float(node.exponent)
    if isinstance(node, Chi):
        return _pred(node.pred, grid).astype(float)
    raise TypeError(f"not an expression node: {node!r}")


def _pred(p, grid):
    if isinstance(p, Even):
        return _integral(grid, _eval(p.arg, grid), "even") % 2 == 0
    if isinstance(p, Odd):
        return _integral(grid, _eval(p.arg, grid), "odd") % 2 == 1
    if isinstance(p, Mod):
        return _integral(grid, _eval(p.arg, grid), "mod") % p.modulus == p.residue % p.modulus
    if isinstance(p, Cmp):
        a, b = _eval(p.left, grid), _eval(p.right, grid)
        return {
            "<": a < b, "<=": a <= b, "=": a == b, ">=": a >= b, ">": a > b,
        }[p.op]
    raise TypeError(f"not a predicate: {p!r}")


def evaluate(node, grid) -> GenScalar:
    """Evaluate an AST (or source text) at every grid point."""
    if isinstance(node, str):
        node = parse(node)
    with np.errstate(invalid="ignore"):
        values = _eval(node, grid)
    _first_bad(grid, ~np.isfinite(values), "non-finite value")
    return GenScalar(grid, values)


eval_expr = evaluate
