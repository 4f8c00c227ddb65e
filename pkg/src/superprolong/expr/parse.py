"""Recursive-descent parser for expression and operator strings.

Grammar (whitespace free):
    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := ('-'|'+') unary | power
    power  := base ('^' ['-'] integer)?
    base   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
            | '[' row (',' row)* ']'
    row    := '[' expr (',' expr)* ']'

Unary minus binds looser than '^', so -x^2 is -(x^2).  The parser builds a
small AST; evaluation to an Expr happens in `evaluate_scalar` and the operator
module evaluates the same AST with Dt, Dx, Dy tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import core
from .core import Expr, FuncApp, Jet, Sym

JET_RE = re.compile(r"^(c?)u(\d+)(?:_([txy]+))?$")
TOKEN_RE = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at byte {offset}")


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, offset: int, declared: list[str], text: str = ""):
        self.name = name
        self.declared = declared
        ValueError.__init__(
            self, f"unknown identifier {name!r} at byte {offset}; declared: {', '.join(declared)}")
        self.offset = offset
        self.text = text


@dataclass
class Context:
    """Symbol table used when turning text into expressions."""

    symbols: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    max_dep: int | None = None
    definitions: dict = field(default_factory=dict)

    def declare_coord(self, name: str) -> Sym:
        s = Sym(name, "coord")
        self.symbols[name] = s
        return s

    def declare_param(self, name: str, conj_name: str | None = None) -> Sym:
        s = Sym(name, "param", conj_name)
        self.symbols[name] = s
        if conj_name:
            self.symbols[conj_name] = s.partner()
        return s

    def declare_label(self, name: str) -> Sym:
        s = Sym(name, "label")
        self.symbols[name] = s
        return s

    def declare_function(self, name: str, conj_name: str | None = None):
        self.functions[name] = conj_name
        if conj_name and conj_name != name:
            self.functions[conj_name] = name

    def define(self, name: str, value: Expr):
        """Make name expand to value when parsed (for example w -> e*B/(2*M))."""
        self.symbols.pop(name, None)
        self.definitions[name] = core.as_expr(value)

    def copy(self) -> "Context":
        return Context(dict(self.symbols), dict(self.functions), self.max_dep, dict(self.definitions))

    def declared(self) -> list[str]:
        names = ["i", "pi"] + sorted(set(self.symbols) | set(self.definitions)) + sorted(self.functions) + list(core.FUNCTIONS)
        names.append("u<k>[_txy]" if self.max_dep is None else f"u1..u{self.max_dep}[_txy]")
        return names


def default_context() -> Context:
    ctx = Context()
    for c in core.COORD_NAMES:
        ctx.declare_coord(c)
    for p in ("w", "M", "e", "B", "E", "wt", "wab", "alpha", "beta"):
        ctx.declare_param(p)
    ctx.declare_param("kappa", "kappabar")
    for k in range(1, 14):
        ctx.declare_param(f"delta{k}")
    return ctx


# ---------------------------------------------------------------- tokens and AST


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def tokenize(text: str) -> list[tuple[str, object, int]]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            kind = "dec" if "." in m.group(1) else "num"
            out.append((kind, Fraction(m.group(1)), _byte_offset(text, m.start(1))))
        elif m.group(2) is not None:
            out.append(("id", m.group(2), _byte_offset(text, m.start(2))))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^(),[]":
                raise ParseError(f"unexpected character {ch!r}", _byte_offset(text, m.start(3)), text)
            out.append(("op", ch, _byte_offset(text, m.start(3))))
        pos = m.end()
    out.append(("end", None, len(text.encode("utf-8"))))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, ch):
        t = self.take()
        if t[0] != "op" or t[1] != ch:
            raise ParseError(f"expected {ch!r}", t[2], self.text)
        return t

    def is_op(self, ch) -> bool:
        t = self.peek()
        return t[0] == "op" and t[1] == ch

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError("unexpected trailing input", t[2], self.text)
        return node

    def expr(self):
        node = self.term()
        while self.is_op("+") or self.is_op("-"):
            t = self.take()
            rhs = self.term()
            node = ("add" if t[1] == "+" else "sub", node, rhs, t[2])
        return node

    def term(self):
        node = self.unary()
        while self.is_op("*") or self.is_op("/"):
            t = self.take()
            rhs = self.unary()
            node = ("mul" if t[1] == "*" else "div", node, rhs, t[2])
        return node

    def unary(self):
        if self.is_op("-"):
            t = self.take()
            return ("neg", self.unary(), t[2])
        if self.is_op("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.base()
        if self.is_op("^"):
            t = self.take()
            paren = False
            if self.is_op("("):
                self.take()
                paren = True
            sign = 1
            if self.is_op("-"):
                self.take()
                sign = -1
            n = self.take()
            if n[0] != "num":
                raise ParseError("exponent must be an integer", n[2], self.text)
            if paren:
                self.expect(")")
            node = ("pow", node, sign * int(n[1]), t[2])
        return node

    def base(self):
        t = self.take()
        kind, val, off = t
        if kind in ("num", "dec"):
            return ("num", val, off)
        if kind == "id":
            if self.is_op("("):
                self.take()
                args = [self.expr()]
                while self.is_op(","):
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                return ("call", val, args, off)
            return ("name", val, off)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "op" and val == "[":
            rows = [self.row()]
            while self.is_op(","):
                self.take()
                rows.append(self.row())
            self.expect("]")
            return ("matrix", rows, off)
        if kind == "end":
            raise ParseError("unexpected end of input", off, self.text)
        raise ParseError(f"unexpected token {val!r}", off, self.text)

    def row(self):
        self.expect("[")
        items = [self.expr()]
        while self.is_op(","):
            self.take()
            items.append(self.expr())
        self.expect("]")
        return items


def parse_ast(text: str):
    return _Parser(text).parse()


# ---------------------------------------------------------------- evaluation


def resolve_name(name: str, off: int, ctx: Context, text: str = "") -> Expr:
    if name == "i":
        return core.I
    if name == "pi":
        return Expr.atom(core.PI)
    d = ctx.definitions.get(name)
    if d is not None:
        return d
    s = ctx.symbols.get(name)
    if s is not None:
        return Expr.atom(s)
    m = JET_RE.match(name)
    if m:
        dep = int(m.group(2))
        if dep >= 1 and (ctx.max_dep is None or dep <= ctx.max_dep):
            suffix = m.group(3) or ""
            mi = tuple(suffix.count(c) for c in core.COORD_NAMES)
            return Expr.atom(Jet(dep, bool(m.group(1)), mi))
    raise UnknownIdentifierError(name, off, ctx.declared(), text)


def single_atom(e: Expr):
    if len(e.terms) == 1:
        (m, c), = e.terms.items()
        if c == 1 and len(m) == 1 and m[0][1] == 1:
            return m[0][0]
    return None


def evaluate_scalar(node, ctx: Context, text: str = "") -> Expr:
    kind = node[0]
    if kind == "num":
        return Expr.const(node[1])
    if kind == "name":
        return resolve_name(node[1], node[2], ctx, text)
    if kind == "neg":
        return -evaluate_scalar(node[1], ctx, text)
    if kind in ("add", "sub", "mul", "div"):
        a = evaluate_scalar(node[1], ctx, text)
        b = evaluate_scalar(node[2], ctx, text)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if not b.terms:
            raise ParseError("division by zero", node[3], text)
        return a / b
    if kind == "pow":
        base = evaluate_scalar(node[1], ctx, text)
        if node[2] < 0 and not base.terms:
            raise ParseError("zero raised to a negative power", node[3], text)
        return base ** node[2]
    if kind == "call":
        return _call(node, ctx, text)
    if kind == "matrix":
        raise ParseError("matrix literal where a scalar was expected", node[2], text)
    raise ParseError(f"bad node {kind}", 0, text)


def _call(node, ctx: Context, text: str) -> Expr:
    _, name, args, off = node
    if name in core.FUNCTIONS:
        if len(args) != 1:
            raise ParseError(f"{name} takes one argument", off, text)
        return core.fn(name, evaluate_scalar(args[0], ctx, text))
    if name == "conj":
        if len(args) != 1:
            raise ParseError("conj takes one argument", off, text)
        return core.conj(evaluate_scalar(args[0], ctx, text))
    if name == "D":
        if len(args) < 2:
            raise ParseError("D needs an expression and at least one variable", off, text)
        body = evaluate_scalar(args[0], ctx, text)
        for a in args[1:]:
            v = single_atom(evaluate_scalar(a, ctx, text))
            if not isinstance(v, (Sym, Jet)):
                raise ParseError("D variables must be symbols", a[-1], text)
            body = core.differentiate(body, v)
        return body
    if name in ctx.functions:
        atoms = []
        for a in args:
            v = single_atom(evaluate_scalar(a, ctx, text))
            if not isinstance(v, (Sym, Jet)):
                raise ParseError(f"arguments of {name} must be symbols", a[-1], text)
            atoms.append(v)
        return Expr.atom(FuncApp(name, atoms, None, ctx.functions[name]))
    raise UnknownIdentifierError(name, off, ctx.declared(), text)


def parse(text: str, ctx: Context | None = None) -> Expr:
    """Parse a scalar expression string into a canonical Expr."""
    ctx = ctx or default_context()
    return evaluate_scalar(_Parser(text).parse(), ctx, text)
