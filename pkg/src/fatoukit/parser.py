"""Parser for the family description language.

Grammar::

    spec  := part ("|" part)*
    part  := "family" "n" ["from" INT] ":" expr
           | "set" ":" expr (";" expr)*
           | "semigroup" "L" "=" INT ":" expr (";" expr)*
    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := "-" unary | power
    power := atom ["^" unary]
    atom  := NUMBER | NUMBER "i" | "z" | "n"
           | ("exp" | "sin" | "cos") "(" expr ")" | "(" expr ")"

Numbers accept decimals and exponents (``1.5``, ``2e-3``); an ``i`` suffix
makes an imaginary literal.  Constant subexpressions fold at parse time, so
``1+2i`` and the folded constant print/parse identically.  The index symbol
``n`` is only legal inside ``family`` parts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import expr as ex
from .family import FamilySpec, FiniteSet, Parametric, Semigroup, UnionSpec

__all__ = ["ParseError", "parse_family", "parse_expr"]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i\b)?"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^():;|=,]))"
)

_KEYWORDS = {"family", "set", "semigroup", "from"}
_FUNCS = {"exp", "sin", "cos"}


@dataclass
class _Tok:
    kind: str  # num | imag | ident | op | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            stripped = text[i:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}",
                             len(text) - len(stripped))
        if m.group("num") is not None:
            kind = "imag" if m.group("imag") else "num"
            toks.append(_Tok(kind, m.group("num"), m.start("num")))
        elif m.group("ident") is not None:
            toks.append(_Tok("ident", m.group("ident"), m.start("ident")))
        else:
            toks.append(_Tok("op", m.group("op"), m.start("op")))
        i = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_n = False

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str) -> _Tok:
        t = self.next()
        if t.kind != "op" or t.text != op:
            raise ParseError(f"expected {op!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def expect_ident(self, name: str) -> _Tok:
        t = self.next()
        if t.kind != "ident" or t.text != name:
            raise ParseError(f"expected {name!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def expect_int(self) -> int:
        t = self.next()
        if t.kind != "num" or not re.fullmatch(r"\d+", t.text):
            raise ParseError(f"expected an integer, found {t.text!r}", t.pos)
        return int(t.text)

    # ---- expression grammar ----

    def parse_expr(self) -> ex.Expr:
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            rhs = self.parse_term()
            node = ex.add(node, rhs) if op == "+" else ex.sub(node, rhs)
        return node

    def parse_term(self) -> ex.Expr:
        node = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            rhs = self.parse_unary()
            node = ex.mul(node, rhs) if op == "*" else ex.div(node, rhs)
        return node

    def parse_unary(self) -> ex.Expr:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.next()
            return ex.neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> ex.Expr:
        base = self.parse_atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.next()
            return ex.powe(base, self.parse_unary())
        return base

    def parse_atom(self) -> ex.Expr:
        t = self.next()
        if t.kind == "num":
            return ex.const(float(t.text))
        if t.kind == "imag":
            return ex.const(complex(0.0, float(t.text)))
        if t.kind == "op" and t.text == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if t.kind == "ident":
            if t.text == "z":
                return ex.Z()
            if t.text == "n":
                if not self.allow_n:
                    raise ParseError("index symbol 'n' is not allowed here", t.pos)
                return ex.N()
            if t.text in _FUNCS:
                self.expect_op("(")
                node = self.parse_expr()
                self.expect_op(")")
                return ex.call(t.text, node)
            raise ParseError(f"unknown identifier {t.text!r}", t.pos)
        raise ParseError(f"expected an expression, found {t.text or 'end of input'!r}", t.pos)

    # ---- family grammar ----

    def parse_part(self) -> FamilySpec:
        t = self.next()
        if t.kind != "ident":
            raise ParseError("expected 'family', 'set' or 'semigroup'", t.pos)
        if t.text == "family":
            self.expect_ident("n")
            n_from = 1
            if self.peek().kind == "ident" and self.peek().text == "from":
                self.next()
                n_from = self.expect_int()
                if n_from < 1:
                    raise ParseError("'from' index must be >= 1", t.pos)
            self.expect_op(":")
            self.allow_n = True
            body = self.parse_expr()
            self.allow_n = False
            return Parametric(body, n_from=n_from)
        if t.text == "set":
            self.expect_op(":")
            members = [self.parse_expr()]
            while self.peek().kind == "op" and self.peek().text == ";":
                self.next()
                members.append(self.parse_expr())
            return FiniteSet(tuple(members))
        if t.text == "semigroup":
            self.expect_ident("L")
            self.expect_op("=")
            max_len = self.expect_int()
            if max_len < 1:
                raise ParseError("word length bound must be >= 1", t.pos)
            self.expect_op(":")
            gens = [self.parse_expr()]
            while self.peek().kind == "op" and self.peek().text == ";":
                self.next()
                gens.append(self.parse_expr())
            return Semigroup(tuple(gens), max_len)
        raise ParseError(f"expected 'family', 'set' or 'semigroup', found {t.text!r}", t.pos)

    def parse_spec(self) -> FamilySpec:
        parts = [self.parse_part()]
        while self.peek().kind == "op" and self.peek().text == "|":
            self.next()
            parts.append(self.parse_part())
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected trailing input {t.text!r}", t.pos)
        if len(parts) == 1:
            return parts[0]
        return UnionSpec(tuple(parts))


def parse_family(text: str) -> FamilySpec:
    """Parse a family description; raises ParseError with a position."""
    return _Parser(text).parse_spec()


def parse_expr(text: str, allow_n: bool = True) -> ex.Expr:
    """Parse a bare expression (used by tests and the Python API)."""
    p = _Parser(text)
    p.allow_n = allow_n
    node = p.parse_expr()
    t = p.peek()
    if t.kind != "end":
        raise ParseError(f"unexpected trailing input {t.text!r}", t.pos)
    return node
