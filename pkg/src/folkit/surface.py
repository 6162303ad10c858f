"""Surface syntax: named-variable grammar over the de Bruijn core.

    formula := "forall" name "." formula | "exists" name "." formula | imp
    imp     := or ("->" imp)?
    or      := and ("\\/" and)*
    and     := atom ("/\\" atom)*
    atom    := "false" | "~" atom | name "(" terms ")" | name | "(" formula ")"

→ is right associative and ~phi abbreviates phi -> false.  Free variables
are written x0, x1, ...; other names in term position are constants or
function applications.  The printer invents bound names above every free
index, so print∘parse and parse∘print round-trip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (All, App, Atom, Bot, Conj, Disj, Ex, Formula, Impl,
                     MalformedSyntaxError, Neg, Signature, Term, Var,
                     free_vars, is_neg)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<or>\\/)
  | (?P<and>/\\)
  | (?P<neg>~)
  | (?P<dot>\.)
  | (?P<comma>,)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

_FREE = re.compile(r"^x(\d+)$")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Signature | None):
        self.toks = _tokenize(text)
        self.pos = 0
        self.sig = sig
        self.preds: dict[str, int] = {}
        self.funcs: dict[str, int] = {}

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        return self.next()

    def _register(self, table: dict[str, int], which: str, tok: _Tok, arity: int):
        if self.sig is not None:
            known = (self.sig.pred_arity if which == "predicate"
                     else self.sig.func_arity)
            try:
                expected = known(tok.text)
            except MalformedSyntaxError:
                raise ParseError(f"unknown {which} {tok.text!r}", tok.line, tok.col)
            if expected != arity:
                raise ParseError(
                    f"{which} {tok.text!r} expects arity {expected}, got {arity}",
                    tok.line, tok.col)
        seen = table.get(tok.text)
        if seen is not None and seen != arity:
            raise ParseError(
                f"{which} {tok.text!r} used with arities {seen} and {arity}",
                tok.line, tok.col)
        table[tok.text] = arity

    def formula(self, bound: tuple[str, ...]) -> Formula:
        tok = self.peek()
        if tok.kind == "name" and tok.text in ("forall", "exists"):
            self.next()
            name = self.expect("name").text
            self.expect("dot")
            body = self.formula((name,) + bound)
            return All(body) if tok.text == "forall" else Ex(body)
        return self.imp(bound)

    def imp(self, bound) -> Formula:
        lhs = self.disj(bound)
        if self.peek().kind == "arrow":
            self.next()
            return Impl(lhs, self.imp(bound))
        return lhs

    def disj(self, bound) -> Formula:
        lhs = self.conj(bound)
        while self.peek().kind == "or":
            self.next()
            lhs = Disj(lhs, self.conj(bound))
        return lhs

    def conj(self, bound) -> Formula:
        lhs = self.atom(bound)
        while self.peek().kind == "and":
            self.next()
            lhs = Conj(lhs, self.atom(bound))
        return lhs

    def atom(self, bound) -> Formula:
        tok = self.peek()
        if tok.kind == "lpar":
            self.next()
            phi = self.formula(bound)
            self.expect("rpar")
            return phi
        if tok.kind == "neg":
            self.next()
            return Neg(self.atom(bound))
        if tok.kind == "name":
            if tok.text == "false":
                self.next()
                return Bot
            if tok.text in ("forall", "exists"):
                return self.formula(bound)
            self.next()
            if self.peek().kind == "lpar":
                self.next()
                args = self.terms(bound)
                self.expect("rpar")
                self._register(self.preds, "predicate", tok, len(args))
                return Atom(tok.text, tuple(args))
            self._register(self.preds, "predicate", tok, 0)
            return Atom(tok.text, ())
        raise ParseError(f"expected a formula, found {tok.text or 'end of input'!r}",
                         tok.line, tok.col)

    def terms(self, bound) -> list[Term]:
        args = [self.term(bound)]
        while self.peek().kind == "comma":
            self.next()
            args.append(self.term(bound))
        return args

    def term(self, bound) -> Term:
        tok = self.expect("name")
        if tok.text in bound:
            return Var(bound.index(tok.text))
        if self.peek().kind == "lpar":
            self.next()
            args = self.terms(bound)
            self.expect("rpar")
            self._register(self.funcs, "function", tok, len(args))
            return App(tok.text, tuple(args))
        m = _FREE.match(tok.text)
        if m:
            return Var(len(bound) + int(m.group(1)))
        self._register(self.funcs, "function", tok, 0)
        return App(tok.text, ())


def parse(text: str, sig: Signature | None = None) -> Formula:
    parser = _Parser(text, sig)
    phi = parser.formula(())
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return phi


def parse_with_signature(text: str, sig: Signature | None = None
                         ) -> tuple[Formula, Signature]:
    """Parse and return the formula with its inferred (or supplied) signature."""
    parser = _Parser(text, sig)
    phi = parser.formula(())
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    if sig is not None:
        return phi, sig
    return phi, Signature(tuple(sorted(parser.funcs.items())),
                          tuple(sorted(parser.preds.items())))


def parse_term(text: str, bound: tuple[str, ...] = (),
               sig: Signature | None = None) -> Term:
    parser = _Parser(text, sig)
    t = parser.term(bound)
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return t


# ---------------------------------------------------------------------------
# printing


def print_term(t: Term, bound: tuple[str, ...] = ()) -> str:
    if isinstance(t, Var):
        if t.index < len(bound):
            return bound[t.index]
        return f"x{t.index - len(bound)}"
    if not t.args:
        return t.func
    return f"{t.func}({', '.join(print_term(a, bound) for a in t.args)})"


def print_formula(phi: Formula) -> str:
    fresh = max(free_vars(phi), default=-1) + 1
    return _print(phi, (), fresh, 0)


# precedence levels: 0 formula/quantifier, 1 imp, 2 or, 3 and, 4 atom
def _print(phi: Formula, bound: tuple[str, ...], fresh: int, level: int) -> str:
    if isinstance(phi, (All, Ex)):
        name = f"x{fresh + len(bound)}"
        kw = "forall" if isinstance(phi, All) else "exists"
        s = f"{kw} {name}. {_print(phi.body, (name,) + bound, fresh, 0)}"
        return f"({s})" if level > 0 else s
    if is_neg(phi):
        return f"~{_print(phi.lhs, bound, fresh, 4)}"
    if isinstance(phi, Impl):
        s = f"{_print(phi.lhs, bound, fresh, 2)} -> {_print(phi.rhs, bound, fresh, 1)}"
        return f"({s})" if level > 1 else s
    if isinstance(phi, Disj):
        s = f"{_print(phi.lhs, bound, fresh, 2)} \\/ {_print(phi.rhs, bound, fresh, 3)}"
        return f"({s})" if level > 2 else s
    if isinstance(phi, Conj):
        s = f"{_print(phi.lhs, bound, fresh, 3)} /\\ {_print(phi.rhs, bound, fresh, 4)}"
        return f"({s})" if level > 3 else s
    if isinstance(phi, Atom):
        if not phi.args:
            return phi.pred
        return f"{phi.pred}({', '.join(print_term(a, bound) for a in phi.args)})"
    return "false"
