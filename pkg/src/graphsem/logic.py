"""Formulas and sequents of the lattice-based modal language.

Concrete syntax (ASCII)::

    seq  ::= or "|-" or
    or   ::= and ("|" and)*
    and  ::= un ("&" un)*
    un   ::= ("[]" | "<>" | "[b]" | "<b>") un | atom
    atom ::= "0" | "1" | "bot" | "top" | ident | "(" or ")"

``[b]`` and ``<b>`` are the black box and black diamond (the adjoints).
Binary connectives associate to the left.
"""
from __future__ import annotations

import re
from dataclasses import dataclass


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Prop(Formula):
    name: str

    def __post_init__(self):
        if not IDENT.fullmatch(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid proposition name {self.name!r}")


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    arg: Formula


@dataclass(frozen=True)
class Dia(Formula):
    arg: Formula


@dataclass(frozen=True)
class BlackBox(Formula):
    arg: Formula


@dataclass(frozen=True)
class BlackDia(Formula):
    arg: Formula


@dataclass(frozen=True)
class Sequent:
    lhs: Formula
    rhs: Formula

    def __str__(self) -> str:
        return f"{to_text(self.lhs)} |- {to_text(self.rhs)}"


UNARY = {"[]": Box, "<>": Dia, "[b]": BlackBox, "<b>": BlackDia}
UNARY_TOKEN = {cls: tok for tok, cls in UNARY.items()}
KEYWORDS = {"bot", "top"}
IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        pointer = f"\n  {text}\n  {' ' * pos}^"
        super().__init__(f"{message} at position {pos}{pointer}")


_TOKEN = re.compile(
    r"\s*(?:(?P<op>\|-|\[\]|<>|\[b\]|<b>|&|\||\(|\))|(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)|(?P<const>[01](?![0-9])))"
)


def tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        tokens.append((m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, tok: str) -> None:
        if self.peek() != tok:
            found = self.peek()
            what = "end of input" if found is None else repr(found)
            raise ParseError(f"expected {tok!r}, found {what}", self.text, self.pos())
        self.i += 1

    def finish(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()!r}", self.text, self.pos())

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok in UNARY:
            self.i += 1
            return UNARY[tok](self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text, self.pos())
        if tok == "(":
            self.i += 1
            f = self.disj()
            self.take(")")
            return f
        self.i += 1
        if tok in ("0", "bot"):
            return Bot()
        if tok in ("1", "top"):
            return Top()
        if IDENT.fullmatch(tok):
            return Prop(tok)
        self.i -= 1
        raise ParseError(f"unexpected {tok!r}", self.text, self.pos())


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.disj()
    p.finish()
    return f


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    lhs = p.disj()
    p.take("|-")
    rhs = p.disj()
    p.finish()
    return Sequent(lhs, rhs)


# --- printing ----------------------------------------------------------------
# precedence levels: 0 or, 1 and, 2 unary/atom

def _level(f: Formula) -> int:
    if isinstance(f, Or):
        return 0
    if isinstance(f, And):
        return 1
    return 2


def _wrap(f: Formula, min_level: int) -> str:
    s = to_text(f)
    return f"({s})" if _level(f) < min_level else s


def to_text(f: Formula) -> str:
    """Minimal-parentheses rendering; ``parse_formula(to_text(f)) == f``."""
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Or):
        return f"{_wrap(f.left, 0)} | {_wrap(f.right, 1)}"
    if isinstance(f, And):
        return f"{_wrap(f.left, 1)} & {_wrap(f.right, 2)}"
    if type(f) in UNARY_TOKEN:
        return UNARY_TOKEN[type(f)] + _wrap(f.arg, 2)
    raise TypeError(f"not a formula: {f!r}")


def print_formula(f: Formula | Sequent) -> str:
    return str(f) if isinstance(f, Sequent) else to_text(f)


def props_of(f: Formula | Sequent) -> set[str]:
    if isinstance(f, Sequent):
        return props_of(f.lhs) | props_of(f.rhs)
    if isinstance(f, Prop):
        return {f.name}
    if isinstance(f, (And, Or)):
        return props_of(f.left) | props_of(f.right)
    if type(f) in UNARY_TOKEN:
        return props_of(f.arg)
    return set()


def modal_depth(f: Formula | Sequent) -> int:
    if isinstance(f, Sequent):
        return max(modal_depth(f.lhs), modal_depth(f.rhs))
    if isinstance(f, (And, Or)):
        return max(modal_depth(f.left), modal_depth(f.right))
    if type(f) in UNARY_TOKEN:
        return 1 + modal_depth(f.arg)
    return 0


def subformulas(f: Formula):
    """Post-order traversal, children before parents."""
    if isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif type(f) in UNARY_TOKEN:
        yield from subformulas(f.arg)
    yield f
