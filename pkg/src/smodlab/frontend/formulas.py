"""Formula ASTs, a precedence-climbing parser, and a canonical printer.

Grammar, precedence low to high:

    formula  :=  addend  ( '-o' formula )?          right associative
    addend   :=  factor  ( ('+' | '&') factor )*    left associative
    factor   :=  prefix  ( '*' prefix )*            left associative
    prefix   :=  '!' INT prefix  |  postfix
    postfix  :=  atomic '^'*
    atomic   :=  '(' formula ')' | '1' | '0' | 'T' | NAME

Unicode aliases: ⊸ ⊗ ⊕ and ⅋ (the latter expands at parse time to
``(l^ * r^)^``).  The printer emits ASCII with canonical parentheses so that
``parse(print(ast)) == ast``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, expected=()):
        self.pos = pos
        self.expected = tuple(expected)
        extra = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"at position {pos}: {message}{extra}")


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


@dataclass(frozen=True)
class Lolli:
    left: object
    right: object


@dataclass(frozen=True)
class With:
    left: object
    right: object


@dataclass(frozen=True)
class Plus:
    left: object
    right: object


@dataclass(frozen=True)
class Dual:
    body: object


@dataclass(frozen=True)
class Bang:
    body: object
    degree: int


_TOKEN = re.compile(r"""
    \s*(?:
      (?P<lolli>-o|⊸)
    | (?P<tensor>\*|⊗)
    | (?P<par>⅋)
    | (?P<plus>\+|⊕)
    | (?P<with>&)
    | (?P<bang>!)
    | (?P<dual>\^)
    | (?P<lpar>\()
    | (?P<rpar>\))
    | (?P<int>\d+)
    | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
    )""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise ParseError(f"unexpected character {rest[0]!r}",
                             len(text) - len(rest))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"got {tok[1]!r}", tok[2], (kind,))
        return tok

    def formula(self):
        left = self.addend()
        if self.peek()[0] == "lolli":
            self.next()
            return Lolli(left, self.formula())
        return left

    def addend(self):
        node = self.factor()
        while self.peek()[0] in ("plus", "with"):
            kind, _, _ = self.next()
            right = self.factor()
            node = Plus(node, right) if kind == "plus" else With(node, right)
        return node

    def factor(self):
        node = self.prefix()
        while self.peek()[0] in ("tensor", "par"):
            kind, _, _ = self.next()
            right = self.prefix()
            if kind == "par":
                node = Dual(Tensor(Dual(node), Dual(right)))
            else:
                node = Tensor(node, right)
        return node

    def prefix(self):
        if self.peek()[0] == "bang":
            _, _, pos = self.next()
            tok = self.peek()
            if tok[0] != "int":
                raise ParseError("'!' needs an explicit degree", pos, ("int",))
            self.next()
            return Bang(self.prefix(), int(tok[1]))
        return self.postfix()

    def postfix(self):
        node = self.atomic()
        while self.peek()[0] == "dual":
            self.next()
            node = Dual(node)
        return node

    def atomic(self):
        kind, value, pos = self.next()
        if kind == "lpar":
            node = self.formula()
            self.expect("rpar")
            return node
        if kind == "int":
            if value == "1":
                return One()
            if value == "0":
                return Zero()
            raise ParseError(f"unexpected number {value}", pos,
                             ("1", "0", "name", "("))
        if kind == "name":
            if value == "T":
                return Top()
            return Atom(value)
        raise ParseError(f"got {value!r}", pos, ("(", "1", "0", "T", "name"))


def parse_formula(text: str):
    p = _Parser(text)
    node = p.formula()
    tok = p.peek()
    if tok[0] != "eof":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2], ("eof",))
    return node


def _atomicish(ast) -> bool:
    return isinstance(ast, (Atom, One, Zero, Top, Dual))


def _wrap(ast) -> str:
    text = print_formula(ast)
    return text if _atomicish(ast) else f"({text})"


def print_formula(ast) -> str:
    if isinstance(ast, Atom):
        return ast.name
    if isinstance(ast, One):
        return "1"
    if isinstance(ast, Zero):
        return "0"
    if isinstance(ast, Top):
        return "T"
    if isinstance(ast, Tensor):
        return f"{_wrap(ast.left)} * {_wrap(ast.right)}"
    if isinstance(ast, Lolli):
        return f"{_wrap(ast.left)} -o {_wrap(ast.right)}"
    if isinstance(ast, With):
        return f"{_wrap(ast.left)} & {_wrap(ast.right)}"
    if isinstance(ast, Plus):
        return f"{_wrap(ast.left)} + {_wrap(ast.right)}"
    if isinstance(ast, Dual):
        return f"{_wrap(ast.body)}^"
    if isinstance(ast, Bang):
        return f"!{ast.degree} {_wrap(ast.body)}"
    raise TypeError(f"not a formula AST: {ast!r}")
