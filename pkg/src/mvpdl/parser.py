"""Concrete syntax: tokenizer, recursive-descent parser, and printer.

Formula precedence, high to low: atoms (`0`, `1`, identifiers, parens);
prefix `~`, `k.`, `[prog]`, `<prog>`; postfix `^k`; then `(.)`, `(+)`,
`&`, `|`, `->` (right associative), `<->`.  Program precedence: atoms,
tests `formula?`; postfix `*`; then `;`; then `+`.

Question atoms of the form `Q{1,3}` (and complements `~Q{1,3}`) lex as a
single token and are only legal as atomic program names; the searching
game layer resolves them against a concrete search space.

The printer emits sugar where it recognizes the expanded pattern and core
syntax otherwise; `parse(print(f))` always returns a tree structurally
equal to `f`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    Atomic,
    Box,
    Formula,
    Implies,
    Not,
    ONE,
    Program,
    Seq,
    Star,
    Test,
    Union,
    Var,
    ZERO,
    Zero,
    diamond,
    iff,
    land,
    lor,
    odot,
    oplus,
    power,
    times,
)


class ParseError(ValueError):
    """Syntax error with position and the token kinds that would have parsed."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.line = line
        self.col = col
        self.expected = expected


@dataclass
class _Token:
    kind: str  # "ident", "int", "qatom", "eof", or the punctuation itself
    text: str
    line: int
    col: int


_PUNCT3 = ("(+)", "(.)", "<->")
_PUNCT2 = ("->",)
_PUNCT1 = "()[]<>|&^;+*?.~"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    line = 1
    col = 1
    size = len(text)

    def error(msg):
        raise ParseError(f"{msg} at line {line}, column {col}", line, col)

    while i < size:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if c.isalpha() or (c == "~" and i + 1 < size and text[i + 1].isalpha()):
            j = i + 1 if c == "~" else i
            k = j
            while k < size and (text[k].isalnum() or text[k] == "_"):
                k += 1
            if k < size and text[k] == "{":
                close = text.find("}", k)
                if close < 0:
                    error("unterminated '{' in question atom")
                body = "".join(text[k + 1 : close].split())
                name = ("~" if c == "~" else "") + text[j:k] + "{" + body + "}"
                tokens.append(_Token("qatom", name, line, start_col))
                col += close + 1 - i
                i = close + 1
                continue
            if c != "~":
                tokens.append(_Token("ident", text[i:k], line, start_col))
                col += k - i
                i = k
                continue
            # plain negation, falls through
        if c.isdigit():
            k = i
            while k < size and text[k].isdigit():
                k += 1
            tokens.append(_Token("int", text[i:k], line, start_col))
            col += k - i
            i = k
            continue
        three = text[i : i + 3]
        if three in _PUNCT3:
            tokens.append(_Token(three, three, line, start_col))
            i += 3
            col += 3
            continue
        two = text[i : i + 2]
        if two in _PUNCT2:
            tokens.append(_Token(two, two, line, start_col))
            i += 2
            col += 2
            continue
        if c in _PUNCT1:
            tokens.append(_Token(c, c, line, start_col))
            i += 1
            col += 1
            continue
        error(f"unexpected character {c!r}")
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Fail(Exception):
    """Internal backtracking signal; never escapes the parser."""


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.far = 0
        self.far_expected: set[str] = set()

    # -- machinery --

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def at(self, kind: str) -> bool:
        return self.tokens[self.i].kind == kind

    def eat(self, kind: str) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != kind:
            self.fail(kind)
        self.i += 1
        return tok

    def fail(self, expected: str):
        if self.i > self.far:
            self.far = self.i
            self.far_expected = {expected}
        elif self.i == self.far:
            self.far_expected.add(expected)
        raise _Fail()

    def error(self) -> ParseError:
        tok = self.tokens[self.far]
        expected = tuple(sorted(self.far_expected))
        found = tok.kind if tok.kind != "eof" else "end of input"
        return ParseError(
            f"syntax error at line {tok.line}, column {tok.col}: "
            f"expected {' or '.join(expected)}, found {found}",
            tok.line,
            tok.col,
            expected,
        )

    # -- formulas --

    def formula(self) -> Formula:
        f = self.imp()
        while self.at("<->"):
            self.eat("<->")
            f = iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.f_or()
        if self.at("->"):
            self.eat("->")
            return Implies(f, self.imp())
        return f

    def f_or(self) -> Formula:
        f = self.f_and()
        while self.at("|"):
            self.eat("|")
            f = lor(f, self.f_and())
        return f

    def f_and(self) -> Formula:
        f = self.f_oplus()
        while self.at("&"):
            self.eat("&")
            f = land(f, self.f_oplus())
        return f

    def f_oplus(self) -> Formula:
        f = self.f_odot()
        while self.at("(+)"):
            self.eat("(+)")
            f = oplus(f, self.f_odot())
        return f

    def f_odot(self) -> Formula:
        f = self.post()
        while self.at("(.)"):
            self.eat("(.)")
            f = odot(f, self.post())
        return f

    def post(self) -> Formula:
        f = self.pre()
        while self.at("^"):
            self.eat("^")
            f = power(f, int(self.eat("int").text))
        return f

    def pre(self) -> Formula:
        if self.at("~"):
            self.eat("~")
            return Not(self.pre())
        if self.at("int") and self.tokens[self.i + 1].kind == ".":
            k = int(self.eat("int").text)
            self.eat(".")
            return times(k, self.pre())
        if self.at("["):
            self.eat("[")
            p = self.program()
            self.eat("]")
            return Box(p, self.pre())
        if self.at("<"):
            self.eat("<")
            p = self.program()
            self.eat(">")
            return diamond(p, self.pre())
        return self.prim()

    def prim(self) -> Formula:
        if self.at("("):
            self.eat("(")
            f = self.formula()
            self.eat(")")
            return f
        if self.at("int"):
            tok = self.peek()
            if tok.text == "0":
                self.eat("int")
                return ZERO
            if tok.text == "1":
                self.eat("int")
                return ONE
            self.fail("0 or 1")
        if self.at("ident"):
            return Var(self.eat("ident").text)
        self.fail("formula")

    # -- programs --

    def program(self) -> Program:
        p = self.p_seq()
        while self.at("+"):
            self.eat("+")
            p = Union(p, self.p_seq())
        return p

    def p_seq(self) -> Program:
        p = self.p_star()
        while self.at(";"):
            self.eat(";")
            p = Seq(p, self.p_star())
        return p

    def p_star(self) -> Program:
        p = self.p_base()
        while self.at("*"):
            self.eat("*")
            p = Star(p)
        return p

    def p_base(self) -> Program:
        if self.at("qatom"):
            return Atomic(self.eat("qatom").text)
        mark = self.i
        try:
            f = self.formula()
            self.eat("?")
            return Test(f)
        except _Fail:
            self.i = mark
        if self.at("ident"):
            return Atomic(self.eat("ident").text)
        if self.at("("):
            self.eat("(")
            p = self.program()
            self.eat(")")
            return p
        self.fail("program")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    try:
        f = p.formula()
        if not p.at("eof"):
            p.fail("end of input")
        return f
    except _Fail:
        raise p.error() from None
    except RecursionError:
        raise ParseError("formula nested too deeply", 1, 1) from None


def parse_program(text: str) -> Program:
    p = _Parser(text)
    try:
        prog = p.program()
        if not p.at("eof"):
            p.fail("end of input")
        return prog
    except _Fail:
        raise p.error() from None
    except RecursionError:
        raise ParseError("program nested too deeply", 1, 1) from None


# --- printing -------------------------------------------------------------

# Formula levels, binding loose to tight; programs use their own scale.
_L_IFF, _L_IMP, _L_OR, _L_AND, _L_OPLUS, _L_ODOT, _L_POST, _L_PRE, _L_ATOM = range(1, 10)
_P_UNION, _P_SEQ, _P_STAR, _P_ATOM = range(1, 5)


def format_formula(f: Formula) -> str:
    """Canonical text; parsing it back yields a structurally equal tree."""
    return _fmt_f(f, 0)


def format_program(p: Program) -> str:
    return _fmt_p(p, 0)


def _wrap(text: str, level: int, ctx: int) -> str:
    return f"({text})" if level < ctx else text


def _match_odot(f):
    # ~(~~x -> ~y) is x (.) y
    if (
        type(f) is Not
        and type(f.sub) is Implies
        and type(f.sub.lhs) is Not
        and type(f.sub.lhs.sub) is Not
        and type(f.sub.rhs) is Not
    ):
        return f.sub.lhs.sub.sub, f.sub.rhs.sub
    return None


def _match_oplus(f):
    # ~x -> y is x (+) y
    if type(f) is Implies and type(f.lhs) is Not:
        return f.lhs.sub, f.rhs
    return None


def _spine(f, matcher) -> list[Formula]:
    m = matcher(f)
    if m is None:
        return [f]
    return _spine(m[0], matcher) + [m[1]]


def _chain(parts: list[Formula], op: str, level: int) -> str:
    bits = [_fmt_f(parts[0], level)]
    bits += [_fmt_f(p, level + 1) for p in parts[1:]]
    return f" {op} ".join(bits)


def _fmt_f(f: Formula, ctx: int) -> str:
    t = type(f)
    if t is Var:
        return f.name
    if t is Zero:
        return "0"
    if t is Not:
        if type(f.sub) is Zero:
            return "1"
        inner = f.sub
        if type(inner) is Box and type(inner.body) is Not:
            text = f"<{_fmt_p(inner.prog, 0)}>" + _fmt_f(inner.body.sub, _L_PRE)
            return _wrap(text, _L_PRE, ctx)
        if _match_odot(f) is not None:
            parts = _spine(f, _match_odot)
            if len(parts) >= 2 and all(p == parts[0] for p in parts):
                text = _fmt_f(parts[0], _L_POST + 1) + f"^{len(parts)}"
                return _wrap(text, _L_POST, ctx)
            if (
                len(parts) == 2
                and type(parts[0]) is Implies
                and type(parts[1]) is Implies
                and parts[0].lhs == parts[1].rhs
                and parts[0].rhs == parts[1].lhs
            ):
                text = _fmt_f(parts[0].lhs, _L_IFF) + " <-> " + _fmt_f(parts[0].rhs, _L_IFF + 1)
                return _wrap(text, _L_IFF, ctx)
            return _wrap(_chain(parts, "(.)", _L_ODOT), _L_ODOT, ctx)
        if (
            type(inner) is Implies
            and type(inner.lhs) is Implies
            and type(inner.lhs.lhs) is Not
            and type(inner.lhs.rhs) is Not
            and type(inner.rhs) is Not
            and inner.lhs.rhs == inner.rhs
        ):
            a, b = inner.lhs.lhs.sub, inner.rhs.sub
            text = _fmt_f(a, _L_AND) + " & " + _fmt_f(b, _L_AND + 1)
            return _wrap(text, _L_AND, ctx)
        return _wrap("~" + _fmt_f(f.sub, _L_PRE), _L_PRE, ctx)
    if t is Implies:
        if type(f.lhs) is Implies and f.lhs.rhs == f.rhs:
            text = _fmt_f(f.lhs.lhs, _L_OR) + " | " + _fmt_f(f.rhs, _L_OR + 1)
            return _wrap(text, _L_OR, ctx)
        if _match_oplus(f) is not None:
            # claim the sugar for k-fold repetition, or a sum of two
            # implication-free parts; anything else reads better as ->
            parts = _spine(f, _match_oplus)
            if len(parts) >= 2 and all(p == parts[0] for p in parts):
                text = f"{len(parts)}." + _fmt_f(parts[0], _L_PRE)
                return _wrap(text, _L_PRE, ctx)
            if len(parts) == 2 and type(parts[0]) is not Implies and type(parts[1]) is not Implies:
                return _wrap(_chain(parts, "(+)", _L_OPLUS), _L_OPLUS, ctx)
        text = _fmt_f(f.lhs, _L_IMP + 1) + " -> " + _fmt_f(f.rhs, _L_IMP)
        return _wrap(text, _L_IMP, ctx)
    if t is Box:
        text = f"[{_fmt_p(f.prog, 0)}]" + _fmt_f(f.body, _L_PRE)
        return _wrap(text, _L_PRE, ctx)
    raise TypeError(f"not a formula: {f!r}")


def _fmt_p(p: Program, ctx: int) -> str:
    t = type(p)
    if t is Atomic:
        return p.name
    if t is Test:
        return _wrap(_fmt_f(p.formula, 0) + "?", _P_ATOM, ctx)
    if t is Star:
        return _wrap(_fmt_p(p.sub, _P_STAR) + "*", _P_STAR, ctx)
    if t is Seq:
        text = _fmt_p(p.left, _P_SEQ) + ";" + _fmt_p(p.right, _P_SEQ + 1)
        return _wrap(text, _P_SEQ, ctx)
    if t is Union:
        text = _fmt_p(p.left, _P_UNION) + " + " + _fmt_p(p.right, _P_UNION + 1)
        return _wrap(text, _P_UNION, ctx)
    raise TypeError(f"not a program: {p!r}")
