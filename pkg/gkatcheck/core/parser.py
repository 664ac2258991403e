# -*- coding: utf-8 -*-
# core/parser.py
"""
Parsers for the program file formats.

A file starts with header lines `tests: ...` and `actions: ...` (space
separated, possibly empty) followed by one program. Three program syntaxes
share the tokenizer:

- imperative GKAT (.gkat): skip, fail, assert b, p, if/then/else, while/do, {...}
- algebraic KAT (.kat):     + ; * ! 0 1 and parentheses
- algebraic GKAT:           e +[b] f, e^(b), ; ! 0 1 [b] (law templates, debug labels)

Sequencing and all binary operators associate to the right. `#` starts a
comment that runs to the end of the line.
"""

import re
from dataclasses import dataclass
from typing import List, Mapping, Optional, Tuple

from .errors import GkatSyntaxError, ScopeError
from .syntax import (
    FAIL, ONE, SKIP, ZERO, Act, And, BExp, Exp, Hole, IfThenElse, Not, Or,
    Plus, Seq, Star, Test, TestHole, TestOf, Universe, While,
)

KEYWORDS = frozenset({
    "skip", "fail", "assert", "if", "then", "else", "while", "do", "not", "and", "or",
})

PROGRAM_HOLE = "program"
TEST_HOLE = "test"

_TOKEN_RE = re.compile(
    r"(?P<space>[ \t\r\n]+)"
    r"|(?P<comment>\#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<num>[0-9]+)"
    r"|(?P<punct>[;{}()!+*^\[\]])"
)

_HEADER_RE = re.compile(r"^\s*(tests|actions)\s*:(.*)$")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Token:
    kind: str       # ident | num | punct | eof
    value: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.value)


def tokenize(text: str, first_line: int = 1) -> List[Token]:
    """
    Split program text into tokens with 1-based line/column positions.

    Raises:
        GkatSyntaxError: unexpected character or numeral other than 0/1
    """
    tokens = []
    pos = 0
    line, line_start = first_line, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise GkatSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        column = pos - line_start + 1
        if kind == "num" and value not in ("0", "1"):
            raise GkatSyntaxError(f"only 0 and 1 are numerals, got {value}", line, column)
        if kind not in ("space", "comment"):
            tokens.append(Token(kind, value, line, column))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ===== HEADER =====

def parse_header(text: str) -> Tuple[Universe, str]:
    """
    Split a program file into its declared universe and the program text.

    Header lines are blanked (not removed) in the returned program text so
    error positions still refer to the original file.

    Raises:
        ScopeError: duplicate declarations, keyword used as a name, symbol both test and action
    """
    declared = {"tests": None, "actions": None}
    lines = text.split("\n")
    body = []
    in_header = True
    for number, raw in enumerate(lines, start=1):
        stripped = raw.split("#", 1)[0]
        m = _HEADER_RE.match(stripped) if in_header else None
        if m:
            key, names = m.group(1), m.group(2).split()
            if declared[key] is not None:
                raise ScopeError(f"duplicate '{key}:' header", number, 1)
            for name in names:
                if not _IDENT_RE.match(name) or name in KEYWORDS:
                    raise ScopeError(f"invalid symbol name {name!r}", number, raw.index(name) + 1)
            declared[key] = tuple(names)
            body.append("")
            continue
        if stripped.strip():
            in_header = False
        body.append(raw)
    return Universe(declared["tests"] or (), declared["actions"] or ()), "\n".join(body)


# ===== PARSER =====

class _Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, tokens: List[Token], universe: Universe,
                 holes: Optional[Mapping[str, str]] = None):
        self.tokens = tokens
        self.pos = 0
        self.universe = universe
        self.holes = dict(holes or {})

    # --- token helpers ---

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind != "eof" and tok.value == value

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value == word

    def expect(self, value: str) -> Token:
        tok = self.peek()
        if tok.kind == "eof" or tok.value != value:
            self.error(f"expected {value!r}, found {tok.describe()}", tok)
        return self.advance()

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise GkatSyntaxError(message, tok.line, tok.column)

    def scope_error(self, message: str, tok: Token):
        raise ScopeError(message, tok.line, tok.column)

    def finish(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            self.error(f"unexpected {tok.describe()} after end of program", tok)

    # --- identifiers ---

    def ident_kind(self, tok: Token) -> str:
        """test | action | program-hole | test-hole; scope errors otherwise."""
        name = tok.value
        if name in KEYWORDS:
            self.error(f"unexpected keyword {name!r}", tok)
        hole = self.holes.get(name)
        if hole == PROGRAM_HOLE:
            return "program-hole"
        if hole == TEST_HOLE:
            return "test-hole"
        if self.universe.is_test(name):
            return "test"
        if self.universe.is_action(name):
            return "action"
        self.scope_error(f"undeclared symbol {name}", tok)

    def test_atom(self, tok: Token) -> BExp:
        kind = self.ident_kind(tok)
        if kind == "test":
            return Test(tok.value)
        if kind == "test-hole":
            return TestHole(tok.value)
        self.error(f"{tok.value} is not a test", tok)

    # ===== IMPERATIVE GKAT =====

    def prog(self) -> Exp:
        stmts = [self.stmt()]
        while self.at(";"):
            self.advance()
            stmts.append(self.stmt())
        result = stmts[-1]
        for stmt in reversed(stmts[:-1]):
            result = Seq(stmt, result)
        return result

    def block(self) -> Exp:
        if self.at("{"):
            self.advance()
            body = self.prog()
            self.expect("}")
            return body
        return self.stmt()

    def stmt(self) -> Exp:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "{":
            return self.block()
        if tok.kind != "ident":
            self.error(f"expected a statement, found {tok.describe()}", tok)
        word = tok.value
        if word == "skip":
            self.advance()
            return SKIP
        if word == "fail":
            self.advance()
            return FAIL
        if word == "assert":
            self.advance()
            return TestOf(self.bexp())
        if word == "if":
            self.advance()
            cond = self.bexp()
            self.expect("then")
            then = self.block()
            if self.at_keyword("else"):
                self.advance()
                orelse = self.block()
            else:
                orelse = SKIP
            return IfThenElse(cond, then, orelse)
        if word == "while":
            self.advance()
            cond = self.bexp()
            self.expect("do")
            return While(cond, self.block())
        self.advance()
        kind = self.ident_kind(tok)
        if kind == "action":
            return Act(word)
        if kind == "program-hole":
            return Hole(word)
        self.error(f"test {word} in program position needs 'assert'", tok)

    def bexp(self) -> BExp:
        left = self.bterm()
        if self.at_keyword("or"):
            self.advance()
            return Or(left, self.bexp())
        return left

    def bterm(self) -> BExp:
        left = self.bfact()
        if self.at_keyword("and"):
            self.advance()
            return And(left, self.bterm())
        return left

    def bfact(self) -> BExp:
        tok = self.peek()
        if self.at_keyword("not") or self.at("!"):
            self.advance()
            return Not(self.bfact())
        if tok.kind == "num":
            self.advance()
            return ONE if tok.value == "1" else ZERO
        if tok.kind == "ident":
            self.advance()
            return self.test_atom(tok)
        if self.at("("):
            self.advance()
            inner = self.bexp()
            self.expect(")")
            return inner
        self.error(f"expected a test, found {tok.describe()}", tok)

    # ===== ALGEBRAIC KAT =====

    def kexpr(self) -> Exp:
        left = self.kterm()
        if self.at("+"):
            self.advance()
            right = self.kexpr()
            if isinstance(left, TestOf) and isinstance(right, TestOf):
                return TestOf(Or(left.test, right.test))
            return Plus(left, right)
        return left

    def kterm(self) -> Exp:
        left = self.kfactor()
        if self.at(";"):
            self.advance()
            right = self.kterm()
            if isinstance(left, TestOf) and isinstance(right, TestOf):
                return TestOf(And(left.test, right.test))
            return Seq(left, right)
        return left

    def kfactor(self) -> Exp:
        base = self.kprimary()
        while self.at("*"):
            self.advance()
            base = Star(base)
        return base

    def kprimary(self) -> Exp:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return SKIP if tok.value == "1" else FAIL
        if self.at("!"):
            self.advance()
            operand = self.kprimary()
            if not isinstance(operand, TestOf):
                self.error("'!' applies to tests only", tok)
            return TestOf(Not(operand.test))
        if self.at("("):
            self.advance()
            inner = self.kexpr()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            self.advance()
            return self.program_atom(tok)
        self.error(f"expected an expression, found {tok.describe()}", tok)

    def program_atom(self, tok: Token) -> Exp:
        kind = self.ident_kind(tok)
        if kind == "action":
            return Act(tok.value)
        if kind == "program-hole":
            return Hole(tok.value)
        if kind == "test":
            return TestOf(Test(tok.value))
        return TestOf(TestHole(tok.value))

    # ===== ALGEBRAIC GKAT =====

    def gexpr(self) -> Exp:
        left = self.gseq()
        if self.at("+") and self.peek(1).value == "[":
            self.advance()
            self.advance()
            cond = self.abexp()
            self.expect("]")
            return IfThenElse(cond, left, self.gexpr())
        return left

    def gseq(self) -> Exp:
        left = self.gpost()
        if self.at(";"):
            self.advance()
            return Seq(left, self.gseq())
        return left

    def gpost(self) -> Exp:
        base = self.gprim()
        while self.at("^"):
            self.advance()
            self.expect("(")
            cond = self.abexp()
            self.expect(")")
            base = While(cond, base)
        return base

    def gprim(self) -> Exp:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return SKIP if tok.value == "1" else FAIL
        if self.at("!"):
            self.advance()
            return TestOf(Not(self.abfact()))
        if self.at("["):
            self.advance()
            cond = self.abexp()
            self.expect("]")
            return TestOf(cond)
        if self.at("("):
            self.advance()
            inner = self.gexpr()
            self.expect(")")
            return inner
        if tok.kind == "ident":
            self.advance()
            return self.program_atom(tok)
        self.error(f"expected an expression, found {tok.describe()}", tok)

    def abexp(self) -> BExp:
        left = self.abterm()
        if self.at("+"):
            self.advance()
            return Or(left, self.abexp())
        return left

    def abterm(self) -> BExp:
        left = self.abfact()
        if self.at(";"):
            self.advance()
            return And(left, self.abterm())
        return left

    def abfact(self) -> BExp:
        tok = self.peek()
        if self.at("!"):
            self.advance()
            return Not(self.abfact())
        if tok.kind == "num":
            self.advance()
            return ONE if tok.value == "1" else ZERO
        if tok.kind == "ident":
            self.advance()
            return self.test_atom(tok)
        if self.at("("):
            self.advance()
            inner = self.abexp()
            self.expect(")")
            return inner
        self.error(f"expected a test, found {tok.describe()}", tok)


def _run(rule: str, source: str, universe: Universe,
         holes: Optional[Mapping[str, str]] = None, first_line: int = 1):
    parser = _Parser(tokenize(source, first_line), universe, holes)
    result = getattr(parser, rule)()
    parser.finish()
    return result


# ===== PUBLIC API =====

def parse_gkat_program(source: str, universe: Universe,
                       holes: Optional[Mapping[str, str]] = None) -> Exp:
    """Imperative GKAT program text (no header) against a known universe."""
    return _run("prog", source, universe, holes)


def parse_kat_expr(source: str, universe: Universe,
                   holes: Optional[Mapping[str, str]] = None) -> Exp:
    """Algebraic KAT expression text (no header)."""
    return _run("kexpr", source, universe, holes)


def parse_gkat_algebraic_expr(source: str, universe: Universe,
                              holes: Optional[Mapping[str, str]] = None) -> Exp:
    """Algebraic GKAT expression text (no header)."""
    return _run("gexpr", source, universe, holes)


def parse_bexp(source: str, universe: Universe, algebraic: bool = False,
               holes: Optional[Mapping[str, str]] = None) -> BExp:
    """A standalone test, in imperative (or/and/not) or algebraic (+ ; !) notation."""
    return _run("abexp" if algebraic else "bexp", source, universe, holes)


def parse_gkat(text: str) -> Tuple[Universe, Exp]:
    """
    Parse a .gkat file: header, then an imperative program.

    Returns:
        (declared universe, desugared GKAT expression)

    Raises:
        GkatSyntaxError: with line/column
        ScopeError: undeclared symbol, or symbol declared as both test and action
    """
    universe, body = parse_header(text)
    return universe, _run("prog", body, universe)


def parse_kat(text: str) -> Tuple[Universe, Exp]:
    """Parse a .kat file: header, then an algebraic KAT expression."""
    universe, body = parse_header(text)
    return universe, _run("kexpr", body, universe)


def parse_gkat_algebraic(text: str) -> Tuple[Universe, Exp]:
    """Parse a header followed by an algebraic GKAT expression."""
    universe, body = parse_header(text)
    return universe, _run("gexpr", body, universe)
