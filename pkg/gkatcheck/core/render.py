# core/render.py
"""
Pretty-printing back to the parser's surface syntaxes.

Parenthesization follows the parsers: binary operators associate to the
right, so a left operand of equal precedence is bracketed.
"""

from typing import Union

from .syntax import (
    FAIL, SKIP, Act, And, BExp, BEXP_TYPES, Exp, Hole, IfThenElse, Not, One, Or,
    Plus, Seq, Star, Test, TestHole, TestOf, Universe, While, Zero, is_gkat,
)

# Precedence levels (higher binds tighter)
_OR, _AND, _NOT = 1, 2, 3
_PLUS, _SEQ, _STAR, _ATOM = 1, 2, 3, 4


# ===== TESTS =====

def _bexp_prec(b: BExp) -> int:
    if isinstance(b, Or):
        return _OR
    if isinstance(b, And):
        return _AND
    return _NOT


def _bexp(b: BExp, algebraic: bool) -> str:
    or_op, and_op = (" + ", ";") if algebraic else (" or ", " and ")
    if isinstance(b, Zero):
        return "0"
    if isinstance(b, One):
        return "1"
    if isinstance(b, (Test, TestHole)):
        return b.name
    if isinstance(b, Not):
        prefix = "!" if algebraic else "not "
        return prefix + _bexp_wrap(b.operand, _NOT, algebraic)
    if isinstance(b, Or):
        return (_bexp_wrap(b.left, _OR + 1, algebraic) + or_op
                + _bexp_wrap(b.right, _OR, algebraic))
    if isinstance(b, And):
        return (_bexp_wrap(b.left, _AND + 1, algebraic) + and_op
                + _bexp_wrap(b.right, _AND, algebraic))
    raise TypeError(f"not a test: {b!r}")


def _bexp_wrap(b: BExp, required: int, algebraic: bool) -> str:
    text = _bexp(b, algebraic)
    return f"({text})" if _bexp_prec(b) < required else text


def render_bexp(b: BExp, algebraic: bool = False) -> str:
    """Test in imperative (`b or not c`) or algebraic (`b + !c`) notation."""
    return _bexp(b, algebraic)


# ===== IMPERATIVE GKAT =====

def _stmt(e: Exp) -> str:
    """A statement; sequences are braced so they stay one block."""
    if isinstance(e, Seq):
        return "{ " + _prog(e) + " }"
    return _simple(e)


def _simple(e: Exp) -> str:
    if e == SKIP:
        return "skip"
    if e == FAIL:
        return "fail"
    if isinstance(e, TestOf):
        return "assert " + render_bexp(e.test)
    if isinstance(e, (Act, Hole)):
        return e.name
    if isinstance(e, IfThenElse):
        return (f"if {render_bexp(e.cond)} then {_stmt(e.then)} "
                f"else {_stmt(e.orelse)}")
    if isinstance(e, While):
        return f"while {render_bexp(e.cond)} do {_stmt(e.body)}"
    raise TypeError(f"{type(e).__name__} has no imperative form")


def _prog(e: Exp) -> str:
    if isinstance(e, Seq):
        return _stmt(e.first) + "; " + _prog(e.second)
    return _simple(e)


def render_gkat(e: Exp) -> str:
    """GKAT expression as an imperative program."""
    return _prog(e)


# ===== ALGEBRAIC =====

def _exp_prec(e: Exp) -> int:
    if isinstance(e, (Plus, IfThenElse)):
        return _PLUS
    if isinstance(e, Seq):
        return _SEQ
    if isinstance(e, (Star, While)):
        return _STAR
    if isinstance(e, TestOf) and isinstance(e.test, Or):
        return _PLUS
    if isinstance(e, TestOf) and isinstance(e.test, And):
        return _SEQ
    return _ATOM


def _alg(e: Exp, gkat: bool) -> str:
    if isinstance(e, TestOf):
        if gkat and isinstance(e.test, (Or, And)):
            return "[" + render_bexp(e.test, algebraic=True) + "]"
        return render_bexp(e.test, algebraic=True)
    if isinstance(e, (Act, Hole)):
        return e.name
    if isinstance(e, Plus):
        return _alg_wrap(e.left, _PLUS + 1, gkat) + " + " + _alg_wrap(e.right, _PLUS, gkat)
    if isinstance(e, IfThenElse):
        cond = render_bexp(e.cond, algebraic=True)
        return (_alg_wrap(e.then, _PLUS + 1, gkat) + f" +[{cond}] "
                + _alg_wrap(e.orelse, _PLUS, gkat))
    if isinstance(e, Seq):
        return _alg_wrap(e.first, _SEQ + 1, gkat) + ";" + _alg_wrap(e.second, _SEQ, gkat)
    if isinstance(e, Star):
        return _alg_wrap(e.body, _STAR, gkat) + "*"
    if isinstance(e, While):
        cond = render_bexp(e.cond, algebraic=True)
        return _alg_wrap(e.body, _STAR, gkat) + f"^({cond})"
    raise TypeError(f"not an expression: {e!r}")


def _alg_wrap(e: Exp, required: int, gkat: bool) -> str:
    text = _alg(e, gkat)
    prec = _ATOM if gkat and isinstance(e, TestOf) else _exp_prec(e)
    return f"({text})" if prec < required else text


def render_kat(e: Exp) -> str:
    """KAT expression in the algebraic notation (`+ ; * ! 0 1`)."""
    return _alg(e, gkat=False)


def render_algebraic(e: Exp) -> str:
    """
    Any expression in algebraic notation; GKAT nodes print as `e +[b] f`
    and `e^(b)`, compound tests in brackets.
    """
    return _alg(e, gkat=is_gkat(e))


def render(e: Union[Exp, BExp]) -> str:
    """
    Surface text for a test, GKAT or KAT expression.

    Tests use the imperative notation, expressions without Plus/Star the
    imperative program syntax, anything else the algebraic KAT notation.
    """
    if isinstance(e, BEXP_TYPES):
        return render_bexp(e)
    if is_gkat(e):
        return render_gkat(e)
    return render_kat(e)


def render_file(universe: Universe, e: Exp) -> str:
    """Header plus program, the format parse_gkat/parse_kat read."""
    header = (f"tests: {' '.join(universe.tests)}".rstrip() + "\n"
              + f"actions: {' '.join(universe.actions)}".rstrip() + "\n")
    return header + render(e) + "\n"
