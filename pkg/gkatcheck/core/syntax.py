# -*- coding: utf-8 -*-
# core/syntax.py
"""
Abstract syntax for tests (BExp), KAT programs and GKAT programs.

All nodes are frozen dataclasses: structural equality, hashable, safe to
share between threads. TestOf, Act and Seq are common to both program
languages; Plus/Star are KAT-only, IfThenElse/While are GKAT-only.

Also here: the GKAT -> KAT embedding, the termination condition E, size,
smart constructors used by the automata builders, and template holes for
the law catalogue.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, Tuple, Union

from .errors import ScopeError, UniverseMismatch


# ===== UNIVERSE =====

@dataclass(frozen=True)
class Universe:
    """Ordered primitive tests T and primitive actions Sigma for a session."""
    tests: Tuple[str, ...] = ()
    actions: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tests", tuple(self.tests))
        object.__setattr__(self, "actions", tuple(self.actions))
        for kind, names in (("test", self.tests), ("action", self.actions)):
            if len(set(names)) != len(names):
                dupes = sorted({n for n in names if names.count(n) > 1})
                raise ScopeError(f"duplicate {kind} declaration: {', '.join(dupes)}")
        both = set(self.tests) & set(self.actions)
        if both:
            raise ScopeError(f"symbol declared as both test and action: {', '.join(sorted(both))}")

    @cached_property
    def test_index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.tests)}

    @cached_property
    def action_index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.actions)}

    @property
    def n_tests(self) -> int:
        return len(self.tests)

    @property
    def atom_count(self) -> int:
        return 1 << len(self.tests)

    def is_test(self, name: str) -> bool:
        return name in self.test_index

    def is_action(self, name: str) -> bool:
        return name in self.action_index

    def merge(self, other: "Universe") -> "Universe":
        """
        Merged universe of two headers: self's order first, then other's new symbols.

        Raises:
            ScopeError: a symbol is a test on one side and an action on the other
        """
        clash = (set(self.tests) & set(other.actions)) | (set(self.actions) & set(other.tests))
        if clash:
            raise ScopeError(
                f"incompatible headers, symbol is a test on one side and an action "
                f"on the other: {', '.join(sorted(clash))}"
            )
        tests = self.tests + tuple(t for t in other.tests if t not in self.test_index)
        actions = self.actions + tuple(a for a in other.actions if a not in self.action_index)
        return Universe(tests, actions)

    def require_same(self, other: "Universe") -> None:
        if self != other:
            raise UniverseMismatch(
                f"universes differ: tests {list(self.tests)} / {list(other.tests)}, "
                f"actions {list(self.actions)} / {list(other.actions)}"
            )


# ===== TESTS =====

@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Test:
    name: str


@dataclass(frozen=True)
class Or:
    left: "BExp"
    right: "BExp"


@dataclass(frozen=True)
class And:
    left: "BExp"
    right: "BExp"


@dataclass(frozen=True)
class Not:
    operand: "BExp"


@dataclass(frozen=True)
class TestHole:
    """Test metavariable in a law template."""
    name: str


BExp = Union[Zero, One, Test, Or, And, Not, TestHole]

ZERO = Zero()
ONE = One()


# ===== PROGRAMS =====

@dataclass(frozen=True)
class TestOf:
    test: BExp


@dataclass(frozen=True)
class Act:
    name: str


@dataclass(frozen=True)
class Seq:
    first: "Exp"
    second: "Exp"


@dataclass(frozen=True)
class Plus:
    left: "Exp"
    right: "Exp"


@dataclass(frozen=True)
class Star:
    body: "Exp"


@dataclass(frozen=True)
class IfThenElse:
    cond: BExp
    then: "Exp"
    orelse: "Exp"


@dataclass(frozen=True)
class While:
    cond: BExp
    body: "Exp"


@dataclass(frozen=True)
class Hole:
    """Program metavariable in a law template."""
    name: str


KatExp = Union[TestOf, Act, Plus, Seq, Star]
GkatExp = Union[TestOf, Act, IfThenElse, Seq, While]
Exp = Union[TestOf, Act, Plus, Seq, Star, IfThenElse, While, Hole]

SKIP = TestOf(ONE)
FAIL = TestOf(ZERO)

BEXP_TYPES = (Zero, One, Test, Or, And, Not, TestHole)
EXP_TYPES = (TestOf, Act, Plus, Seq, Star, IfThenElse, While, Hole)


# ===== TRAVERSAL =====

def children(e: Exp) -> Tuple[Exp, ...]:
    """Direct program subterms (tests are not descended into)."""
    if isinstance(e, Seq):
        return (e.first, e.second)
    if isinstance(e, Plus):
        return (e.left, e.right)
    if isinstance(e, IfThenElse):
        return (e.then, e.orelse)
    if isinstance(e, (Star, While)):
        return (e.body,)
    return ()


def subterms(e: Exp) -> Iterator[Exp]:
    """Pre-order walk over program nodes."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def is_gkat(e: Exp) -> bool:
    """True when e uses no KAT-only constructor (Plus, Star)."""
    return not any(isinstance(n, (Plus, Star)) for n in subterms(e))


def is_kat(e: Exp) -> bool:
    """True when e uses no GKAT-only constructor (IfThenElse, While)."""
    return not any(isinstance(n, (IfThenElse, While)) for n in subterms(e))


def bexp_symbols(b: BExp) -> Iterator[str]:
    if isinstance(b, Test):
        yield b.name
    elif isinstance(b, (Or, And)):
        yield from bexp_symbols(b.left)
        yield from bexp_symbols(b.right)
    elif isinstance(b, Not):
        yield from bexp_symbols(b.operand)


def tests_of(e: Exp) -> Iterator[BExp]:
    """All BExps occurring in program e (TestOf leaves and guards)."""
    for node in subterms(e):
        if isinstance(node, TestOf):
            yield node.test
        elif isinstance(node, (IfThenElse, While)):
            yield node.cond


def check_scope(e: Union[Exp, BExp], universe: Universe) -> None:
    """
    Verify every symbol of e is declared in the universe with the right kind.

    Raises:
        ScopeError: undeclared or wrongly kinded symbol
    """
    if isinstance(e, BEXP_TYPES):
        tests = [e]
        actions = []
    else:
        tests = list(tests_of(e))
        actions = [n.name for n in subterms(e) if isinstance(n, Act)]
    for b in tests:
        for name in bexp_symbols(b):
            if not universe.is_test(name):
                raise ScopeError(f"undeclared test symbol {name}")
    for name in actions:
        if not universe.is_action(name):
            raise ScopeError(f"undeclared action symbol {name}")


# ===== SMART CONSTRUCTORS =====

def seq(first: Exp, second: Exp) -> Exp:
    """
    Normalizing sequential composition.

    1;e -> e, 0;e -> 0, (e;f);g -> e;(f;g). e;0 is kept: bisimilarity
    tells p;0 apart from 0.
    """
    if first == SKIP:
        return second
    if first == FAIL:
        return FAIL
    if isinstance(first, Seq):
        return seq(first.first, seq(first.second, second))
    return Seq(first, second)


def fold_tests(e: Exp) -> Exp:
    """
    Canonical KAT form: a Plus or Seq of two tests becomes one test.

    This is the shape the algebraic parser produces, so
    parse(render(e)) == fold_tests(e) for every KAT expression.
    """
    if isinstance(e, Plus):
        left, right = fold_tests(e.left), fold_tests(e.right)
        if isinstance(left, TestOf) and isinstance(right, TestOf):
            return TestOf(Or(left.test, right.test))
        return Plus(left, right)
    if isinstance(e, Seq):
        first, second = fold_tests(e.first), fold_tests(e.second)
        if isinstance(first, TestOf) and isinstance(second, TestOf):
            return TestOf(And(first.test, second.test))
        return Seq(first, second)
    if isinstance(e, Star):
        return Star(fold_tests(e.body))
    if isinstance(e, IfThenElse):
        return IfThenElse(e.cond, fold_tests(e.then), fold_tests(e.orelse))
    if isinstance(e, While):
        return While(e.cond, fold_tests(e.body))
    return e


# ===== EMBEDDING, E, SIZE =====

def embed(e: Exp) -> Exp:
    """
    GKAT -> KAT: e +_b f becomes b;e + !b;f and e^(b) becomes (b;e)*;!b.

    Tests, actions and sequencing map to themselves; KAT nodes pass through,
    so embed is the identity on KAT expressions.
    """
    if isinstance(e, IfThenElse):
        return Plus(Seq(TestOf(e.cond), embed(e.then)),
                    Seq(TestOf(Not(e.cond)), embed(e.orelse)))
    if isinstance(e, While):
        return Seq(Star(Seq(TestOf(e.cond), embed(e.body))), TestOf(Not(e.cond)))
    if isinstance(e, Seq):
        return Seq(embed(e.first), embed(e.second))
    if isinstance(e, Plus):
        return Plus(embed(e.left), embed(e.right))
    if isinstance(e, Star):
        return Star(embed(e.body))
    return e


def termination_condition(e: Exp) -> BExp:
    """
    E(e): the atoms at which e may finish without performing an action.

    E(b) = b, E(p) = 0, E(e +_b f) = b;E(e) + !b;E(f), E(e;f) = E(e);E(f),
    E(e^(b)) = !b. No simplification is applied.
    """
    if isinstance(e, TestOf):
        return e.test
    if isinstance(e, Act):
        return ZERO
    if isinstance(e, IfThenElse):
        return Or(And(e.cond, termination_condition(e.then)),
                  And(Not(e.cond), termination_condition(e.orelse)))
    if isinstance(e, Seq):
        return And(termination_condition(e.first), termination_condition(e.second))
    if isinstance(e, While):
        return Not(e.cond)
    raise TypeError(f"termination condition is defined on GKAT expressions, got {type(e).__name__}")


def size(e: Exp) -> int:
    """Number of program nodes; a TestOf leaf counts 1 whatever its test."""
    return sum(1 for _ in subterms(e))


def depth(e: Exp) -> int:
    """Height of the program tree (a leaf has depth 1)."""
    kids = children(e)
    return 1 + (max(depth(k) for k in kids) if kids else 0)
