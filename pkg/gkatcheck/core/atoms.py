# core/atoms.py
"""
Finite atom universe At = 2^T.

An atom is an int whose bit i is the truth of the i-th test of the universe.
An AtomSet is an int used as a bitset over At: bit a is set iff atom a is a
member. Iteration is always in numeric atom order.
"""

import logging
from functools import lru_cache
from typing import Iterator, Optional

from .config import Limits, default_limits
from .errors import AtomBlowup, GkatSyntaxError, ScopeError
from .syntax import And, BExp, Not, One, Or, Test, TestHole, Universe, Zero

logger = logging.getLogger(__name__)

Atom = int
AtomSet = int


def check_atom_cap(universe: Universe, limits: Optional[Limits] = None) -> None:
    """
    Raises:
        AtomBlowup: the universe has more tests than the configured cap
    """
    limits = limits or default_limits()
    if universe.n_tests > limits.max_tests:
        raise AtomBlowup(universe.n_tests, limits.max_tests)


def all_atoms(universe: Universe, limits: Optional[Limits] = None) -> range:
    """All atoms of the universe in numeric order."""
    check_atom_cap(universe, limits)
    return range(universe.atom_count)


def full_set(universe: Universe) -> AtomSet:
    return (1 << universe.atom_count) - 1


def members(atom_set: AtomSet) -> Iterator[Atom]:
    """Atoms of a set in increasing numeric order."""
    atom = 0
    while atom_set:
        if atom_set & 1:
            yield atom
        atom_set >>= 1
        atom += 1


def contains(atom_set: AtomSet, atom: Atom) -> bool:
    return bool((atom_set >> atom) & 1)


# ===== EVALUATION =====

def eval_bexp(b: BExp, atom: Atom, universe: Universe) -> bool:
    """Truth of b at the atom: + is or, ; is and, ! is not."""
    if isinstance(b, One):
        return True
    if isinstance(b, Zero):
        return False
    if isinstance(b, Test):
        try:
            index = universe.test_index[b.name]
        except KeyError:
            raise ScopeError(f"undeclared test symbol {b.name}") from None
        return bool((atom >> index) & 1)
    if isinstance(b, Or):
        return eval_bexp(b.left, atom, universe) or eval_bexp(b.right, atom, universe)
    if isinstance(b, And):
        return eval_bexp(b.left, atom, universe) and eval_bexp(b.right, atom, universe)
    if isinstance(b, Not):
        return not eval_bexp(b.operand, atom, universe)
    if isinstance(b, TestHole):
        raise TypeError(f"unfilled test hole {b.name}")
    raise TypeError(f"not a test: {b!r}")


@lru_cache(maxsize=None)
def _test_mask(index: int, n_tests: int) -> AtomSet:
    """Bitset of atoms in which test number `index` holds."""
    # 2^index zeros then 2^index ones, repeated
    half = 1 << index
    block = ((1 << half) - 1) << half
    mask = 0
    for start in range(0, 1 << n_tests, 2 * half):
        mask |= block << start
    return mask


@lru_cache(maxsize=65536)
def satisfying_mask(b: BExp, universe: Universe) -> AtomSet:
    """Atoms satisfying b, without the atom cap check; automaton builders check the
    cap once on entry and call this per cell."""
    if isinstance(b, One):
        return full_set(universe)
    if isinstance(b, Zero):
        return 0
    if isinstance(b, Test):
        if not universe.is_test(b.name):
            raise ScopeError(f"undeclared test symbol {b.name}")
        return _test_mask(universe.test_index[b.name], universe.n_tests)
    if isinstance(b, Or):
        return satisfying_mask(b.left, universe) | satisfying_mask(b.right, universe)
    if isinstance(b, And):
        return satisfying_mask(b.left, universe) & satisfying_mask(b.right, universe)
    if isinstance(b, Not):
        return full_set(universe) ^ satisfying_mask(b.operand, universe)
    if isinstance(b, TestHole):
        raise TypeError(f"unfilled test hole {b.name}")
    raise TypeError(f"not a test: {b!r}")


def satisfying(b: BExp, universe: Universe, limits: Optional[Limits] = None) -> AtomSet:
    """
    Set of atoms satisfying b.

    Raises:
        AtomBlowup: 2^|T| exceeds the configured cap
    """
    check_atom_cap(universe, limits)
    return satisfying_mask(b, universe)


def is_zero(b: BExp, universe: Universe, limits: Optional[Limits] = None) -> bool:
    """True iff no atom satisfies b."""
    return satisfying(b, universe, limits) == 0


# ===== TEXT FORMAT =====

def format_atom(atom: Atom, universe: Universe) -> str:
    """`{t1,t3}` listing true tests in universe order; `{}` for all-false."""
    names = [name for i, name in enumerate(universe.tests) if (atom >> i) & 1]
    return "{" + ",".join(names) + "}"


def parse_atom(text: str, universe: Universe) -> Atom:
    """
    Inverse of format_atom. Whitespace inside the braces is ignored.

    Raises:
        GkatSyntaxError: not of the form {a,b}
        ScopeError: unknown test name
    """
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise GkatSyntaxError(f"atom must be written as {{t1,t2}}, got {text!r}")
    inner = text[1:-1].strip()
    atom = 0
    if not inner:
        return atom
    for name in inner.split(","):
        name = name.strip()
        if not universe.is_test(name):
            raise ScopeError(f"undeclared test symbol {name} in atom {text}")
        atom |= 1 << universe.test_index[name]
    return atom

