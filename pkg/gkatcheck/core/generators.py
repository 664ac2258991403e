# core/generators.py
"""
Seeded random terms for law sampling, the differential corpus and the
`stats` command. Depth counts program nodes; a leaf has depth 1.
"""

import random
from typing import List

from .syntax import (
    ONE, ZERO, Act, And, BExp, Exp, IfThenElse, Not, Or, Plus, Seq, Star, Test,
    TestOf, Universe, While,
)


def random_bexp(universe: Universe, rng: random.Random, depth: int = 2) -> BExp:
    """Test over the universe's primitive tests; 0 and 1 appear as leaves too."""
    if depth <= 1 or rng.random() < 0.4:
        if universe.tests and rng.random() < 0.8:
            return Test(rng.choice(universe.tests))
        return rng.choice((ZERO, ONE))
    op = rng.randrange(3)
    if op == 0:
        return Not(random_bexp(universe, rng, depth - 1))
    left = random_bexp(universe, rng, depth - 1)
    right = random_bexp(universe, rng, depth - 1)
    return Or(left, right) if op == 1 else And(left, right)


def _leaf(universe: Universe, rng: random.Random) -> Exp:
    if universe.actions and rng.random() < 0.65:
        return Act(rng.choice(universe.actions))
    return TestOf(random_bexp(universe, rng, 2))


def random_gkat(universe: Universe, rng: random.Random, depth: int = 4) -> Exp:
    """GKAT expression built from Seq, IfThenElse and While."""
    if depth <= 1 or rng.random() < 0.25:
        return _leaf(universe, rng)
    op = rng.randrange(3)
    if op == 0:
        return Seq(random_gkat(universe, rng, depth - 1), random_gkat(universe, rng, depth - 1))
    if op == 1:
        return IfThenElse(random_bexp(universe, rng),
                          random_gkat(universe, rng, depth - 1),
                          random_gkat(universe, rng, depth - 1))
    return While(random_bexp(universe, rng), random_gkat(universe, rng, depth - 1))


def random_kat(universe: Universe, rng: random.Random, depth: int = 4) -> Exp:
    """KAT expression built from Plus, Seq and Star."""
    if depth <= 1 or rng.random() < 0.25:
        return _leaf(universe, rng)
    op = rng.randrange(3)
    if op == 0:
        return Plus(random_kat(universe, rng, depth - 1), random_kat(universe, rng, depth - 1))
    if op == 1:
        return Seq(random_kat(universe, rng, depth - 1), random_kat(universe, rng, depth - 1))
    return Star(random_kat(universe, rng, depth - 1))


def random_corpus(universe: Universe, seed: int, count: int, depth: int = 4) -> List[Exp]:
    rng = random.Random(seed)
    return [random_gkat(universe, rng, depth) for _ in range(count)]


def loop_tower(k: int, test: str = "b", action: str = "p") -> Exp:
    """(...(p^(b))...)^(b) with k nested loops."""
    e: Exp = Act(action)
    for _ in range(k):
        e = While(Test(test), e)
    return e
