# tests/strategies.py
"""Hypothesis strategies for tests, programs and interpretations (|T|, |Sigma| <= 3, depth <= 4)."""

import hypothesis.strategies as st

from gkatcheck.core.semantics import Interpretation
from gkatcheck.core.syntax import (
    ONE, ZERO, Act, And, IfThenElse, Not, Or, Plus, Seq, Star, Test, TestOf, Universe, While,
)

UNIVERSE = Universe(("t", "u"), ("p", "q"))
SMALL_UNIVERSE = Universe(("t",), ("p",))


def bexps(universe: Universe = UNIVERSE, max_leaves: int = 4):
    leaves = st.sampled_from([Test(t) for t in universe.tests] + [ZERO, ONE])
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(Not, inner),
            st.builds(Or, inner, inner),
            st.builds(And, inner, inner),
        ),
        max_leaves=max_leaves,
    )


def _program_leaves(universe: Universe):
    return st.one_of(
        st.sampled_from([Act(p) for p in universe.actions]),
        st.builds(TestOf, bexps(universe, 2)),
    )


def gkat_exps(universe: Universe = UNIVERSE, max_leaves: int = 6):
    conds = bexps(universe, 2)
    return st.recursive(
        _program_leaves(universe),
        lambda inner: st.one_of(
            st.builds(Seq, inner, inner),
            st.builds(IfThenElse, conds, inner, inner),
            st.builds(While, conds, inner),
        ),
        max_leaves=max_leaves,
    )


def kat_exps(universe: Universe = UNIVERSE, max_leaves: int = 6):
    return st.recursive(
        _program_leaves(universe),
        lambda inner: st.one_of(
            st.builds(Plus, inner, inner),
            st.builds(Seq, inner, inner),
            st.builds(Star, inner),
        ),
        max_leaves=max_leaves,
    )


@st.composite
def interpretations(draw, universe: Universe = UNIVERSE, functional: bool = True, max_states: int = 4):
    n = draw(st.integers(min_value=1, max_value=max_states))
    states = tuple(f"s{i}" for i in range(n))
    tau = {t: frozenset(draw(st.sets(st.sampled_from(states)))) for t in universe.tests}
    sigma = {}
    for p in universe.actions:
        if functional:
            mapping = draw(st.dictionaries(st.sampled_from(states), st.sampled_from(states)))
            sigma[p] = frozenset(mapping.items())
        else:
            sigma[p] = frozenset(draw(st.sets(st.tuples(st.sampled_from(states),
                                                        st.sampled_from(states)))))
    return Interpretation(states, sigma, tau, functional)
