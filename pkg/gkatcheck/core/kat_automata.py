# core/kat_automata.py
"""
KAT expressions to deterministic automata on guarded strings.

Partial derivatives over the doubled alphabet At x Sigma give a finite
nondeterministic automaton whose states are expressions; subset
construction then yields a DetAutomaton. Empty successor sets are left out
of the cell, which is how rejection is represented.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple

from .atoms import Atom, AtomSet, all_atoms, check_atom_cap, full_set, satisfying_mask
from .automata import DetAutomaton, Outcome
from .config import Limits, default_limits
from .errors import ResourceLimitExceeded
from .render import render_algebraic
from .syntax import SKIP, Act, Exp, Hole, Plus, Seq, Star, TestOf, Universe, embed, seq

logger = logging.getLogger(__name__)

# (atom mask, successor) pairs: the derivative for action p at atom a is
# every successor whose mask contains a
LinearForm = FrozenSet[Tuple[AtomSet, Exp]]


# ===== DERIVATIVES =====

@lru_cache(maxsize=65536)
def output(e: Exp, universe: Universe) -> AtomSet:
    """Atoms accepted by e without performing an action."""
    if isinstance(e, TestOf):
        return satisfying_mask(e.test, universe)
    if isinstance(e, Act):
        return 0
    if isinstance(e, Plus):
        return output(e.left, universe) | output(e.right, universe)
    if isinstance(e, Seq):
        return output(e.first, universe) & output(e.second, universe)
    if isinstance(e, Star):
        return full_set(universe)
    if isinstance(e, Hole):
        raise TypeError(f"unfilled program hole {e.name}")
    raise TypeError(f"{type(e).__name__} is not a KAT constructor; embed it first")


@lru_cache(maxsize=65536)
def linear_form(e: Exp, action: str, universe: Universe) -> LinearForm:
    """Partial derivatives of e by `action`, each guarded by the atoms it is taken at."""
    if isinstance(e, TestOf):
        return frozenset()
    if isinstance(e, Act):
        return frozenset({(full_set(universe), SKIP)}) if e.name == action else frozenset()
    if isinstance(e, Plus):
        return linear_form(e.left, action, universe) | linear_form(e.right, action, universe)
    if isinstance(e, Seq):
        parts = {(mask, seq(d, e.second)) for mask, d in linear_form(e.first, action, universe)}
        through = output(e.first, universe)
        if through:
            for mask, d in linear_form(e.second, action, universe):
                if mask & through:
                    parts.add((mask & through, d))
        return frozenset(parts)
    if isinstance(e, Star):
        return frozenset((mask, seq(d, e)) for mask, d in linear_form(e.body, action, universe))
    if isinstance(e, Hole):
        raise TypeError(f"unfilled program hole {e.name}")
    raise TypeError(f"{type(e).__name__} is not a KAT constructor; embed it first")


def partial_derivatives(e: Exp, atom: Atom, action: str, universe: Universe) -> FrozenSet[Exp]:
    return frozenset(d for mask, d in linear_form(e, action, universe) if (mask >> atom) & 1)


# ===== NFA =====

@dataclass(frozen=True)
class KatNfa:
    """
    states[i] is a partial-derivative term; output[i] its accepted atoms;
    moves[i][action] lists (atom mask, successor id).
    """
    universe: Universe
    states: Tuple[Exp, ...]
    output: Tuple[AtomSet, ...]
    moves: Tuple[Dict[str, Tuple[Tuple[AtomSet, int], ...]], ...]

    @property
    def n_states(self) -> int:
        return len(self.states)

    def step(self, state: int, atom: Atom, action: str) -> FrozenSet[int]:
        return frozenset(t for mask, t in self.moves[state].get(action, ()) if (mask >> atom) & 1)


def build_kat_nfa(e: Exp, universe: Universe, limits: Optional[Limits] = None) -> KatNfa:
    """
    Closure of e under partial derivatives. GKAT input is embedded first.

    Raises:
        AtomBlowup: too many tests
    """
    check_atom_cap(universe, limits)
    e = embed(e)
    states: List[Exp] = [e]
    index: Dict[Exp, int] = {e: 0}
    moves: List[Dict[str, Tuple[Tuple[AtomSet, int], ...]]] = []
    queue = deque([0])
    while queue:
        s = queue.popleft()
        by_action = {}
        for action in universe.actions:
            pairs = []
            # sorted so state numbering does not depend on hash order
            form = sorted(linear_form(states[s], action, universe),
                          key=lambda md: (md[0], render_algebraic(md[1])))
            for mask, d in form:
                if d not in index:
                    index[d] = len(states)
                    states.append(d)
                    queue.append(index[d])
                pairs.append((mask, index[d]))
            if pairs:
                by_action[action] = tuple(pairs)
        moves.append(by_action)
    out = tuple(output(x, universe) for x in states)
    logger.debug("build_kat_nfa: %d partial-derivative states", len(states))
    return KatNfa(universe, tuple(states), out, tuple(moves))


# ===== DETERMINIZATION =====

def determinize(nfa: KatNfa, limits: Optional[Limits] = None,
                with_labels: bool = True) -> DetAutomaton:
    """
    Subset construction from {0}. A cell accepts if any member accepts and
    steps with p to the union of the members' p-successors when non-empty.

    Raises:
        ResourceLimitExceeded: more than limits.max_dfa_states subsets
    """
    limits = limits or default_limits()
    universe = nfa.universe
    atoms = all_atoms(universe, limits)

    start = frozenset({0})
    subsets: List[FrozenSet[int]] = [start]
    index: Dict[FrozenSet[int], int] = {start: 0}
    delta = []
    queue = deque([0])
    while queue:
        current = subsets[queue.popleft()]
        accept_mask = 0
        for s in current:
            accept_mask |= nfa.output[s]
        row = []
        for atom in atoms:
            steps = []
            for action in universe.actions:
                succ = frozenset().union(*(nfa.step(s, atom, action) for s in current))
                if not succ:
                    continue
                target = index.get(succ)
                if target is None:
                    if len(subsets) >= limits.max_dfa_states:
                        raise ResourceLimitExceeded("determinized automaton state count", limits.max_dfa_states)
                    target = len(subsets)
                    index[succ] = target
                    subsets.append(succ)
                    queue.append(target)
                steps.append((action, target))
            row.append(Outcome(bool((accept_mask >> atom) & 1), tuple(steps)))
        delta.append(tuple(row))

    labels = None
    if with_labels:
        labels = tuple("{" + ", ".join(render_algebraic(nfa.states[s]) for s in sorted(subset)) + "}"
                       for subset in subsets)
    logger.debug("determinize: %d subset states from %d NFA states", len(subsets), nfa.n_states)
    return DetAutomaton(universe, tuple(delta), 0, labels)


def build_kat(e: Exp, universe: Universe, limits: Optional[Limits] = None,
              with_labels: bool = True) -> DetAutomaton:
    """Deterministic automaton accepting exactly the guarded language of e."""
    limits = limits or default_limits()
    return determinize(build_kat_nfa(e, universe, limits), limits, with_labels)
