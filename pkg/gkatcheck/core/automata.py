# -*- coding: utf-8 -*-
# core/automata.py
"""
Deterministic automata on guarded strings.

A state's behaviour on an atom is an Outcome: it may accept the atom, and it
may offer transitions labelled with actions. GKAT automata (built here from
the operational rules) have at most one of the two, with at most one
transition; KAT automata (kat_automata.py) may accept and offer several
distinct actions at once. Anything not offered is rejection, so no explicit
reject sink state exists.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .atoms import Atom, AtomSet, all_atoms, check_atom_cap, contains, satisfying_mask
from .config import Limits, default_limits
from .errors import AutomatonFormatError, ResourceLimitExceeded
from .render import render_algebraic
from .semantics import GuardedString
from .syntax import (
    SKIP, Act, Exp, Hole, IfThenElse, Plus, Seq, Star, TestOf, Universe, While, seq,
)

logger = logging.getLogger(__name__)

StateId = int


# ===== OUTCOMES =====

@dataclass(frozen=True)
class Outcome:
    """
    Behaviour of one (state, atom) cell.

    `steps` holds (action, target) pairs with distinct actions; the target is
    a StateId in an automaton and an expression for a raw derivative.
    """
    accept: bool = False
    steps: Tuple[Tuple[str, Any], ...] = ()

    @classmethod
    def step_to(cls, action: str, target: Any) -> "Outcome":
        return cls(False, ((action, target),))

    @property
    def is_accept(self) -> bool:
        return self.accept and not self.steps

    @property
    def is_reject(self) -> bool:
        return not self.accept and not self.steps

    @property
    def is_step(self) -> bool:
        return not self.accept and len(self.steps) == 1

    @property
    def step(self) -> Optional[Tuple[str, Any]]:
        """The single (action, target) of a GKAT step, else None."""
        return self.steps[0] if self.is_step else None

    @property
    def actions(self) -> Tuple[str, ...]:
        return tuple(action for action, _ in self.steps)

    def target(self, action: str) -> Optional[Any]:
        for a, t in self.steps:
            if a == action:
                return t
        return None

    def describe(self) -> str:
        """`accepts`, `rejects`, `steps with p`, or a combination for KAT cells."""
        parts = []
        if self.accept:
            parts.append("accepts")
        if self.steps:
            parts.append("steps with " + "/".join(self.actions))
        return " and ".join(parts) if parts else "rejects"


ACCEPT = Outcome(True)
REJECT = Outcome(False)


# ===== DERIVATIVES =====

def _holds(b, atom: Atom, universe: Universe) -> bool:
    return contains(satisfying_mask(b, universe), atom)


def derivative(e: Exp, atom: Atom, universe: Universe) -> Outcome:
    """
    One step of the GKAT operational semantics at an atom.

    Accept iff the atom satisfies E(e); Step(p, e') for the unique
    transition e --atom|p--> e', successor normalized with `seq`;
    Reject otherwise.
    """
    if isinstance(e, TestOf):
        return ACCEPT if _holds(e.test, atom, universe) else REJECT
    if isinstance(e, Act):
        return Outcome.step_to(e.name, SKIP)
    if isinstance(e, IfThenElse):
        branch = e.then if _holds(e.cond, atom, universe) else e.orelse
        return derivative(branch, atom, universe)
    if isinstance(e, Seq):
        first = derivative(e.first, atom, universe)
        if first.is_step:
            action, rest = first.step
            return Outcome.step_to(action, seq(rest, e.second))
        if first.accept:
            return derivative(e.second, atom, universe)
        return REJECT
    if isinstance(e, While):
        if not _holds(e.cond, atom, universe):
            return ACCEPT
        body = derivative(e.body, atom, universe)
        if body.is_step:
            action, rest = body.step
            return Outcome.step_to(action, seq(rest, e))
        # guard holds but the body finishes without acting: no progress
        return REJECT
    if isinstance(e, (Plus, Star)):
        raise TypeError(f"{type(e).__name__} is not a GKAT constructor; use build_kat")
    if isinstance(e, Hole):
        raise TypeError(f"unfilled program hole {e.name}")
    raise TypeError(f"not an expression: {e!r}")


# ===== AUTOMATON =====

@dataclass(frozen=True)
class DetAutomaton:
    """
    delta[state][atom] is the Outcome of that cell, dense over all atoms.

    `labels` optionally carries per-state expression text (all-None is stored
    as None); `atom_names` maps atoms to display names (fixtures use α / β).
    """
    universe: Universe
    delta: Tuple[Tuple[Outcome, ...], ...]
    initial: StateId = 0
    labels: Optional[Tuple[Optional[str], ...]] = None
    atom_names: Tuple[Tuple[Atom, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", None if all(x is None for x in labels) else labels)
        object.__setattr__(self, "atom_names", tuple(sorted(dict(self.atom_names).items())))
        self._validate()

    def _validate(self) -> None:
        n = len(self.delta)
        if n == 0:
            raise AutomatonFormatError("automaton has no states")
        if not 0 <= self.initial < n:
            raise AutomatonFormatError(f"initial state {self.initial} out of range")
        if self.labels is not None and len(self.labels) != n:
            raise AutomatonFormatError("labels do not match the state count")
        width = self.universe.atom_count
        for s, row in enumerate(self.delta):
            if len(row) != width:
                raise AutomatonFormatError(f"state {s} defines {len(row)} atoms, expected {width}")
            for atom, out in enumerate(row):
                actions = out.actions
                if len(set(actions)) != len(actions):
                    raise AutomatonFormatError(f"state {s} offers an action twice at atom {atom}")
                for action, target in out.steps:
                    if not self.universe.is_action(action):
                        raise AutomatonFormatError(f"state {s} steps with undeclared action {action}")
                    if not (isinstance(target, int) and 0 <= target < n):
                        raise AutomatonFormatError(f"state {s} steps to invalid state {target!r}")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def names(self) -> Dict[Atom, str]:
        return dict(self.atom_names)

    def outcome(self, state: StateId, atom: Atom) -> Outcome:
        return self.delta[state][atom]

    def successors(self, state: StateId) -> Iterable[StateId]:
        for out in self.delta[state]:
            for _, target in out.steps:
                yield target

    @cached_property
    def reachable(self) -> FrozenSet[StateId]:
        return frozenset(reachable_states(self))

    def accepted_atoms(self, state: StateId) -> AtomSet:
        mask = 0
        for atom, out in enumerate(self.delta[state]):
            if out.accept:
                mask |= 1 << atom
        return mask

    def is_gkat_deterministic(self) -> bool:
        """Every cell is exactly one of accept, reject, or a single step."""
        return all(out.is_accept or out.is_reject or out.is_step
                   for row in self.delta for out in row)


def reachable_states(automaton: DetAutomaton, start: Optional[StateId] = None) -> List[StateId]:
    """States reachable from `start` (default: initial) in BFS order."""
    start = automaton.initial if start is None else start
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for t in automaton.successors(s):
            if t not in seen:
                seen.add(t)
                order.append(t)
                queue.append(t)
    return order


def live_states(automaton: DetAutomaton) -> FrozenSet[StateId]:
    """States from which some acceptance is reachable (backward fixpoint)."""
    preds: Dict[StateId, set] = {s: set() for s in range(automaton.n_states)}
    for s in range(automaton.n_states):
        for t in automaton.successors(s):
            preds[t].add(s)
    live = {s for s in range(automaton.n_states) if automaton.accepted_atoms(s)}
    queue = deque(live)
    while queue:
        t = queue.popleft()
        for s in preds[t]:
            if s not in live:
                live.add(s)
                queue.append(s)
    return frozenset(live)


def normalize_live(automaton: DetAutomaton) -> DetAutomaton:
    """
    Drop every transition into a dead state.

    The guarded-string language is unchanged; afterwards bisimilarity and
    language equivalence coincide on the result.
    """
    live = live_states(automaton)
    if len(live) == automaton.n_states:
        return automaton
    delta = []
    for row in automaton.delta:
        new_row = []
        for out in row:
            kept = tuple((a, t) for a, t in out.steps if t in live)
            new_row.append(out if len(kept) == len(out.steps) else Outcome(out.accept, kept))
        delta.append(tuple(new_row))
    logger.debug("normalize_live: %d of %d states live", len(live), automaton.n_states)
    return DetAutomaton(automaton.universe, tuple(delta), automaton.initial,
                        automaton.labels, automaton.atom_names)


def accepts(automaton: DetAutomaton, state: StateId, w: GuardedString) -> bool:
    """Run w from `state`: every step must be offered, the last atom accepted."""
    for atom, action in w.steps():
        target = automaton.delta[state][atom].target(action)
        if target is None:
            return False
        state = target
    return automaton.delta[state][w.last].accept


# ===== CONSTRUCTION =====

def build_gkat(e: Exp, universe: Universe, limits: Optional[Limits] = None,
               with_labels: bool = True) -> DetAutomaton:
    """
    Derivative closure of a GKAT expression: states are the distinct
    normalized expressions reachable by steps, state 0 is e itself.

    Raises:
        AtomBlowup: too many tests
        ResourceLimitExceeded: more than limits.max_gkat_states states
    """
    limits = limits or default_limits()
    check_atom_cap(universe, limits)
    atoms = all_atoms(universe, limits)

    exprs: List[Exp] = [e]
    index: Dict[Exp, StateId] = {e: 0}
    delta: List[Tuple[Outcome, ...]] = []
    queue = deque([0])
    while queue:
        s = queue.popleft()
        row = []
        for atom in atoms:
            out = derivative(exprs[s], atom, universe)
            if out.is_step:
                action, succ = out.step
                target = index.get(succ)
                if target is None:
                    if len(exprs) >= limits.max_gkat_states:
                        raise ResourceLimitExceeded("GKAT automaton state count", limits.max_gkat_states)
                    target = len(exprs)
                    index[succ] = target
                    exprs.append(succ)
                    queue.append(target)
                out = Outcome.step_to(action, target)
            row.append(out)
        # states are discovered in BFS order, so rows line up with ids
        delta.append(tuple(row))

    labels = tuple(render_algebraic(x) for x in exprs) if with_labels else None
    logger.debug("build_gkat: %d states", len(exprs))
    automaton = DetAutomaton(universe, tuple(delta), 0, labels)
    assert automaton.is_gkat_deterministic()
    return automaton


def from_cells(universe: Universe, cells: Mapping[StateId, Mapping[Atom, Outcome]],
               initial: StateId = 0, atom_names: Optional[Mapping[Atom, str]] = None,
               labels: Optional[Iterable[Optional[str]]] = None) -> DetAutomaton:
    """Automaton from sparse per-state maps; atoms left out reject."""
    n = max(cells) + 1 if cells else 1
    delta = tuple(
        tuple(cells.get(s, {}).get(atom, REJECT) for atom in range(universe.atom_count))
        for s in range(n)
    )
    return DetAutomaton(universe, delta, initial,
                        tuple(labels) if labels is not None else None,
                        tuple((atom_names or {}).items()))
