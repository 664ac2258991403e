# -*- coding: utf-8 -*-
# core/equivalence.py
"""
Equivalence and inclusion of automata on guarded strings.

Bisimilarity is decided Hopcroft-Karp style: related state pairs are merged
in a union-find structure and a FIFO worklist visits each merged pair once.
Language equivalence is bisimilarity after dropping transitions into dead
states. When a check fails, a plain product BFS recomputes the shortest,
lexicographically least counterexample so output is stable.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

from .atoms import Atom, format_atom
from .automata import DetAutomaton, Outcome, StateId, build_gkat, normalize_live
from .config import Limits, default_limits
from .errors import UsageError, VerdictError
from .kat_automata import build_kat
from .schemas import DivergenceModel, StatsModel, VerdictModel, WitnessModel
from .semantics import GuardedString
from .syntax import Exp, Universe, is_gkat
from .union_find import UnionFind

logger = logging.getLogger(__name__)

LEFT, RIGHT = "left", "right"


class Mode(str, Enum):
    BISIM = "bisim"
    LANG = "lang"
    INCL = "incl"


class Pipeline(str, Enum):
    AUTO = "auto"
    GKAT = "gkat"
    KAT = "kat"


# ===== VERDICTS =====

@dataclass(frozen=True)
class Divergence:
    """
    Where the two sides part ways.

    kind is acceptMismatch (same transitions, acceptance differs),
    stepVsStop (one side offers no transition; `stopped` names it) or
    actionMismatch (both step, with different actions).
    """
    kind: str
    atom: Atom
    left: Outcome
    right: Outcome
    stopped: Optional[str] = None


@dataclass(frozen=True)
class Witness:
    trace: Tuple[Tuple[Atom, str], ...]
    divergence: Divergence
    # separating guarded string (language modes only) and the side containing it
    string: Optional[GuardedString] = None
    contained_in: Optional[str] = None

    def prefix(self) -> GuardedString:
        """The trace followed by the divergence atom."""
        atoms = tuple(a for a, _ in self.trace) + (self.divergence.atom,)
        return GuardedString(atoms, tuple(p for _, p in self.trace))


@dataclass
class CheckStats:
    left_states: int = 0
    right_states: int = 0
    pair_explorations: int = 0
    unions: int = 0


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    mode: Mode
    universe: Universe
    witness: Optional[Witness] = None
    stats: CheckStats = field(default_factory=CheckStats, compare=False)
    atom_names: Tuple[Tuple[Atom, str], ...] = ()

    def __bool__(self) -> bool:
        return self.equivalent


# ===== CELL RELATIONS =====

def _bisim_ok(o1: Outcome, o2: Outcome) -> bool:
    return o1.accept == o2.accept and set(o1.actions) == set(o2.actions)


def _incl_ok(o1: Outcome, o2: Outcome) -> bool:
    return (not o1.accept or o2.accept) and set(o1.actions) <= set(o2.actions)


def _classify(atom: Atom, o1: Outcome, o2: Outcome, mode: Mode) -> Divergence:
    if mode is Mode.INCL:
        actions_ok = set(o1.actions) <= set(o2.actions)
    else:
        actions_ok = set(o1.actions) == set(o2.actions)
    if actions_ok:
        return Divergence("acceptMismatch", atom, o1, o2)
    if not o1.steps:
        return Divergence("stepVsStop", atom, o1, o2, stopped=LEFT)
    if not o2.steps:
        return Divergence("stepVsStop", atom, o1, o2, stopped=RIGHT)
    return Divergence("actionMismatch", atom, o1, o2)


CellCheck = Callable[[Outcome, Outcome], bool]


# ===== PRODUCT WALKS =====

def _hopcroft_karp(a1: DetAutomaton, s1: StateId, a2: DetAutomaton, s2: StateId,
                   stats: CheckStats) -> bool:
    atoms = range(a1.universe.atom_count)
    uf = UnionFind()
    uf.union((LEFT, s1), (RIGHT, s2))
    stats.unions += 1
    queue = deque([(s1, s2)])
    while queue:
        p, q = queue.popleft()
        stats.pair_explorations += 1
        row1, row2 = a1.delta[p], a2.delta[q]
        for atom in atoms:
            o1, o2 = row1[atom], row2[atom]
            if not _bisim_ok(o1, o2):
                return False
            for action, t1 in o1.steps:
                t2 = o2.target(action)
                if uf.union((LEFT, t1), (RIGHT, t2)):
                    stats.unions += 1
                    queue.append((t1, t2))
    return True


def _shortest_witness(a1: DetAutomaton, s1: StateId, a2: DetAutomaton, s2: StateId,
                      ok: CellCheck, mode: Mode,
                      stats: Optional[CheckStats] = None) -> Optional[Witness]:
    """
    BFS over state pairs; atoms in numeric order, actions in universe order.
    The first failing cell gives the shortest, lexicographically least trace.
    """
    order = a1.universe.action_index
    atoms = range(a1.universe.atom_count)
    parent: Dict[Tuple[StateId, StateId], Optional[tuple]] = {(s1, s2): None}
    queue = deque([(s1, s2)])
    while queue:
        pair = queue.popleft()
        if stats is not None:
            stats.pair_explorations += 1
        p, q = pair
        for atom in atoms:
            o1, o2 = a1.delta[p][atom], a2.delta[q][atom]
            if not ok(o1, o2):
                return Witness(_trace_to(parent, pair), _classify(atom, o1, o2, mode))
            for action, t1 in sorted(o1.steps, key=lambda s: order[s[0]]):
                nxt = (t1, o2.target(action))
                if nxt not in parent:
                    parent[nxt] = (pair, atom, action)
                    queue.append(nxt)
    return None


def _trace_to(parent, pair) -> Tuple[Tuple[Atom, str], ...]:
    trace = []
    while parent[pair] is not None:
        pair, atom, action = parent[pair]
        trace.append((atom, action))
    return tuple(reversed(trace))


def _accepting_suffix(automaton: DetAutomaton, start: StateId) -> Optional[GuardedString]:
    """Shortest guarded string accepted from `start`, least atoms first."""
    order = automaton.universe.action_index
    parent: Dict[StateId, Optional[Tuple[StateId, Atom, str]]] = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        accepted = automaton.accepted_atoms(s)
        if accepted:
            last = (accepted & -accepted).bit_length() - 1
            steps = []
            node = s
            while parent[node] is not None:
                node, atom, action = parent[node]
                steps.append((atom, action))
            steps.reverse()
            return GuardedString(tuple(a for a, _ in steps) + (last,), tuple(p for _, p in steps))
        for atom, out in enumerate(automaton.delta[s]):
            for action, t in sorted(out.steps, key=lambda st: order[st[0]]):
                if t not in parent:
                    parent[t] = (s, atom, action)
                    queue.append(t)
    return None


def _replay(automaton: DetAutomaton, state: StateId, trace) -> StateId:
    for atom, action in trace:
        state = automaton.delta[state][atom].target(action)
    return state


def _extend(automaton: DetAutomaton, state: StateId, witness: Witness, out: Outcome,
            actions: List[str], side: str) -> Witness:
    """Prefix, then the least one-sided action, then the shortest accepting suffix."""
    action = min(actions, key=automaton.universe.action_index.get)
    target = out.target(action)
    suffix = _accepting_suffix(automaton, target)
    if suffix is None:
        return witness
    prefix = witness.prefix()
    string = GuardedString(prefix.atoms + suffix.atoms, prefix.actions + (action,) + suffix.actions)
    return Witness(witness.trace, witness.divergence, string, side)


def _separating_string(a1: DetAutomaton, s1: StateId, a2: DetAutomaton, s2: StateId,
                       witness: Witness, mode: Mode) -> Witness:
    """
    Attach a guarded string lying in exactly one language (for inclusion,
    in the left one). Needs live-normalized automata so every transition
    can be completed to an accepted string.
    """
    d = witness.divergence
    if d.left.accept and not d.right.accept:
        return Witness(witness.trace, d, witness.prefix(), LEFT)
    if mode is not Mode.INCL and d.right.accept and not d.left.accept:
        return Witness(witness.trace, d, witness.prefix(), RIGHT)
    only_left = [a for a in d.left.actions if a not in d.right.actions]
    if only_left:
        return _extend(a1, _replay(a1, s1, witness.trace), witness, d.left, only_left, LEFT)
    only_right = [a for a in d.right.actions if a not in d.left.actions]
    if only_right and mode is not Mode.INCL:
        return _extend(a2, _replay(a2, s2, witness.trace), witness, d.right, only_right, RIGHT)
    return witness


# ===== PUBLIC API =====

def bisim(a1: DetAutomaton, s1: StateId, a2: DetAutomaton, s2: StateId,
          mode: Mode = Mode.BISIM) -> Verdict:
    """
    Decide whether states s1 and s2 are bisimilar.

    Raises:
        UniverseMismatch: the automata have different universes
    """
    a1.universe.require_same(a2.universe)
    stats = CheckStats(len(a1.reachable), len(a2.reachable))
    names = a1.atom_names or a2.atom_names
    if _hopcroft_karp(a1, s1, a2, s2, stats):
        logger.debug("bisim: equivalent after %d pair explorations", stats.pair_explorations)
        return Verdict(True, mode, a1.universe, None, stats, names)
    witness = _shortest_witness(a1, s1, a2, s2, _bisim_ok, mode)
    assert witness is not None
    if mode is not Mode.BISIM:
        witness = _separating_string(a1, s1, a2, s2, witness, mode)
    return Verdict(False, mode, a1.universe, witness, stats, names)


def includes(a1: DetAutomaton, s1: StateId, a2: DetAutomaton, s2: StateId) -> Verdict:
    """
    Language inclusion L(s1) in L(s2) on live-normalized automata.

    Raises:
        UniverseMismatch: the automata have different universes
    """
    a1.universe.require_same(a2.universe)
    stats = CheckStats(len(a1.reachable), len(a2.reachable))
    names = a1.atom_names or a2.atom_names
    witness = _shortest_witness(a1, s1, a2, s2, _incl_ok, Mode.INCL, stats)
    if witness is None:
        return Verdict(True, Mode.INCL, a1.universe, None, stats, names)
    witness = _separating_string(a1, s1, a2, s2, witness, Mode.INCL)
    return Verdict(False, Mode.INCL, a1.universe, witness, stats, names)


def build_automaton(e: Exp, universe: Universe, pipeline: Pipeline = Pipeline.AUTO,
                    limits: Optional[Limits] = None) -> DetAutomaton:
    """build_gkat for GKAT input (unless the KAT pipeline is forced), else build_kat.

    Raises:
        UsageError: the GKAT pipeline is forced on an expression using + or *
    """
    pipeline = Pipeline(pipeline)
    if pipeline is Pipeline.GKAT and not is_gkat(e):
        raise UsageError("the gkat pipeline needs GKAT input; this expression uses + or *")
    if pipeline is Pipeline.GKAT or (pipeline is Pipeline.AUTO and is_gkat(e)):
        return build_gkat(e, universe, limits, with_labels=False)
    return build_kat(e, universe, limits, with_labels=False)


def check(e: Exp, f: Exp, mode: Mode, universe: Universe,
          pipeline: Pipeline = Pipeline.AUTO, limits: Optional[Limits] = None) -> Verdict:
    """
    Compare two expressions over a shared universe.

    With the AUTO pipeline both sides go through build_gkat when both are
    GKAT, otherwise both go through the KAT pipeline (GKAT input embedded).

    Raises:
        AtomBlowup, ResourceLimitExceeded: from construction
    """
    mode = Mode(mode)
    pipeline = Pipeline(pipeline)
    limits = limits or default_limits()
    if pipeline is Pipeline.AUTO:
        pipeline = Pipeline.GKAT if is_gkat(e) and is_gkat(f) else Pipeline.KAT
    a1 = build_automaton(e, universe, pipeline, limits)
    a2 = build_automaton(f, universe, pipeline, limits)
    if mode is not Mode.BISIM:
        a1, a2 = normalize_live(a1), normalize_live(a2)
    if mode is Mode.INCL:
        verdict = includes(a1, a1.initial, a2, a2.initial)
    else:
        verdict = bisim(a1, a1.initial, a2, a2.initial, mode)
    logger.info("check (%s, %s pipeline): %s", mode.value, pipeline.value,
                "equivalent" if verdict.equivalent else "inequivalent")
    return verdict


# ===== RENDERING =====

def _atom_text(atom: Atom, universe: Universe, names: Dict[Atom, str]) -> str:
    return names.get(atom) or format_atom(atom, universe)


def explain(verdict: Verdict) -> str:
    """
    Human-readable counterexample.

    Raises:
        VerdictError: the verdict is Equivalent
    """
    if verdict.equivalent or verdict.witness is None:
        raise VerdictError("nothing to explain: the verdict is equivalent")
    w = verdict.witness
    d = w.divergence
    universe = verdict.universe
    names = dict(verdict.atom_names)

    where = f"at {_atom_text(d.atom, universe, names)}"
    if w.trace:
        steps = " ".join(f"{_atom_text(a, universe, names)} {p}" for a, p in w.trace)
        where = f"after {steps}, {where}"

    if d.kind == "acceptMismatch":
        accepting, other = (LEFT, RIGHT) if d.left.accept else (RIGHT, LEFT)
        what = f"{accepting} accepts, {other} does not"
    else:
        what = f"left {d.left.describe()}, right {d.right.describe()}"
    lines = [f"{where}: {what}"]

    if w.string is not None:
        text = w.string.format(universe, names)
        if verdict.mode is Mode.INCL:
            lines.append(f"guarded string {text} is in the left language but not the right")
        else:
            lines.append(f"guarded string {text} is in the {w.contained_in} language only")
    return "\n".join(lines)


def verdict_to_model(verdict: Verdict, with_stats: bool = False) -> VerdictModel:
    universe = verdict.universe
    witness = None
    if verdict.witness is not None:
        w = verdict.witness
        d = w.divergence
        divergence = DivergenceModel(kind=d.kind, atom=format_atom(d.atom, universe))
        if d.kind == "stepVsStop":
            divergence.stopped = d.stopped
        if d.kind == "actionMismatch":
            divergence.left = d.left.describe()
            divergence.right = d.right.describe()
        witness = WitnessModel(
            trace=[(format_atom(a, universe), p) for a, p in w.trace],
            divergence=divergence,
            string=w.string.format(universe) if w.string is not None else None,
            contained_in=w.contained_in if w.string is not None else None,
        )
    stats = None
    if with_stats:
        s = verdict.stats
        stats = StatsModel(left_states=s.left_states, right_states=s.right_states,
                           pair_explorations=s.pair_explorations, unions=s.unions)
    return VerdictModel(equivalent=verdict.equivalent, mode=verdict.mode.value,
                        witness=witness, stats=stats)


def verdict_to_json(verdict: Verdict, with_stats: bool = False) -> str:
    """`{"equivalent": false, "mode": "bisim", "witness": {...}}`"""
    payload = verdict_to_model(verdict, with_stats).model_dump(by_alias=True, exclude_none=True)
    return json.dumps(payload, indent=2, ensure_ascii=False)
