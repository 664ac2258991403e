# -*- coding: utf-8 -*-
# core/semantics.py
"""
Reference semantics used as an oracle.

- guarded strings and bounded guarded languages (fusion product, star as a
  truncated fixpoint)
- membership of a single guarded string
- relational semantics over finite interpretations, and the GKAT variant
  that checks functionality

Everything here favours obviousness over speed; the automata and
equivalence modules are what decide equivalence.
"""

import json
import logging
import random
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, Tuple

from pydantic import ValidationError

from .atoms import Atom, all_atoms, check_atom_cap, eval_bexp, format_atom, members, parse_atom, satisfying
from .config import Limits, default_limits
from .errors import (
    FunctionalityViolation, GkatSyntaxError, InterpretationError,
    ResourceLimitExceeded, ScopeError,
)
from .schemas import InterpretationModel
from .syntax import (
    Act, And, BExp, Exp, Hole, Not, One, Or, Plus, Seq, Star, Test, TestHole,
    TestOf, Universe, Zero, embed,
)

logger = logging.getLogger(__name__)


# ===== GUARDED STRINGS =====

@dataclass(frozen=True)
class GuardedString:
    """alpha0 p0 alpha1 ... alphaN: one more atom than actions."""
    atoms: Tuple[Atom, ...]
    actions: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "actions", tuple(self.actions))
        if len(self.atoms) != len(self.actions) + 1:
            raise ValueError(
                f"guarded string needs one more atom than actions "
                f"({len(self.atoms)} atoms, {len(self.actions)} actions)"
            )

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @property
    def first(self) -> Atom:
        return self.atoms[0]

    @property
    def last(self) -> Atom:
        return self.atoms[-1]

    def fuse(self, other: "GuardedString") -> Optional["GuardedString"]:
        """w.alpha fused with alpha.x; None when the boundary atoms differ."""
        if self.last != other.first:
            return None
        return GuardedString(self.atoms + other.atoms[1:], self.actions + other.actions)

    def steps(self) -> Iterator[Tuple[Atom, str]]:
        """(atom, action) pairs, without the final atom."""
        return zip(self.atoms, self.actions)

    def sort_key(self, universe: Universe) -> Tuple:
        """Action count, then lexicographic on the interleaved atom/action sequence."""
        interleaved = []
        for atom, action in self.steps():
            interleaved.extend((atom, universe.action_index.get(action, -1)))
        interleaved.append(self.last)
        return (self.n_actions, tuple(interleaved))

    def format(self, universe: Universe, names: Optional[Mapping[Atom, str]] = None) -> str:
        """`{b} p {} q {b,c}`; atoms with a display name use it."""
        def atom_text(atom: Atom) -> str:
            if names and atom in names:
                return names[atom]
            return format_atom(atom, universe)

        parts = [atom_text(self.atoms[0])]
        for action, atom in zip(self.actions, self.atoms[1:]):
            parts.append(action)
            parts.append(atom_text(atom))
        return " ".join(parts)


_GS_TOKEN_RE = re.compile(r"\{[^}]*\}|[^\s{}]+")


def parse_guarded_string(text: str, universe: Universe,
                         aliases: Optional[Mapping[str, Atom]] = None) -> GuardedString:
    """
    Parse `{b} p {} q {b,c}`. Names in `aliases` (e.g. display names from an
    automaton fixture) stand for atoms.

    Raises:
        GkatSyntaxError: atoms and actions do not alternate
        ScopeError: unknown test or action
    """
    aliases = aliases or {}
    tokens = _GS_TOKEN_RE.findall(text)
    if not tokens or len(tokens) % 2 == 0:
        raise GkatSyntaxError(f"guarded string must alternate atom/action/atom: {text!r}")
    atoms, actions = [], []
    for i, tok in enumerate(tokens):
        if i % 2 == 0:
            if tok in aliases:
                atoms.append(aliases[tok])
            elif tok.startswith("{"):
                atoms.append(parse_atom(tok, universe))
            else:
                raise GkatSyntaxError(f"expected an atom at position {i + 1}, got {tok!r}")
        else:
            if not universe.is_action(tok):
                raise ScopeError(f"undeclared action symbol {tok}")
            actions.append(tok)
    return GuardedString(tuple(atoms), tuple(actions))


@dataclass(frozen=True)
class GuardedLanguage:
    """A finite set of guarded strings, each with at most `bound` actions."""
    strings: FrozenSet[GuardedString]
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "strings", frozenset(self.strings))
        if any(s.n_actions > self.bound for s in self.strings):
            raise ValueError(f"language contains strings longer than its bound {self.bound}")

    def __contains__(self, w: GuardedString) -> bool:
        return w in self.strings

    def __len__(self) -> int:
        return len(self.strings)

    def sorted(self, universe: Universe) -> List[GuardedString]:
        return sorted(self.strings, key=lambda s: s.sort_key(universe))


def all_atom_strings(universe: Universe, limits: Optional[Limits] = None) -> FrozenSet[GuardedString]:
    """At viewed as a language: every length-0 guarded string."""
    return frozenset(GuardedString((a,)) for a in all_atoms(universe, limits))


def _fuse_sets(left: Iterable[GuardedString], right: Iterable[GuardedString],
               bound: int) -> Set[GuardedString]:
    by_first: Dict[Atom, List[GuardedString]] = defaultdict(list)
    for s in right:
        by_first[s.first].append(s)
    out = set()
    for w in left:
        for x in by_first.get(w.last, ()):
            if w.n_actions + x.n_actions <= bound:
                out.add(GuardedString(w.atoms + x.atoms[1:], w.actions + x.actions))
    return out


def fusion(l1: GuardedLanguage, l2: GuardedLanguage) -> GuardedLanguage:
    """{ w.alpha.x | w.alpha in L1, alpha.x in L2 }, bound = L1.bound + L2.bound."""
    bound = l1.bound + l2.bound
    return GuardedLanguage(frozenset(_fuse_sets(l1.strings, l2.strings, bound)), bound)


# ===== BOUNDED LANGUAGE =====

class _Enumerator:
    """Inductive clauses of the guarded-language semantics, truncated at n actions."""

    def __init__(self, universe: Universe, bound: int, limits: Limits):
        self.universe = universe
        self.bound = bound
        self.limits = limits
        self.atoms = list(all_atoms(universe, limits))

    def guard(self, strings: Set[GuardedString]) -> Set[GuardedString]:
        if len(strings) > self.limits.oracle_max_strings:
            raise ResourceLimitExceeded("oracle guarded-string count", self.limits.oracle_max_strings)
        return strings

    def lang(self, e: Exp) -> Set[GuardedString]:
        if isinstance(e, TestOf):
            return {GuardedString((a,)) for a in members(satisfying(e.test, self.universe, self.limits))}
        if isinstance(e, Act):
            if self.bound < 1:
                return set()
            return self.guard({GuardedString((a, b), (e.name,)) for a in self.atoms for b in self.atoms})
        if isinstance(e, Plus):
            return self.guard(self.lang(e.left) | self.lang(e.right))
        if isinstance(e, Seq):
            return self.guard(_fuse_sets(self.lang(e.first), self.lang(e.second), self.bound))
        if isinstance(e, Star):
            body = self.lang(e.body)
            result = set(all_atom_strings(self.universe, self.limits))
            frontier = set(result)
            while frontier:
                frontier = _fuse_sets(frontier, body, self.bound) - result
                result |= frontier
                self.guard(result)
            return result
        if isinstance(e, Hole):
            raise TypeError(f"unfilled program hole {e.name}")
        return self.lang(embed(e))


def lang_bounded(e: Exp, n: int, universe: Universe,
                 limits: Optional[Limits] = None) -> GuardedLanguage:
    """
    Guarded strings of e with at most n actions. GKAT input is embedded first.

    Raises:
        AtomBlowup: too many tests
        ResourceLimitExceeded: more strings than limits.oracle_max_strings
    """
    limits = limits or default_limits()
    strings = _Enumerator(universe, n, limits).lang(embed(e))
    logger.debug("lang_bounded: %d strings at bound %d", len(strings), n)
    return GuardedLanguage(frozenset(strings), n)


def enumerate_guarded_strings(universe: Universe, max_actions: int,
                              limits: Optional[Limits] = None) -> Iterator[GuardedString]:
    """Every guarded string over the universe with at most max_actions actions."""
    atoms = list(all_atoms(universe, limits))
    layer = [GuardedString((a,)) for a in atoms]
    for _ in range(max_actions + 1):
        yield from layer
        layer = [GuardedString(w.atoms + (b,), w.actions + (p,))
                 for w in layer for p in universe.actions for b in atoms]


def membership(e: Exp, w: GuardedString, universe: Universe,
               limits: Optional[Limits] = None) -> bool:
    """
    w in [[e]], decided on the segments of w alone.

    Same answer as `w in lang_bounded(e, w.n_actions)`; segment i..j of w
    stands for the guarded string atoms[i] actions[i] ... atoms[j].
    """
    check_atom_cap(universe, limits)
    e = embed(e)
    atoms, acts = w.atoms, w.actions

    @lru_cache(maxsize=None)
    def star(body: Exp, i: int, j: int) -> bool:
        if i == j:
            return True
        return any(seg(body, i, k) and star(body, k, j) for k in range(i + 1, j + 1))

    @lru_cache(maxsize=None)
    def seg(node: Exp, i: int, j: int) -> bool:
        if isinstance(node, TestOf):
            return i == j and eval_bexp(node.test, atoms[i], universe)
        if isinstance(node, Act):
            return j == i + 1 and acts[i] == node.name
        if isinstance(node, Plus):
            return seg(node.left, i, j) or seg(node.right, i, j)
        if isinstance(node, Seq):
            return any(seg(node.first, i, k) and seg(node.second, k, j) for k in range(i, j + 1))
        if isinstance(node, Star):
            return star(node.body, i, j)
        raise TypeError(f"cannot decide membership for {type(node).__name__}")

    return seg(e, 0, len(acts))


# ===== INTERPRETATIONS =====

Relation = FrozenSet[Tuple[str, str]]


@dataclass(frozen=True)
class Interpretation:
    """Finite model: sigma assigns relations to actions, tau state sets to tests."""
    states: Tuple[str, ...]
    sigma: Mapping[str, Relation] = field(default_factory=dict)
    tau: Mapping[str, FrozenSet[str]] = field(default_factory=dict)
    functional: bool = False

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "sigma", {p: frozenset(map(tuple, r)) for p, r in self.sigma.items()})
        object.__setattr__(self, "tau", {t: frozenset(s) for t, s in self.tau.items()})
        known = set(self.states)
        if len(known) != len(self.states):
            raise InterpretationError("duplicate state names")
        for test, states in self.tau.items():
            unknown = states - known
            if unknown:
                raise InterpretationError(f"tau({test}) mentions unknown states {sorted(unknown)}")
        for action, rel in self.sigma.items():
            for pair in rel:
                if len(pair) != 2 or not set(pair) <= known:
                    raise InterpretationError(f"sigma({action}) has a bad pair {pair!r}")
            if self.functional and not is_partial_function(rel):
                raise InterpretationError(f"sigma({action}) is not a partial function")

    def identity(self) -> Relation:
        return frozenset((s, s) for s in self.states)

    def holds(self, b: BExp, state: str) -> bool:
        if isinstance(b, One):
            return True
        if isinstance(b, Zero):
            return False
        if isinstance(b, Test):
            if b.name not in self.tau:
                raise InterpretationError(f"test {b.name} is not interpreted")
            return state in self.tau[b.name]
        if isinstance(b, Or):
            return self.holds(b.left, state) or self.holds(b.right, state)
        if isinstance(b, And):
            return self.holds(b.left, state) and self.holds(b.right, state)
        if isinstance(b, Not):
            return not self.holds(b.operand, state)
        if isinstance(b, TestHole):
            raise TypeError(f"unfilled test hole {b.name}")
        raise TypeError(f"not a test: {b!r}")


def is_partial_function(rel: Iterable[Tuple[str, str]]) -> bool:
    """No state has two distinct successors."""
    seen: Dict[str, str] = {}
    for s, t in rel:
        if seen.setdefault(s, t) != t:
            return False
    return True


def compose(r: Relation, s: Relation) -> Relation:
    """r then s: {(a, c) | (a, b) in r, (b, c) in s}."""
    by_source: Dict[str, List[str]] = defaultdict(list)
    for b, c in s:
        by_source[b].append(c)
    return frozenset((a, c) for a, b in r for c in by_source.get(b, ()))


def closure(r: Relation, identity: Relation) -> Relation:
    """Reflexive-transitive closure by naive fixpoint iteration."""
    result = identity
    while True:
        grown = result | compose(result, r)
        if grown == result:
            return result
        result = grown


def rel_sem(e: Exp, interp: Interpretation) -> Relation:
    """
    Relational semantics: tests are partial identities, + is union, ; is
    composition, * is reflexive-transitive closure. GKAT input is embedded.

    Raises:
        InterpretationError: a symbol of e is missing from the interpretation
    """
    return _rel(embed(e), interp)


def _rel(e: Exp, interp: Interpretation) -> Relation:
    if isinstance(e, TestOf):
        return frozenset((s, s) for s in interp.states if interp.holds(e.test, s))
    if isinstance(e, Act):
        if e.name not in interp.sigma:
            raise InterpretationError(f"action {e.name} is not interpreted")
        return interp.sigma[e.name]
    if isinstance(e, Plus):
        return _rel(e.left, interp) | _rel(e.right, interp)
    if isinstance(e, Seq):
        return compose(_rel(e.first, interp), _rel(e.second, interp))
    if isinstance(e, Star):
        return closure(_rel(e.body, interp), interp.identity())
    raise TypeError(f"no relational semantics for {type(e).__name__}")


def rel_sem_gkat(e: Exp, interp: Interpretation) -> Relation:
    """
    Relational semantics of a GKAT program via the embedding.

    Raises:
        FunctionalityViolation: functional interpretation but the result is
            not a partial function (an engine bug, GKAT preserves functionality)
    """
    rel = rel_sem(e, interp)
    if interp.functional and not is_partial_function(rel):
        raise FunctionalityViolation("GKAT program denotes a non-functional relation "
                                     "under a functional interpretation")
    return rel


def random_interpretation(universe: Universe, n_states: int, functional: bool,
                          rng: random.Random) -> Interpretation:
    """Random finite interpretation covering every symbol of the universe."""
    states = tuple(f"s{i}" for i in range(n_states))
    tau = {t: frozenset(s for s in states if rng.random() < 0.5) for t in universe.tests}
    sigma = {}
    for p in universe.actions:
        if functional:
            rel = set()
            for s in states:
                if rng.random() < 0.75:
                    rel.add((s, rng.choice(states)))
        else:
            rel = {(s, t) for s in states for t in states if rng.random() < 0.3}
        sigma[p] = frozenset(rel)
    return Interpretation(states, sigma, tau, functional)


# ===== JSON =====

def load_interpretation(text: str) -> Interpretation:
    """
    Interpretation JSON:
    {"states": [...], "functional": true, "tau": {"b": [...]}, "sigma": {"p": [[s, t], ...]}}

    Raises:
        InterpretationError: malformed JSON or inconsistent content
    """
    try:
        model = InterpretationModel.model_validate_json(text)
    except ValidationError as e:
        raise InterpretationError(f"invalid interpretation JSON: {e}") from e
    return Interpretation(
        states=tuple(model.states),
        sigma={p: frozenset(tuple(pair) for pair in pairs) for p, pairs in model.sigma.items()},
        tau={t: frozenset(states) for t, states in model.tau.items()},
        functional=model.functional,
    )


def dump_interpretation(interp: Interpretation) -> str:
    model = InterpretationModel(
        states=list(interp.states),
        functional=interp.functional,
        tau={t: sorted(s) for t, s in sorted(interp.tau.items())},
        sigma={p: sorted(list(pair) for pair in r) for p, r in sorted(interp.sigma.items())},
    )
    return model.model_dump_json(indent=2)


def relation_to_json(rel: Relation, functional: bool) -> str:
    """`{"s0": "s1"}` for partial functions, `{"s0": ["s1", "s2"]}` otherwise; `{}` when empty."""
    if functional:
        payload = {s: t for s, t in sorted(rel)}
    else:
        grouped: Dict[str, List[str]] = defaultdict(list)
        for s, t in sorted(rel):
            grouped[s].append(t)
        payload = dict(grouped)
    return json.dumps(payload, indent=2, sort_keys=True) if payload else "{}"
