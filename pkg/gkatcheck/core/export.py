# -*- coding: utf-8 -*-
# core/export.py
"""
Automaton JSON and Graphviz DOT.

JSON shape:
    {"tests": [...], "actions": [...], "initial": 0,
     "atom_names": {"α": "{t}"},
     "states": [{"label": "...", "outcomes": [
         {"atom": "{b}", "step": ["p", 1]},
         {"atom": "{}", "accept": true}]}]}

Omitted atoms reject. A cell with several transitions (KAT automata) uses
"steps": [["p", 1], ["q", 2]]. Atoms may be written by display name.
"""

import json
import logging
from importlib import resources
from typing import Dict, List, Tuple

from pydantic import ValidationError

from .atoms import Atom, format_atom, parse_atom
from .automata import DetAutomaton, Outcome, from_cells
from .errors import AutomatonFormatError, GkatError
from .schemas import AutomatonModel, OutcomeModel, StateModel
from .syntax import Universe

logger = logging.getLogger(__name__)

FIXTURE_PACKAGE = "gkatcheck"
FIXTURE_DIR = ("resources", "fixtures")


# ===== JSON =====

def to_model(automaton: DetAutomaton) -> AutomatonModel:
    universe = automaton.universe
    states = []
    for s, row in enumerate(automaton.delta):
        outcomes = []
        for atom, out in enumerate(row):
            if out.is_reject:
                continue
            cell = OutcomeModel(atom=format_atom(atom, universe))
            if out.accept:
                cell.accept = True
            if len(out.steps) == 1:
                cell.step = out.steps[0]
            elif out.steps:
                cell.steps = list(out.steps)
            outcomes.append(cell)
        label = automaton.labels[s] if automaton.labels is not None else None
        states.append(StateModel(label=label, outcomes=outcomes))
    return AutomatonModel(
        tests=list(universe.tests),
        actions=list(universe.actions),
        initial=automaton.initial,
        atom_names={name: format_atom(atom, universe) for atom, name in automaton.atom_names},
        states=states,
    )


def to_json(automaton: DetAutomaton) -> str:
    """Lossless JSON text; from_json(to_json(a)) == a."""
    payload = to_model(automaton).model_dump(exclude_none=True)
    return json.dumps(payload, indent=2, ensure_ascii=False)


def from_json(text: str) -> DetAutomaton:
    """
    Parse automaton JSON.

    Raises:
        AutomatonFormatError: malformed JSON, unknown symbols, duplicate atoms,
            bad state references
    """
    try:
        model = AutomatonModel.model_validate_json(text)
    except ValidationError as e:
        raise AutomatonFormatError(f"invalid automaton JSON: {e}") from e
    return from_model(model)


def from_model(model: AutomatonModel) -> DetAutomaton:
    try:
        universe = Universe(tuple(model.tests), tuple(model.actions))
        aliases = {name: parse_atom(text, universe) for name, text in model.atom_names.items()}
    except GkatError as e:
        raise AutomatonFormatError(f"invalid automaton header: {e}") from e

    def atom_of(text: str, state: int) -> Atom:
        if text in aliases:
            return aliases[text]
        try:
            return parse_atom(text, universe)
        except GkatError as e:
            raise AutomatonFormatError(f"state {state}: {e}") from e

    if not model.states:
        raise AutomatonFormatError("automaton has no states")
    cells: Dict[int, Dict[Atom, Outcome]] = {}
    for s, state in enumerate(model.states):
        row = cells[s] = {}
        for cell in state.outcomes:
            atom = atom_of(cell.atom, s)
            if atom in row:
                raise AutomatonFormatError(f"state {s} defines atom {cell.atom} twice")
            steps: List[Tuple[str, int]] = []
            if cell.step is not None:
                steps.append(tuple(cell.step))
            steps.extend(tuple(pair) for pair in cell.steps or ())
            row[atom] = Outcome(bool(cell.accept), tuple(steps))

    return from_cells(universe, cells, model.initial,
                      {atom: name for name, atom in aliases.items()},
                      [state.label for state in model.states])


def load_fixture(name: str) -> DetAutomaton:
    """Shipped automaton fixture by file stem, e.g. 'parity'."""
    path = resources.files(FIXTURE_PACKAGE).joinpath(*FIXTURE_DIR, f"{name}.json")
    logger.debug("Loading automaton fixture %s", name)
    return from_json(path.read_text(encoding="utf-8"))


# ===== DOT =====

def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r'\"'))


def atom_label(automaton: DetAutomaton, atom: Atom) -> str:
    return automaton.names.get(atom) or format_atom(atom, automaton.universe)


def to_dot(automaton: DetAutomaton, name: str = "automaton") -> str:
    """
    Graphviz digraph. Atoms sharing a (source, action, target) edge are
    grouped into one `α,β|p` label; accepting states are double circles
    annotated with the atoms they accept.
    """
    lines = [f"digraph {_gvquote(name)} {{", "  rankdir=LR;",
             '  __start [shape=point, label=""];']
    for s, row in enumerate(automaton.delta):
        accepted = [atom_label(automaton, atom) for atom, out in enumerate(row) if out.accept]
        attrs = []
        if accepted:
            attrs.append("shape=doublecircle")
            attrs.append("label=" + _gvquote(f"q{s}\n⇓ " + ",".join(accepted)).replace("\n", "\\n"))
        else:
            attrs.append("shape=circle")
            attrs.append("label=" + _gvquote(f"q{s}"))
        if automaton.labels is not None and automaton.labels[s] is not None:
            attrs.append("tooltip=" + _gvquote(automaton.labels[s]))
        lines.append(f"  q{s} [{', '.join(attrs)}];")
    lines.append(f"  __start -> q{automaton.initial};")

    for s, row in enumerate(automaton.delta):
        edges: Dict[Tuple[str, int], List[str]] = {}
        for atom, out in enumerate(row):
            for action, target in out.steps:
                edges.setdefault((action, target), []).append(atom_label(automaton, atom))
        for (action, target), atoms in edges.items():
            label = ",".join(atoms) + "|" + action
            lines.append(f"  q{s} -> q{target} [label={_gvquote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
