# core/schemas.py
"""
Pydantic models for every JSON document gkatcheck reads or writes.

Input models (interpretations, automata) validate the raw JSON; the engine
converts them to its own immutable types. Output models fix the key names
and ordering of verdicts and the law catalogue.
"""

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


# ===== INTERPRETATIONS =====

class InterpretationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    states: List[str]
    functional: bool = False
    tau: Dict[str, List[str]] = Field(default_factory=dict)
    sigma: Dict[str, List[Tuple[str, str]]] = Field(default_factory=dict)


# ===== AUTOMATA =====

class OutcomeModel(BaseModel):
    """One (state, atom) cell. `step` is the GKAT form, `steps` the KAT form."""
    model_config = ConfigDict(extra="forbid")

    atom: str
    accept: Optional[bool] = None
    step: Optional[Tuple[str, int]] = None
    steps: Optional[List[Tuple[str, int]]] = None


class StateModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: Optional[str] = None
    outcomes: List[OutcomeModel] = Field(default_factory=list)


class AutomatonModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tests: List[str] = Field(default_factory=list)
    actions: List[str] = Field(default_factory=list)
    initial: int = 0
    # display name -> atom text, e.g. {"α": "{t}"}
    atom_names: Dict[str, str] = Field(default_factory=dict)
    states: List[StateModel]


# ===== VERDICTS =====

class DivergenceModel(BaseModel):
    kind: Literal["acceptMismatch", "actionMismatch", "stepVsStop"]
    atom: str
    left: Optional[str] = None
    right: Optional[str] = None
    stopped: Optional[Literal["left", "right"]] = None


class WitnessModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    trace: List[Tuple[str, str]]
    divergence: DivergenceModel
    string: Optional[str] = None
    contained_in: Optional[Literal["left", "right"]] = Field(default=None, serialization_alias="containedIn")


class StatsModel(BaseModel):
    left_states: int
    right_states: int
    pair_explorations: int
    unions: int


class VerdictModel(BaseModel):
    equivalent: bool
    mode: Literal["bisim", "lang", "incl"]
    witness: Optional[WitnessModel] = None
    stats: Optional[StatsModel] = None


# ===== LAWS =====

class LawModel(BaseModel):
    id: str
    family: Literal["kat", "gkat"]
    kind: Literal["equation", "conditional-equation", "inclusion", "conditional-inclusion"]
    metavars: Dict[str, Literal["program", "test"]]
    lhs: str
    rhs: str
    premises: List[str] = Field(default_factory=list)
    sound: bool = True
    bisim: bool = True
    note: Optional[str] = None


class CatalogueModel(BaseModel):
    laws: List[LawModel]
