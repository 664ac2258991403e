# -*- coding: utf-8 -*-
# core/laws.py
"""
Catalogue of KAT and GKAT axiom schemas.

Templates are written in the algebraic notation with program holes e, f, g
and test holes b, c, d, parsed once at import. Laws are instantiated with
concrete terms and checked with the equivalence engine; conditional laws
are only checked when their premises hold.
"""

import json
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple, Type, Union

from .atoms import is_zero
from .config import Limits, default_limits
from .equivalence import Mode, Pipeline, Verdict, check, explain
from .errors import LawBindingError
from .generators import random_bexp, random_gkat, random_kat
from .parser import PROGRAM_HOLE, TEST_HOLE, parse_gkat_algebraic_expr, parse_kat_expr
from .render import render_algebraic, render_bexp, render_kat
from .schemas import CatalogueModel, LawModel
from .syntax import (
    BEXP_TYPES, EXP_TYPES, ONE, SKIP, And, BExp, Exp, Hole, IfThenElse, Not, Or, Plus, Seq,
    Star, TestHole, TestOf, Universe, While, is_gkat, is_kat, seq, subterms,
    termination_condition,
)

logger = logging.getLogger(__name__)

HOLES = {"e": PROGRAM_HOLE, "f": PROGRAM_HOLE, "g": PROGRAM_HOLE,
         "b": TEST_HOLE, "c": TEST_HOLE, "d": TEST_HOLE}

# universe used for sampling when the caller gives none
DEFAULT_LAW_UNIVERSE = Universe(("t", "u", "v"), ("p", "q", "r"))

Binding = Union[Exp, BExp]


class Family(str, Enum):
    KAT = "kat"
    GKAT = "gkat"


class LawKind(str, Enum):
    EQUATION = "equation"
    CONDITIONAL_EQUATION = "conditional-equation"
    INCLUSION = "inclusion"
    CONDITIONAL_INCLUSION = "conditional-inclusion"

    @property
    def is_inclusion(self) -> bool:
        return self in (LawKind.INCLUSION, LawKind.CONDITIONAL_INCLUSION)


def _show(term: Exp, family: Family) -> str:
    """KAT laws print in KAT notation, GKAT laws with +[b] and ^(b)."""
    return render_kat(term) if family is Family.KAT else render_algebraic(term)


class PremiseKind(str, Enum):
    EQUIV = "equiv"
    INCL = "incl"
    PRODUCTIVE = "productive"  # E(lhs) is equivalent to 0


@dataclass(frozen=True)
class Premise:
    kind: PremiseKind
    lhs: Exp
    rhs: Optional[Exp] = None

    def render(self, family: Family = Family.GKAT) -> str:
        if self.kind is PremiseKind.PRODUCTIVE:
            return f"E({_show(self.lhs, family)}) ≡ 0"
        op = "≡" if self.kind is PremiseKind.EQUIV else "≦"
        return f"{_show(self.lhs, family)} {op} {_show(self.rhs, family)}"


@dataclass(frozen=True)
class LawSchema:
    id: str
    family: Family
    kind: LawKind
    lhs: Exp
    rhs: Exp
    premises: Tuple[Premise, ...] = ()
    sound: bool = True
    # holds up to bisimilarity, not only language equivalence
    bisim: bool = True
    note: Optional[str] = None

    @property
    def metavars(self) -> Dict[str, str]:
        """Hole name -> 'program' | 'test', in e f g b c d order."""
        found = set()
        for term in (self.lhs, self.rhs, *(p.lhs for p in self.premises),
                     *(p.rhs for p in self.premises if p.rhs is not None)):
            found |= _holes(term)
        return {name: kind for name, kind in HOLES.items() if name in found}

    @property
    def is_conditional(self) -> bool:
        return bool(self.premises)

    def render(self) -> str:
        op = "≦" if self.kind.is_inclusion else "≡"
        text = f"{_show(self.lhs, self.family)} {op} {_show(self.rhs, self.family)}"
        if self.premises:
            text = " and ".join(p.render(self.family) for p in self.premises) + " ⟹ " + text
        return text


@dataclass(frozen=True)
class Instance:
    law: LawSchema
    lhs: Exp
    rhs: Exp
    premises: Tuple[Premise, ...] = ()


@dataclass
class LawResult:
    law_id: str
    premises_hold: bool
    holds: Optional[bool]  # None when a premise fails
    verdict: Optional[Verdict] = None


@dataclass
class LawReport:
    law_id: str
    samples: int = 0
    vacuous: int = 0
    failures: List[str] = field(default_factory=list)
    bisim_failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.bisim_failures


# ===== TEMPLATES =====

def _holes(term: Union[Exp, BExp]) -> set:
    names = set()
    if isinstance(term, BEXP_TYPES):
        stack = [term]
    else:
        stack = []
        for node in subterms(term):
            if isinstance(node, Hole):
                names.add(node.name)
            elif isinstance(node, TestOf):
                stack.append(node.test)
            elif isinstance(node, (IfThenElse, While)):
                stack.append(node.cond)
    while stack:
        b = stack.pop()
        if isinstance(b, TestHole):
            names.add(b.name)
        elif isinstance(b, (Or, And)):
            stack.extend((b.left, b.right))
        elif isinstance(b, Not):
            stack.append(b.operand)
    return names


def _template(text: str, family: Family) -> Exp:
    empty = Universe()
    if family is Family.KAT:
        return parse_kat_expr(text, empty, HOLES)
    return parse_gkat_algebraic_expr(text, empty, HOLES)


def _law(law_id: str, family: Family, lhs: str, rhs: str, kind: LawKind = LawKind.EQUATION,
         premises: Tuple[Tuple[PremiseKind, str, Optional[str]], ...] = (),
         **extra) -> LawSchema:
    parsed = tuple(Premise(pk, _template(pl, family), _template(pr, family) if pr else None)
                   for pk, pl, pr in premises)
    return LawSchema(f"{family.value}.{law_id}", family, kind,
                     _template(lhs, family), _template(rhs, family), parsed, **extra)


# ===== REGISTRY =====

class LawRegistry:
    """Registry of law schemas by id"""

    _laws: Dict[str, LawSchema] = {}

    @classmethod
    def register(cls, law: LawSchema) -> LawSchema:
        if law.id in cls._laws:
            raise ValueError(f"law {law.id} registered twice")
        cls._laws[law.id] = law
        logger.debug("Registered law: %s", law.id)
        return law

    @classmethod
    def get(cls, law_id: str) -> LawSchema:
        """
        Raises:
            KeyError: unknown law id
        """
        if law_id not in cls._laws:
            raise KeyError(f"unknown law {law_id!r}")
        return cls._laws[law_id]

    @classmethod
    def all(cls) -> List[LawSchema]:
        return list(cls._laws.values())

    @classmethod
    def by_family(cls, family: Family) -> List[LawSchema]:
        family = Family(family)
        return [law for law in cls._laws.values() if law.family is family]

    @classmethod
    def ids(cls) -> List[str]:
        return list(cls._laws)


def _register_kat_laws() -> None:
    K = Family.KAT
    for law in (
        _law("bool-excluded-middle", K, "b + !b", "1"),
        _law("bool-contradiction", K, "b;!b", "0"),
        _law("bool-idem", K, "b;b", "b"),
        _law("bool-comm", K, "b;c", "c;b"),
        _law("bool-distrib", K, "b + c;d", "(b + c);(b + d)"),
        _law("plus-zero", K, "e + 0", "e"),
        _law("plus-idem", K, "e + e", "e"),
        _law("plus-comm", K, "e + f", "f + e"),
        _law("seq-unit-right", K, "e;1", "e"),
        _law("seq-unit-left", K, "1;e", "e"),
        _law("annihilation", K, "e;0", "0", bisim=False),
        _law("annihilation-left", K, "0;e", "0"),
        _law("plus-assoc", K, "e + (f + g)", "(e + f) + g"),
        _law("seq-assoc", K, "e;(f;g)", "(e;f);g"),
        _law("distrib-left", K, "e;(f + g)", "e;f + e;g"),
        _law("distrib-right", K, "(e + f);g", "e;g + f;g"),
        _law("star-unroll", K, "1 + e;e*", "e*"),
        _law("star-unroll-left", K, "1 + e*;e", "e*"),
        _law("star-induction-left", K, "f*;e", "g", LawKind.CONDITIONAL_INCLUSION,
             ((PremiseKind.INCL, "e + f;g", "g"),)),
        _law("star-induction-right", K, "e;g*", "f", LawKind.CONDITIONAL_INCLUSION,
             ((PremiseKind.INCL, "e + f;g", "f"),)),
    ):
        LawRegistry.register(law)


def _register_gkat_laws() -> None:
    G = Family.GKAT
    for law in (
        _law("branch-idem", G, "e +[b] e", "e"),
        _law("branch-skew-comm", G, "e +[b] f", "f +[!b] e"),
        _law("branch-assoc", G, "(e +[b] f) +[c] g", "e +[b;c] (f +[c] g)",
             note="commonly printed with the g operand missing on the left; restored here"),
        _law("guard-absorb", G, "e +[b] f", "b;e +[b] f"),
        _law("branch-right-distrib", G, "e;g +[b] f;g", "(e +[b] f);g"),
        _law("seq-assoc", G, "(e;f);g", "e;(f;g)"),
        _law("annihilation-left", G, "0;e", "0"),
        _law("annihilation-right", G, "e;0", "0", bisim=False,
             note="language-sound only: a program failing after acting is not bisimilar to 0"),
        _law("unit-left", G, "1;e", "e"),
        _law("unit-right", G, "e;1", "e"),
        _law("loop-unroll", G, "e^(b)", "e;e^(b) +[b] 1"),
        _law("loop-guard", G, "(c;e)^(b)", "(e +[c] 1)^(b)"),
        _law("unique-fixpoint", G, "g", "e^(b);f", LawKind.CONDITIONAL_EQUATION,
             ((PremiseKind.EQUIV, "g", "e;g +[b] f"), (PremiseKind.PRODUCTIVE, "e", None))),
        _law("least-fixpoint", G, "e^(b);f", "g", LawKind.CONDITIONAL_INCLUSION,
             ((PremiseKind.INCL, "e;g +[b] f", "g"),)),
        _law("fixpoint-unsound", G, "g", "e^(b);f", LawKind.CONDITIONAL_EQUATION,
             ((PremiseKind.EQUIV, "g", "e;g +[b] f"),), sound=False,
             note="without the productivity side condition; refuted by e = f = g = b = 1"),
    ):
        LawRegistry.register(law)


_register_kat_laws()
_register_gkat_laws()


def get_law_registry() -> Type[LawRegistry]:
    """Global law registry"""
    return LawRegistry


def list_laws(family: Union[Family, str]) -> List[LawSchema]:
    """Complete catalogue of one family, in registration order."""
    return LawRegistry.by_family(Family(family))


# ===== INSTANTIATION =====

def _fill_bexp(b: BExp, bindings: Mapping[str, Binding]) -> BExp:
    if isinstance(b, TestHole):
        return bindings[b.name]
    if isinstance(b, Or):
        return Or(_fill_bexp(b.left, bindings), _fill_bexp(b.right, bindings))
    if isinstance(b, And):
        return And(_fill_bexp(b.left, bindings), _fill_bexp(b.right, bindings))
    if isinstance(b, Not):
        return Not(_fill_bexp(b.operand, bindings))
    return b


def _fill(e: Exp, bindings: Mapping[str, Binding]) -> Exp:
    if isinstance(e, Hole):
        return bindings[e.name]
    if isinstance(e, TestOf):
        return TestOf(_fill_bexp(e.test, bindings))
    if isinstance(e, Seq):
        return Seq(_fill(e.first, bindings), _fill(e.second, bindings))
    if isinstance(e, Plus):
        return Plus(_fill(e.left, bindings), _fill(e.right, bindings))
    if isinstance(e, Star):
        return Star(_fill(e.body, bindings))
    if isinstance(e, IfThenElse):
        return IfThenElse(_fill_bexp(e.cond, bindings), _fill(e.then, bindings), _fill(e.orelse, bindings))
    if isinstance(e, While):
        return While(_fill_bexp(e.cond, bindings), _fill(e.body, bindings))
    return e


def instantiate(law: LawSchema, bindings: Mapping[str, Binding]) -> Instance:
    """
    Fill every hole of the law.

    Raises:
        LawBindingError: a metavariable is unbound or bound to the wrong kind
            of term (a test where a program is expected, or a KAT term in a
            GKAT law)
    """
    for name, kind in law.metavars.items():
        if name not in bindings:
            raise LawBindingError(f"{law.id}: metavariable {name} is not bound")
        value = bindings[name]
        if kind == TEST_HOLE:
            if not isinstance(value, BEXP_TYPES):
                raise LawBindingError(f"{law.id}: {name} must be bound to a test")
            continue
        if not isinstance(value, EXP_TYPES) or any(isinstance(n, Hole) for n in subterms(value)):
            raise LawBindingError(f"{law.id}: {name} must be bound to a program")
        if law.family is Family.GKAT and not is_gkat(value):
            raise LawBindingError(f"{law.id}: {name} must be a GKAT program")
        if law.family is Family.KAT and not is_kat(value):
            raise LawBindingError(f"{law.id}: {name} must be a KAT expression")
    premises = tuple(Premise(p.kind, _fill(p.lhs, bindings),
                             _fill(p.rhs, bindings) if p.rhs is not None else None)
                     for p in law.premises)
    return Instance(law, _fill(law.lhs, bindings), _fill(law.rhs, bindings), premises)


# ===== CHECKING =====

def _pipeline(law: LawSchema) -> Pipeline:
    return Pipeline.KAT if law.family is Family.KAT else Pipeline.GKAT


def premise_holds(premise: Premise, universe: Universe, pipeline: Pipeline,
                  limits: Optional[Limits] = None) -> bool:
    if premise.kind is PremiseKind.PRODUCTIVE:
        return is_zero(termination_condition(premise.lhs), universe, limits)
    mode = Mode.LANG if premise.kind is PremiseKind.EQUIV else Mode.INCL
    return check(premise.lhs, premise.rhs, mode, universe, pipeline, limits).equivalent


def check_law(law: LawSchema, bindings: Mapping[str, Binding], universe: Universe,
              mode: Optional[Mode] = None, limits: Optional[Limits] = None) -> LawResult:
    """
    Check one instance. Equations use `mode` (default LANG); inclusions are
    always checked as language inclusion.
    """
    limits = limits or default_limits()
    inst = instantiate(law, bindings)
    pipeline = _pipeline(law)
    for premise in inst.premises:
        if not premise_holds(premise, universe, pipeline, limits):
            return LawResult(law.id, False, None)
    if law.kind.is_inclusion:
        mode = Mode.INCL
    else:
        mode = Mode(mode or Mode.LANG)
    verdict = check(inst.lhs, inst.rhs, mode, universe, pipeline, limits)
    return LawResult(law.id, True, verdict.equivalent, verdict)


# ===== SAMPLING =====

def _random_program(law: LawSchema, universe: Universe, rng: random.Random, depth: int) -> Exp:
    if law.family is Family.KAT:
        return random_kat(universe, rng, depth)
    return random_gkat(universe, rng, depth)


def sample_bindings(law: LawSchema, universe: Universe, rng: random.Random,
                    depth: int = 4, limits: Optional[Limits] = None) -> Dict[str, Binding]:
    """
    Random well-kinded bindings for every metavariable.

    Fixed-point laws mostly get a g built to satisfy their premise, so the
    conclusion is actually exercised rather than vacuously skipped.
    """
    bindings: Dict[str, Binding] = {}
    for name, kind in law.metavars.items():
        if kind == TEST_HOLE:
            bindings[name] = random_bexp(universe, rng)
        else:
            bindings[name] = _random_program(law, universe, rng, depth)

    if law.is_conditional and law.family is Family.GKAT and rng.random() < 0.75:
        e, b, f = bindings["e"], bindings["b"], bindings["f"]
        if law.id == "gkat.unique-fixpoint":
            # aim for a productive body
            for _ in range(10):
                if is_zero(termination_condition(e), universe, limits):
                    break
                e = _random_program(law, universe, rng, depth)
            bindings["e"] = e
        loop = seq(While(b, e), f)
        # one unrolling of e^(b);f is a fixed point of x -> e;x +_b f
        bindings["g"] = IfThenElse(b, seq(e, loop), f) if rng.random() < 0.5 else loop
    elif law.is_conditional and law.family is Family.KAT and rng.random() < 0.75:
        e, f = bindings["e"], bindings["f"]
        if law.id == "kat.star-induction-left":
            bindings["g"] = Seq(Star(f), e)
        else:
            bindings["f"] = Seq(e, Star(bindings["g"]))
    return bindings


def unsound_regression_bindings() -> Dict[str, Binding]:
    """e = f = g = 1 and b = 1: the premise holds, the conclusion does not."""
    return {"e": SKIP, "f": SKIP, "g": SKIP, "b": ONE}


def _describe(bindings: Mapping[str, Binding]) -> str:
    parts = []
    for name, value in bindings.items():
        text = render_bexp(value, algebraic=True) if isinstance(value, BEXP_TYPES) else render_algebraic(value)
        parts.append(f"{name} := {text}")
    return ", ".join(parts)


def run_law(law: LawSchema, samples: int, seed: int, universe: Universe = DEFAULT_LAW_UNIVERSE,
            depth: int = 4, limits: Optional[Limits] = None) -> LawReport:
    """
    Check `samples` random instances. Sound laws report every failing
    instance; bisim-sound GKAT equations are also checked in bisim mode.
    An unsound law "fails" when no counterexample turns up.
    """
    limits = limits or default_limits()
    rng = random.Random(f"{seed}:{law.id}")
    report = LawReport(law.id)
    refuted = False
    batches = [unsound_regression_bindings()] if not law.sound else []
    batches += [sample_bindings(law, universe, rng, depth, limits) for _ in range(samples)]
    for bindings in batches:
        report.samples += 1
        result = check_law(law, bindings, universe, limits=limits)
        if not result.premises_hold:
            report.vacuous += 1
            continue
        if not result.holds:
            if law.sound:
                report.failures.append(f"{_describe(bindings)}: {explain(result.verdict)}")
            refuted = True
            continue
        if law.sound and law.bisim and law.family is Family.GKAT and law.kind is LawKind.EQUATION:
            strict = check_law(law, bindings, universe, mode=Mode.BISIM, limits=limits)
            if not strict.holds:
                report.bisim_failures.append(f"{_describe(bindings)}: {explain(strict.verdict)}")
    if not law.sound and not refuted:
        report.failures.append("no counterexample found for a law marked unsound")
    logger.info("law %s: %d samples, %d vacuous, %d failures",
                law.id, report.samples, report.vacuous, len(report.failures) + len(report.bisim_failures))
    return report


# ===== EXPORT =====

def law_to_model(law: LawSchema) -> LawModel:
    return LawModel(
        id=law.id,
        family=law.family.value,
        kind=law.kind.value,
        metavars=law.metavars,
        lhs=_show(law.lhs, law.family),
        rhs=_show(law.rhs, law.family),
        premises=[p.render(law.family) for p in law.premises],
        sound=law.sound,
        bisim=law.bisim,
        note=law.note,
    )


def catalogue_to_json(family: Optional[Union[Family, str]] = None) -> str:
    """Law catalogue as JSON; both families when `family` is None."""
    laws = LawRegistry.all() if family is None else list_laws(family)
    model = CatalogueModel(laws=[law_to_model(law) for law in laws])
    return json.dumps(model.model_dump(exclude_none=True), indent=2, ensure_ascii=False)
