# tests/test_acceptance.py
"""End-to-end scenarios over sample programs, fixtures and seeded corpora."""

import random
import time

import pytest

from gkatcheck.core.automata import accepts, build_gkat
from gkatcheck.core.config import Limits
from gkatcheck.core.equivalence import Mode, Pipeline, check
from gkatcheck.core.errors import ResourceLimitExceeded
from gkatcheck.core.export import load_fixture, to_dot
from gkatcheck.core.generators import loop_tower, random_bexp, random_corpus, random_gkat
from gkatcheck.core.laws import DEFAULT_LAW_UNIVERSE, LawRegistry, run_law
from gkatcheck.core.semantics import (
    is_partial_function, lang_bounded, membership, parse_guarded_string, random_interpretation,
    rel_sem_gkat,
)
from gkatcheck.core.syntax import (
    FAIL, ONE, SKIP, Act, IfThenElse, Not, Seq, Test, TestOf, Universe, While, size,
)
from gkatcheck.utils.file_utils import load_program

B = Universe(("b",), ("e",))
P = Universe((), ("p",))
b, e, p = Test("b"), Act("e"), Act("p")

# two tests keep the bounded oracle affordable at five actions
ORACLE_UNIVERSE = Universe(("t", "u"), ("p", "q", "r"))
ORACLE_LIMITS = Limits(oracle_max_strings=20_000)


def equivalent_variant(x, universe, rng):
    """A pair of programs that are equal by one of the sound rewriting laws."""
    c = random_bexp(universe, rng)
    choice = rng.randrange(5)
    if choice == 0:
        return IfThenElse(c, x, x), x
    if choice == 1:
        y = random_gkat(universe, rng, 3)
        return IfThenElse(c, x, y), IfThenElse(Not(c), y, x)
    if choice == 2:
        loop = While(c, x)
        return loop, IfThenElse(c, Seq(x, loop), SKIP)
    if choice == 3:
        return Seq(SKIP, x), x
    loop = While(c, x)
    return loop, Seq(loop, TestOf(Not(c)))


def bounded_languages(left, right, universe, top=5):
    """Oracle languages of both sides at the largest bound up to `top` that fits the ceiling."""
    for bound in range(top, -1, -1):
        try:
            return (lang_bounded(left, bound, universe, ORACLE_LIMITS),
                    lang_bounded(right, bound, universe, ORACLE_LIMITS))
        except ResourceLimitExceeded:
            continue
    raise AssertionError("oracle ceiling hit even without actions")


class TestFlagshipEquivalence:
    @pytest.mark.parametrize("left, right, pipeline", [
        ("nested-loops.gkat", "single-loop.gkat", Pipeline.GKAT),
        ("nested-loops.gkat", "single-loop.gkat", Pipeline.KAT),
        ("nested-loops.kat", "single-loop.kat", Pipeline.KAT),
    ])
    def test_loop_restructuring(self, programs_dir, left, right, pipeline):
        x, y = load_program(programs_dir / left), load_program(programs_dir / right)
        started = time.perf_counter()
        verdict = check(x.expr, y.expr, Mode.LANG, x.universe.merge(y.universe), pipeline)
        assert verdict.equivalent
        assert time.perf_counter() - started < 1.0


class TestIntroEquivalence:
    @pytest.mark.parametrize("mode", [Mode.LANG, Mode.BISIM])
    def test_unrolled_loop(self, mode):
        loop = While(b, e)
        assert check(IfThenElse(b, Seq(e, loop), SKIP), loop, mode, B).equivalent


class TestModeSeparation:
    def test_late_failure(self):
        assert check(Seq(p, FAIL), FAIL, Mode.LANG, P).equivalent
        verdict = check(Seq(p, FAIL), FAIL, Mode.BISIM, P)
        assert not verdict.equivalent
        d = verdict.witness.divergence
        assert d.kind == "stepVsStop" and d.stopped == "right"
        assert d.left.step[0] == "p"

    def test_divergent_loop_is_failure(self):
        assert check(While(ONE, p), FAIL, Mode.LANG, P).equivalent

    def test_loop_postcondition(self):
        loop = While(b, e)
        assert check(loop, Seq(loop, TestOf(Not(b))), Mode.LANG, B).equivalent


class TestUnsoundRuleRegression:
    @pytest.mark.parametrize("mode", [Mode.LANG, Mode.BISIM])
    def test_refuted(self, mode):
        verdict = check(SKIP, Seq(While(ONE, SKIP), SKIP), mode, Universe())
        assert not verdict.equivalent
        d = verdict.witness.divergence
        assert d.kind == "acceptMismatch"
        assert d.left.accept and not d.right.accept


@pytest.mark.slow
class TestLawSuite:
    @pytest.mark.parametrize("law_id", LawRegistry.ids())
    def test_two_hundred_instances(self, law_id):
        report = run_law(LawRegistry.get(law_id), samples=200, seed=0,
                         universe=DEFAULT_LAW_UNIVERSE, depth=4)
        assert report.ok, (report.failures + report.bisim_failures)[:3]


@pytest.mark.slow
class TestOracleDifferential:
    def test_five_hundred_pairs(self):
        rng = random.Random(2024)
        equivalent = inequivalent = 0
        for i in range(500):
            x = random_gkat(ORACLE_UNIVERSE, rng, 4)
            if i % 2:
                left, right = x, random_gkat(ORACLE_UNIVERSE, rng, 4)
            else:
                left, right = equivalent_variant(x, ORACLE_UNIVERSE, rng)
            verdict = check(left, right, Mode.LANG, ORACLE_UNIVERSE)
            if verdict.equivalent:
                equivalent += 1
                lang_left, lang_right = bounded_languages(left, right, ORACLE_UNIVERSE)
                assert lang_left == lang_right
            else:
                inequivalent += 1
                w = verdict.witness.string
                assert (membership(left, w, ORACLE_UNIVERSE)
                        != membership(right, w, ORACLE_UNIVERSE))
        assert equivalent >= 250 and inequivalent > 0


@pytest.mark.slow
class TestLinearity:
    def test_corpus_within_bound(self):
        worst = 0.0
        for x in random_corpus(DEFAULT_LAW_UNIVERSE, seed=0, count=500):
            states = len(build_gkat(x, DEFAULT_LAW_UNIVERSE, with_labels=False).reachable)
            assert states <= size(x) + 1
            worst = max(worst, states / size(x))
        assert worst <= 2.0


@pytest.mark.slow
class TestScaling:
    def test_loop_towers(self):
        universe = Universe(("b",), ("p",))
        for k in (50, 100, 200):
            tower = loop_tower(k)
            started = time.perf_counter()
            verdict = check(tower, tower, Mode.BISIM, universe, Pipeline.GKAT)
            elapsed = time.perf_counter() - started
            assert verdict.equivalent
            assert verdict.stats.pair_explorations <= 1.2 * verdict.stats.left_states
            if k == 200:
                assert elapsed < 1.0


@pytest.mark.slow
class TestRelationalSoundness:
    def test_equivalent_programs_denote_equal_relations(self):
        rng = random.Random(11)
        universe = DEFAULT_LAW_UNIVERSE
        pairs = []
        while len(pairs) < 50:
            left, right = equivalent_variant(random_gkat(universe, rng, 3), universe, rng)
            if check(left, right, Mode.LANG, universe).equivalent:
                pairs.append((left, right))
        interps = [random_interpretation(universe, rng.randint(1, 5), True, rng) for _ in range(50)]
        for interp in interps:
            for left, right in pairs:
                rel_left = rel_sem_gkat(left, interp)
                assert rel_left == rel_sem_gkat(right, interp)
                assert is_partial_function(rel_left)


class TestFixtureFidelity:
    def test_parity_automaton(self):
        automaton = load_fixture("parity")
        names = {n: a for a, n in automaton.atom_names}
        assert accepts(automaton, 0, parse_guarded_string("α p2 β", automaton.universe, names))
        assert not accepts(automaton, 0, parse_guarded_string("α", automaton.universe, names))
        lines = to_dot(automaton).splitlines()
        assert lines.count('  q0 -> q1 [label="α|p2"];') == 1
        assert lines.count('  q1 -> q0 [label="α|p2"];') == 1
