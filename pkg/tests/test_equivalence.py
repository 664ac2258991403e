# tests/test_equivalence.py

import json

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from gkatcheck.core.automata import build_gkat
from gkatcheck.core.equivalence import (
    Mode, Pipeline, bisim, build_automaton, check, explain, includes, verdict_to_json,
)
from gkatcheck.core.errors import UniverseMismatch, UsageError, VerdictError
from gkatcheck.core.kat_automata import build_kat
from gkatcheck.core.semantics import lang_bounded, membership
from gkatcheck.core.syntax import (
    FAIL, ONE, SKIP, Act, IfThenElse, Not, Plus, Seq, Test, TestOf, Universe, While,
)
from gkatcheck.utils.file_utils import load_program

from strategies import UNIVERSE, gkat_exps

P = Universe((), ("p", "q"))
B = Universe(("b",), ("e",))
b = Test("b")
e, p, q = Act("e"), Act("p"), Act("q")


class TestModes:
    def test_unrolled_loop(self):
        unrolled = IfThenElse(b, Seq(e, While(b, e)), SKIP)
        loop = While(b, e)
        assert check(unrolled, loop, Mode.LANG, B)
        assert check(unrolled, loop, Mode.BISIM, B)

    def test_late_failure_is_only_language_equivalent(self):
        late = Seq(p, FAIL)
        assert check(late, FAIL, Mode.LANG, P).equivalent
        verdict = check(late, FAIL, Mode.BISIM, P)
        assert not verdict.equivalent
        d = verdict.witness.divergence
        assert verdict.witness.trace == ()
        assert (d.kind, d.stopped) == ("stepVsStop", "right")
        assert explain(verdict) == "at {}: left steps with p, right rejects"

    def test_infinite_loop_is_failure(self):
        spin = While(ONE, p)
        assert check(spin, FAIL, Mode.LANG, P).equivalent
        assert not check(spin, FAIL, Mode.BISIM, P).equivalent

    def test_loop_postcondition(self):
        loop = While(b, e)
        assert check(loop, Seq(loop, TestOf(Not(b))), Mode.LANG, B).equivalent
        assert check(loop, Seq(loop, TestOf(Not(b))), Mode.BISIM, B).equivalent

    @pytest.mark.parametrize("mode", [Mode.LANG, Mode.BISIM])
    def test_unproductive_fixpoint_is_refuted(self, mode):
        verdict = check(SKIP, Seq(While(ONE, SKIP), SKIP), mode, B)
        assert not verdict.equivalent
        d = verdict.witness.divergence
        assert d.kind == "acceptMismatch"
        assert d.left.accept and not d.right.accept

    def test_mode_accepts_strings(self):
        assert check(p, p, "lang", P, "gkat").mode is Mode.LANG


class TestWitnesses:
    def test_trace_and_separating_string(self):
        verdict = check(Seq(p, p), Seq(p, q), Mode.LANG, P)
        w = verdict.witness
        assert w.trace == ((0, "p"),)
        assert w.divergence.kind == "actionMismatch"
        assert w.string.format(P) == "{} p {} p {}"
        assert w.contained_in == "left"
        assert explain(verdict) == (
            "after {} p, at {}: left steps with p, right steps with q\n"
            "guarded string {} p {} p {} is in the left language only"
        )

    def test_right_side_string(self):
        verdict = check(FAIL, p, Mode.LANG, P)
        assert verdict.witness.divergence.stopped == "left"
        assert verdict.witness.string.format(P) == "{} p {}"
        assert verdict.witness.contained_in == "right"

    def test_acceptance_string(self):
        verdict = check(SKIP, Seq(While(ONE, SKIP), SKIP), Mode.LANG, B)
        assert explain(verdict) == (
            "at {}: left accepts, right does not\n"
            "guarded string {} is in the left language only"
        )

    def test_explain_equivalent(self):
        with pytest.raises(VerdictError):
            explain(check(p, p, Mode.LANG, P))

    @settings(max_examples=100)
    @given(gkat_exps(), gkat_exps())
    def test_separating_string_is_confirmed_by_oracle(self, left, right):
        verdict = check(left, right, Mode.LANG, UNIVERSE)
        if verdict.equivalent:
            assert lang_bounded(left, 2, UNIVERSE) == lang_bounded(right, 2, UNIVERSE)
            return
        w = verdict.witness.string
        assert w is not None
        in_left = membership(left, w, UNIVERSE)
        in_right = membership(right, w, UNIVERSE)
        assert in_left != in_right
        assert in_left == (verdict.witness.contained_in == "left")

    @given(gkat_exps(), gkat_exps())
    def test_bisimilar_implies_language_equivalent(self, left, right):
        if check(left, right, Mode.BISIM, UNIVERSE):
            assert check(left, right, Mode.LANG, UNIVERSE)


class TestInclusion:
    def test_included(self):
        assert check(p, Plus(p, q), Mode.INCL, P).equivalent

    def test_not_included(self):
        verdict = check(Plus(p, q), p, Mode.INCL, P)
        assert not verdict.equivalent
        assert verdict.witness.divergence.kind == "actionMismatch"
        assert verdict.witness.string.format(P) == "{} q {}"
        assert explain(verdict).endswith("guarded string {} q {} is in the left language but not the right")

    def test_acceptance_inclusion(self):
        assert check(FAIL, SKIP, Mode.INCL, P).equivalent
        verdict = check(SKIP, FAIL, Mode.INCL, P)
        assert verdict.witness.string.format(P) == "{}"

    @given(st.data())
    def test_equivalence_is_mutual_inclusion(self, data):
        left, right = data.draw(gkat_exps()), data.draw(gkat_exps())
        both = check(left, right, Mode.INCL, UNIVERSE) and check(right, left, Mode.INCL, UNIVERSE)
        assert bool(both) == check(left, right, Mode.LANG, UNIVERSE).equivalent

    def test_direct_call(self):
        a1, a2 = build_kat(p, P), build_kat(Plus(p, q), P)
        assert includes(a1, 0, a2, 0).equivalent


class TestEngine:
    def test_universe_mismatch(self):
        a1 = build_gkat(p, P)
        a2 = build_gkat(e, B)
        with pytest.raises(UniverseMismatch):
            bisim(a1, 0, a2, 0)

    def test_pipeline_selection(self):
        assert build_automaton(While(b, e), B).labels is None
        assert build_automaton(Plus(e, e), B).n_states == 2
        with pytest.raises(UsageError, match="gkat pipeline needs GKAT input"):
            build_automaton(Plus(e, e), B, Pipeline.GKAT)

    def test_stats(self):
        verdict = check(While(b, e), While(b, e), Mode.BISIM, B)
        assert verdict.stats.left_states == verdict.stats.right_states == 1
        assert verdict.stats.pair_explorations == 1

    def test_json(self):
        payload = json.loads(verdict_to_json(check(Seq(p, FAIL), FAIL, Mode.BISIM, P)))
        assert payload == {
            "equivalent": False,
            "mode": "bisim",
            "witness": {
                "trace": [],
                "divergence": {"kind": "stepVsStop", "atom": "{}", "stopped": "right"},
            },
        }

    def test_json_language_witness(self):
        payload = json.loads(verdict_to_json(check(Seq(p, p), Seq(p, q), Mode.LANG, P), with_stats=True))
        witness = payload["witness"]
        assert witness["trace"] == [["{}", "p"]]
        assert witness["divergence"] == {"kind": "actionMismatch", "atom": "{}",
                                         "left": "steps with p", "right": "steps with q"}
        assert witness["string"] == "{} p {} p {}"
        assert witness["containedIn"] == "left"
        assert set(payload["stats"]) == {"left_states", "right_states", "pair_explorations", "unions"}


class TestSamplePrograms:
    @pytest.mark.parametrize("kind, pipeline", [
        ("gkat", Pipeline.GKAT), ("gkat", Pipeline.KAT), ("kat", Pipeline.KAT),
    ])
    def test_nested_loops_equal_single_loop(self, programs_dir, kind, pipeline):
        left = load_program(programs_dir / f"nested-loops.{kind}")
        right = load_program(programs_dir / f"single-loop.{kind}")
        universe = left.universe.merge(right.universe)
        assert check(left.expr, right.expr, Mode.LANG, universe, pipeline).equivalent

    def test_program_kinds_agree(self, programs_dir):
        gkat = load_program(programs_dir / "nested-loops.gkat")
        kat = load_program(programs_dir / "single-loop.kat")
        assert check(gkat.expr, kat.expr, Mode.LANG, gkat.universe, Pipeline.KAT).equivalent
