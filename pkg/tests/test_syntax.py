# tests/test_syntax.py

import pytest
from hypothesis import given

from gkatcheck.core.errors import ScopeError, UniverseMismatch
from gkatcheck.core.semantics import lang_bounded
from gkatcheck.core.atoms import eval_bexp
from gkatcheck.core.syntax import (
    FAIL, ONE, SKIP, ZERO, Act, And, IfThenElse, Not, Or, Plus, Seq, Star, Test, TestOf,
    Universe, While, check_scope, depth, embed, fold_tests, is_gkat, is_kat, seq, size,
    termination_condition,
)

from strategies import UNIVERSE, gkat_exps, kat_exps

b, c = Test("b"), Test("c")
p, q = Act("p"), Act("q")


class TestUniverse:
    def test_rejects_symbol_in_both_roles(self):
        with pytest.raises(ScopeError, match="both test and action"):
            Universe(("b",), ("b",))

    def test_rejects_duplicate_declaration(self):
        with pytest.raises(ScopeError, match="duplicate test"):
            Universe(("b", "b"), ())

    def test_merge_keeps_left_order_then_new_symbols(self):
        merged = Universe(("b",), ("p",)).merge(Universe(("c", "b"), ("q",)))
        assert merged == Universe(("b", "c"), ("p", "q"))

    def test_merge_rejects_role_clash(self):
        with pytest.raises(ScopeError, match="incompatible headers"):
            Universe(("b",), ()).merge(Universe((), ("b",)))

    def test_require_same(self):
        with pytest.raises(UniverseMismatch):
            Universe(("b",), ()).require_same(Universe(("c",), ()))

    def test_atom_count(self):
        assert Universe(("a", "b", "c"), ()).atom_count == 8


class TestEmbed:
    def test_branch(self):
        assert embed(IfThenElse(b, p, q)) == Plus(Seq(TestOf(b), p), Seq(TestOf(Not(b)), q))

    def test_loop(self):
        assert embed(While(b, p)) == Seq(Star(Seq(TestOf(b), p)), TestOf(Not(b)))

    def test_identity_on_tests(self):
        assert embed(SKIP) == SKIP

    def test_identity_on_kat(self):
        e = Star(Plus(p, Seq(TestOf(b), q)))
        assert embed(e) == e

    @given(gkat_exps())
    def test_result_is_kat_and_size_bounded(self, e):
        out = embed(e)
        assert is_kat(out)
        # a branch or a loop node expands into five KAT nodes
        assert size(out) <= 5 * size(e)


class TestTerminationCondition:
    def test_action_never_terminates(self):
        assert termination_condition(p) == ZERO

    def test_loop(self):
        assert termination_condition(While(ONE, p)) == Not(ONE)

    def test_test(self):
        assert termination_condition(TestOf(b)) == b

    def test_branch_and_sequence(self):
        e = Seq(IfThenElse(b, SKIP, p), TestOf(c))
        assert termination_condition(e) == And(Or(And(b, ONE), And(Not(b), ZERO)), c)

    def test_rejects_kat(self):
        with pytest.raises(TypeError):
            termination_condition(Star(p))

    @given(gkat_exps())
    def test_matches_zero_action_language(self, e):
        words = lang_bounded(e, 0, UNIVERSE).strings
        cond = termination_condition(e)
        for atom in range(UNIVERSE.atom_count):
            holds = eval_bexp(cond, atom, UNIVERSE)
            assert holds == any(w.first == atom for w in words)


class TestSize:
    @pytest.mark.parametrize("e, expected", [
        (p, 1),
        (While(b, p), 2),
        (Seq(p, q), 3),
        (TestOf(Or(b, And(c, Not(b)))), 1),
    ])
    def test_counts_program_nodes(self, e, expected):
        assert size(e) == expected

    def test_depth(self):
        assert depth(p) == 1
        assert depth(While(b, Seq(p, q))) == 3


class TestSeq:
    def test_unit_and_zero(self):
        assert seq(SKIP, p) == p
        assert seq(FAIL, p) == FAIL

    def test_keeps_trailing_fail(self):
        assert seq(p, FAIL) == Seq(p, FAIL)

    def test_reassociates_right(self):
        assert seq(Seq(p, q), p) == Seq(p, Seq(q, p))


class TestFragments:
    def test_is_gkat(self):
        assert is_gkat(While(b, IfThenElse(c, p, q)))
        assert not is_gkat(Star(p))

    def test_is_kat(self):
        assert is_kat(Plus(p, Star(q)))
        assert not is_kat(While(b, p))

    def test_check_scope_reports_undeclared(self):
        universe = Universe(("b",), ("p",))
        check_scope(While(b, p), universe)
        with pytest.raises(ScopeError, match="undeclared test symbol c"):
            check_scope(While(c, p), universe)
        with pytest.raises(ScopeError, match="undeclared action symbol q"):
            check_scope(Seq(p, q), universe)


class TestFoldTests:
    def test_folds_test_pairs(self):
        assert fold_tests(Plus(TestOf(b), TestOf(c))) == TestOf(Or(b, c))
        assert fold_tests(Seq(TestOf(b), TestOf(c))) == TestOf(And(b, c))

    def test_leaves_mixed_nodes(self):
        e = Seq(TestOf(b), p)
        assert fold_tests(e) == e

    @given(kat_exps())
    def test_idempotent(self, e):
        once = fold_tests(e)
        assert fold_tests(once) == once
