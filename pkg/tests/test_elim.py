import random

import pytest

from ccmu.corpus import DF_CORPUS, quantified_corpus
from ccmu.elim import (
    Limits,
    V_FALSE,
    V_TRUE,
    check_cc,
    eliminate,
    eliminate_one,
    simplify,
    undetermined,
    unsat_k,
)
from ccmu.errors import EmptySignature, NotDisjunctive, SideConditionUnknown
from ccmu.lts import PointedModel
from ccmu.mc import extension
from ccmu.syntax import (
    Exists,
    TRUE,
    FALSE,
    has_quantifier,
    parse,
    render,
    signature,
    validate_positivity,
)

from conftest import random_model


class TestVerdict:
    def test_values(self):
        assert V_TRUE.is_true() and not V_TRUE.is_false()
        assert V_FALSE.is_false()
        u = undetermined("BoundExhausted", "why")
        assert u.is_undetermined() and u.reason == "BoundExhausted"


class TestUnsatK:
    def test_bottom(self):
        assert unsat_k(FALSE).is_true()

    def test_diamond_top_satisfiable(self):
        assert unsat_k(parse("<a>true")).is_false()

    def test_fixpoint_stays_undetermined(self):
        v = unsat_k(parse("mu q. <a>q"))
        assert v.is_undetermined()
        assert v.reason == "BoundExhausted"

    def test_fixpoint_refuted_by_model(self):
        assert unsat_k(parse("mu q. (p | <a>q)")).is_false()

    def test_exact_modal_unsat(self):
        assert unsat_k(parse("<a>p & [a]!p & [a]p")).is_true()
        assert unsat_k(parse("nabla_a {p} & nabla_a {}")).is_undetermined() is False

    def test_depth_cap(self):
        deep = parse("<a><a><a><a>p")
        assert unsat_k(deep, Limits(sat_depth_cap=2)).is_undetermined()

    def test_free_variables_act_as_atoms(self):
        assert unsat_k(parse("z & !z")).is_true()
        assert unsat_k(parse("z | p")).is_false()


class TestEliminateOne:
    def test_propositional_passthrough(self):
        assert eliminate_one("a", "b", parse("p")) == parse("p")

    def test_covariant_cover(self):
        assert eliminate_one("a", "b", parse("nabla_a {true}")) == parse("[a]true")

    def test_contravariant_cover(self):
        assert eliminate_one("a", "b", parse("nabla_b {p}")) == parse("<b>p")

    def test_greatest_fixpoint_crossing(self):
        got = eliminate_one("a", "b", parse("nu q. (p & (nabla_a {} | nabla_a {q}))"))
        assert got == parse("nu q. (p & ([a]false | [a]q))")

    def test_empty_covariant_cover_is_box_bottom(self):
        assert eliminate_one("a", "b", parse("nabla_a {}")) == parse("[a]false")

    def test_empty_contravariant_cover_is_top(self):
        assert eliminate_one("a", "b", parse("nabla_b {}")) == TRUE

    def test_unsat_member_collapses(self):
        assert eliminate_one("a", "b", parse("nabla_a {p & !p, p}")) == FALSE

    def test_bivariant_cover_memberwise(self):
        got = eliminate_one("a", "b", parse("nabla_c {p}"))
        assert got == parse("nabla_c {p}")

    def test_side_condition_failure_raises(self):
        # the member is semantically unsatisfiable but carries a fixpoint,
        # so the bounded oracle cannot confirm it either way
        with pytest.raises(SideConditionUnknown):
            eliminate_one("a", "b", parse("nabla_a {mu q. nabla_a {q}}"))

    def test_non_reducible_conjunction_raises(self):
        with pytest.raises(NotDisjunctive):
            eliminate_one("a", "b", parse("nabla_a {p} & nabla_a {true}"))

    def test_polarity_preserved(self):
        out = eliminate_one("a", "b", parse("nu q. (p & (nabla_a {} | nabla_a {q}))"))
        validate_positivity(out)


class TestEliminate:
    def test_set_signature_chain(self):
        assert eliminate(Exists(signature(["a", "c"], ["b"]), parse("p"))) == parse("p")

    def test_contravariant_diamond(self):
        assert eliminate(parse("E{a;b} <b>p")) == parse("<b>p")

    def test_universal_dual(self):
        assert eliminate(parse("A{a;b} p")) == parse("p")

    def test_box_like_output_simplifies(self):
        assert eliminate(parse("E{a;b} <a>true")) == TRUE

    def test_quantifier_free_output_on_corpus(self):
        for qf in quantified_corpus():
            out = eliminate(qf)
            assert not has_quantifier(out)
            validate_positivity(out)

    def test_nested_quantifiers_innermost_first(self):
        out = eliminate(parse("E{a;b} E{b;a} p"))
        assert out == parse("p")

    def test_empty_signature_rejected(self):
        with pytest.raises(EmptySignature):
            eliminate(parse("E{a;}p"))


class TestCheckCc:
    def test_translation_true(self, m0):
        assert check_cc(PointedModel(m0, "s0"), parse("E{a;b} p")).is_true()

    def test_covariant_addition(self, m0):
        assert check_cc(PointedModel(m0, "s0"), parse("E{a;b} <a>true")).is_true()

    def test_contravariant_must_preexist(self, m0):
        assert check_cc(PointedModel(m0, "s0"), parse("E{a;b} <b>true")).is_false()

    def test_fallback_on_empty_signature(self, m1):
        pm = PointedModel(m1, "s")
        f = parse("E{;b} <a>p")
        v = check_cc(pm, f)
        assert v.is_undetermined()
        v2 = check_cc(pm, f, fallback_bound=2)
        assert v2.is_true()

    def test_fallback_exhaustion(self, m0):
        pm = PointedModel(m0, "s0")
        f = parse("E{;b} <b>true")
        v = check_cc(pm, f, fallback_bound=2)
        assert v.is_undetermined()
        assert v.reason == "BoundExhausted"

    def test_universal_fallback(self, m0):
        pm = PointedModel(m0, "s0")
        # every ({a},{b})-refinement keeps the atom at the root
        v = check_cc(pm, parse("A{;b} p"), fallback_bound=2)
        assert v.value in ("true", "undetermined")
        v2 = check_cc(pm, parse("A{;b} !p"), fallback_bound=2)
        assert v2.is_false()


class TestSimplify:
    def test_folds(self):
        assert simplify(parse("p & true")) == parse("p")
        assert simplify(parse("p | true")) == TRUE
        assert simplify(parse("p & !p")) == FALSE
        assert simplify(parse("<b>true & <b>p")) == parse("<b>p")
        assert simplify(parse("[a]true")) == TRUE
        assert simplify(parse("mu q. p")) == parse("p")
        assert simplify(parse("mu q. q")) == FALSE
        assert simplify(parse("nu q. q")) == TRUE

    def test_preserves_semantics(self):
        rng = random.Random(23)
        corpus = [
            "p & (true & <a>true)",
            "nabla_a {p, false}",
            "[a](p | false) & <b>true & <b>q",
            "mu x. ((p & true) | <a>x)",
            "nu x. (p & [a](x | false))",
            "!(!p)",
        ]
        for text in corpus:
            f = parse(text)
            s = simplify(f)
            for _ in range(20):
                m = random_model(rng, rng.randint(1, 4))
                assert extension(m, f) == extension(m, s), text

    def test_preserves_corpus_semantics(self):
        rng = random.Random(24)
        for f in DF_CORPUS:
            s = simplify(f)
            for _ in range(6):
                m = random_model(rng, rng.randint(1, 3), atoms=("p",))
                assert extension(m, f) == extension(m, s), render(f)
