import random

import pytest

from ccmu.corpus import df_fixpoint_free
from ccmu.errors import FixpointPresent, NotDisjunctive, QuantifierPresent
from ccmu.lts import PointedModel
from ccmu.mc import check
from ccmu.search import enumerate_models
from ccmu.syntax import Atom, parse, render
from ccmu.tableau import build_tableau, find_marking, to_dot, verify_marking

from conftest import ACTIONS


class TestBuild:
    def test_atom_is_single_modal_leaf(self):
        t = build_tableau(parse("p"))
        assert len(t.nodes) == 1
        assert t.root.modal and t.root.rule is None

    def test_disjunction_rule(self):
        t = build_tableau(parse("p | q"))
        assert t.root.rule == "or"
        labels = [t.nodes[c].label for (_, c) in t.root.children]
        assert frozenset({Atom("p")}) in labels
        assert frozenset({Atom("q")}) in labels

    def test_cover_modal_children(self):
        t = build_tableau(parse("nabla_a {p}"))
        assert t.root.modal and t.root.rule == "mod"
        assert t.root.children == [("a", 1)]
        assert t.nodes[1].label == frozenset({Atom("p")})

    def test_conjunction_rule_single_child(self):
        t = build_tableau(parse("p & nabla_a {p}"))
        assert t.root.rule == "and"
        assert len(t.root.children) == 1

    def test_rejects_non_df(self):
        with pytest.raises(NotDisjunctive):
            build_tableau(parse("[a]p"))

    def test_rejects_fixpoints_and_quantifiers(self):
        with pytest.raises(FixpointPresent):
            build_tableau(parse("nu q. nabla_a {q}"))
        with pytest.raises(QuantifierPresent):
            build_tableau(parse("E{a;b} p"))

    def test_deterministic(self):
        f = parse("(p & nabla_a {p, true}) | (!p & nabla_b {})")
        assert to_dot(build_tableau(f)) == to_dot(build_tableau(f))


class TestMarking:
    def test_atom_marking(self, m0):
        t = build_tableau(parse("p"))
        marking = find_marking(t, PointedModel(m0, "s0"))
        assert marking is not None
        assert marking.pairs == frozenset({("s0", 0)})

    def test_contradiction_has_no_marking(self, m0, m1):
        t = build_tableau(parse("p & !p"))
        for pm in (PointedModel(m0, "s0"), PointedModel(m1, "s")):
            assert find_marking(t, pm) is None

    def test_cover_marking(self, m1):
        t = build_tableau(parse("nabla_a {p}"))
        marking = find_marking(t, PointedModel(m1, "s"))
        assert marking is not None
        assert ("s", 0) in marking.pairs
        assert ("t", 1) in marking.pairs

    def test_empty_cover_requires_no_successors(self, m0, m1):
        t = build_tableau(parse("nabla_a {}"))
        assert find_marking(t, PointedModel(m0, "s0")) is not None
        assert find_marking(t, PointedModel(m1, "s")) is None

    def test_extracted_markings_verify(self):
        rng = random.Random(31)
        corpus = [f for f in df_fixpoint_free()]
        models = [
            pm
            for pm in enumerate_models(ACTIONS, ("p",), 2)
        ]
        sample = rng.sample(models, 60)
        for f in corpus:
            t = build_tableau(f)
            for pm in sample:
                marking = find_marking(t, pm)
                if marking is not None:
                    assert verify_marking(marking, t, pm), render(f)

    def test_biconditional_with_model_checker_exhaustive_small(self):
        corpus = [f for f in df_fixpoint_free()]
        models = list(enumerate_models(("a", "b"), ("p",), 1))
        models += list(enumerate_models(("a", "b"), ("p",), 2))[8:140]
        for f in corpus:
            t = build_tableau(f)
            for pm in models:
                assert (find_marking(t, pm) is not None) == check(pm, f), render(f)


def test_dot_output_contains_labels(m1):
    t = build_tableau(parse("nabla_a {p}"))
    marking = find_marking(t, PointedModel(m1, "s"))
    dot = to_dot(t, marking)
    assert "digraph" in dot and "nabla_a" in dot and "states: s" in dot
