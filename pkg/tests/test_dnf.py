import random

import pytest
from hypothesis import given, settings

from ccmu.dnf import cover_form, ensure_df, to_df
from ccmu.errors import FixpointPresent, NotDisjunctive, QuantifierPresent
from ccmu.mc import extension
from ccmu.syntax import is_df, parse, render

from conftest import formulas, random_model


class TestToDf:
    def test_diamond(self):
        assert to_df(parse("<a>p")) == parse("nabla_a {p, true}")

    def test_box(self):
        assert to_df(parse("[a]p")) == parse("nabla_a {} | nabla_a {p}")

    def test_cover_meet(self):
        f = parse("<a>p & [a]q")
        d = to_df(f)
        assert is_df(d)
        rng = random.Random(0)
        for _ in range(40):
            m = random_model(rng, rng.randint(1, 3))
            assert extension(m, f) == extension(m, d)

    def test_rejects_fixpoints_and_quantifiers(self):
        with pytest.raises(FixpointPresent):
            to_df(parse("mu q. [a]q"))
        with pytest.raises(QuantifierPresent):
            to_df(parse("E{a;b} p"))

    @settings(max_examples=150, deadline=None)
    @given(formulas(max_leaves=8, with_quantifiers=False))
    def test_preserves_semantics_and_lands_in_df(self, f):
        from ccmu.syntax import has_fixpoint

        if has_fixpoint(f):
            return
        d = to_df(f)
        assert is_df(d)
        m = random_model(random.Random(99), 3, atoms=("p", "q", "r", "x", "y"))
        assert extension(m, f) == extension(m, d)


class TestEnsureDf:
    def test_passthrough(self):
        f = parse("p & nabla_a {p}")
        assert ensure_df(f) is f

    def test_set_deduplication(self):
        assert ensure_df(parse("<a>true")) == parse("nabla_a {true}")

    def test_fixpoint_non_df_rejected(self):
        # the bound variable as a conjunct breaks disjunctive syntax, and
        # fixpoints cannot be reconverted
        with pytest.raises(NotDisjunctive):
            ensure_df(parse("mu q. (q & p)"))

    def test_df_fixpoint_passthrough(self):
        f = parse("nu q. (p & nabla_a {q})")
        assert ensure_df(f) is f


class TestCoverForm:
    def test_rewrites_modalities(self):
        f = parse("nu q. (p & [a]q)")
        g = cover_form(f)
        assert g == parse("nu q. (p & (nabla_a {} | nabla_a {q}))")

    def test_preserves_semantics(self):
        rng = random.Random(1)
        for text in ["[a]p & <b>q", "nu x. (p & [a]x)", "mu x. (p | <b>x)"]:
            f = parse(text)
            g = cover_form(f)
            for _ in range(15):
                m = random_model(rng, rng.randint(1, 3))
                assert extension(m, f) == extension(m, g), text
