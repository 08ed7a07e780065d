import random

import pytest
from hypothesis import given, settings

from ccmu.errors import QuantifierPresent, UnboundVariable
from ccmu.lts import PointedModel, make_model
from ccmu.mc import check, extension
from ccmu.oracles import subset_extension
from ccmu.syntax import nnf, parse, render

from conftest import ACTIONS, formulas, random_model

QFREE = [
    "p",
    "!p",
    "p & q",
    "[a]p",
    "<a>p",
    "nabla_a {p, true}",
    "nabla_b {}",
    "mu x. (p | <a>x)",
    "nu x. (p & [a]x)",
    "mu x. (q | nabla_a {x, true})",
    "nu x. mu y. ((p & [a]x) | <b>y)",
]


class TestExtensionExamples:
    def test_atom(self, m0):
        assert extension(m0, parse("p")) == frozenset({"s0"})

    def test_empty_least_fixpoint(self, m0, m1, m2):
        for m in (m0, m1, m2):
            assert extension(m, parse("mu q. <a>q")) == frozenset()

    def test_greatest_fixpoint_on_cycle(self, m2):
        # brute-force subset-enumeration oracle fixes the expected value
        assert subset_extension(m2, parse("nu q. <a>q")) == frozenset({"s", "t"})
        assert extension(m2, parse("nu q. <a>q")) == frozenset({"s", "t"})

    def test_reachability_oracle(self, m2):
        # mu q.(p | <a>q) is a-reachability of a p-state
        def reach_p(m):
            good = set(m.valuation["p"])
            changed = True
            while changed:
                changed = False
                for a in ["a"]:
                    for (u, v) in m.transitions[a]:
                        if v in good and u not in good:
                            good.add(u)
                            changed = True
            return frozenset(good)

        f = parse("mu q. (p | <a>q)")
        assert extension(m2, f) == reach_p(m2)
        assert check(PointedModel(m2, "s"), f)


class TestCheckExamples:
    def test_tautology(self, m0):
        assert check(PointedModel(m0, "s0"), parse("p | !p"))

    def test_diamond(self, m1):
        assert check(PointedModel(m1, "s"), parse("<a>true"))
        assert not check(PointedModel(m1, "t"), parse("<a>true"))


class TestErrors:
    def test_quantifier_rejected(self, m0):
        with pytest.raises(QuantifierPresent):
            check(PointedModel(m0, "s0"), parse("E{a;b} p"))

    def test_unbound_variable(self, m0):
        with pytest.raises(UnboundVariable):
            extension(m0, parse("z"))

    def test_environment_binds_variable(self, m1):
        got = extension(m1, parse("<a>z"), {"z": frozenset({"t"})})
        assert got == frozenset({"s"})


class TestOracleEquivalence:
    def test_exhaustive_small(self):
        """Subset-enumeration semantics on every 1..2-state single-action
        model, for each fixpoint corpus formula."""
        forms = [parse(t) for t in ["mu x. (p | <a>x)", "nu x. (p & [a]x)",
                                    "mu x. <a>x", "nu x. <a>x"]]
        states_sets = [["s0"], ["s0", "s1"]]
        for states in states_sets:
            pairs = [(u, v) for u in states for v in states]
            for tbits in range(1 << len(pairs)):
                trans = [
                    (u, "a", v)
                    for i, (u, v) in enumerate(pairs)
                    if tbits >> i & 1
                ]
                for vbits in range(1 << len(states)):
                    val = {"p": [s for i, s in enumerate(states) if vbits >> i & 1]}
                    m = make_model(["a"], states, trans, val)
                    for f in forms:
                        assert extension(m, f) == subset_extension(m, f), render(f)

    def test_random_models(self):
        rng = random.Random(5)
        forms = [parse(t) for t in QFREE]
        for _ in range(30):
            m = random_model(rng, rng.randint(1, 4))
            for f in forms:
                assert extension(m, f) == subset_extension(m, f), render(f)

    def test_monotonicity_mu_below_nu(self):
        rng = random.Random(6)
        body = parse("p | <a>z")
        for _ in range(40):
            m = random_model(rng, rng.randint(1, 5))
            mu = extension(m, parse("mu z. (p | <a>z)"))
            nu = extension(m, parse("nu z. (p | <a>z)"))
            assert mu <= nu


class TestBisimulationInvariance:
    def test_check_agrees_on_bisimilar_points(self):
        """Satisfaction is invariant under bisimilarity: points related by
        the empty-signature largest refinement agree on the corpus."""
        from ccmu.ccref import largest_refinement
        from ccmu.corpus import DF_CORPUS
        from ccmu.lts import copy_rename

        rng = random.Random(8)
        forms = [parse(t) for t in QFREE] + list(DF_CORPUS)[:20]
        pairs_checked = 0
        for _ in range(10):
            m = random_model(rng, rng.randint(1, 4), atoms=("p", "q"))
            n = copy_rename(PointedModel(m, m.states[0]), "_c").model
            rel = largest_refinement(m, n)
            assert rel.pairs, "a copy always has bisimilar pairs"
            for (u, v) in sorted(rel.pairs):
                pm, pn = PointedModel(m, u), PointedModel(n, v)
                for f in forms:
                    assert check(pm, f) == check(pn, f), render(f)
                pairs_checked += 1
        assert pairs_checked > 0


class TestCoverRecovery:
    def test_box_and_diamond_through_covers(self):
        rng = random.Random(7)
        for _ in range(30):
            m = random_model(rng, rng.randint(1, 4))
            assert extension(m, parse("[b]p")) == extension(
                m, parse("nabla_b {} | nabla_b {p}")
            )
            assert extension(m, parse("<b>p")) == extension(
                m, parse("nabla_b {p, true}")
            )


@settings(max_examples=120, deadline=None)
@given(formulas(with_quantifiers=False))
def test_nnf_preserves_extension(f):
    m = make_model(
        ACTIONS,
        ["s", "t", "u"],
        [("s", "a", "t"), ("t", "b", "u"), ("u", "a", "s"), ("s", "b", "s")],
        {"p": ["s"], "q": ["t"], "r": ["u"], "x": [], "y": ["t", "u"]},
    )
    assert extension(m, f) == extension(m, nnf(f))
