import random
from itertools import combinations

import pytest

from ccmu.ccref import largest_refinement, refines, verify_relation
from ccmu.errors import AlphabetMismatch
from ccmu.lts import Model, PointedModel, make_model
from ccmu.oracles import naive_simulation, partition_refinement_bisim
from ccmu.syntax import signature

from conftest import ACTIONS, random_model

SIG_AB = signature(["a"], ["b"])
SIG_NONE = signature([], [])


def _all_relations(m, n):
    pairs = [(u, v) for u in m.states for v in n.states]
    for r in range(len(pairs) + 1):
        for combo in combinations(pairs, r):
            yield frozenset(combo)


def _refines_oracle(pm, pn, p_set, sig):
    """Exhaustive check over every candidate relation."""
    for rel in _all_relations(pm.model, pn.model):
        if (pm.point, pn.point) in rel and verify_relation(
            rel, pm.model, pn.model, p_set, sig
        ):
            return True
    return False


class TestVerifyRelation:
    def test_empty_relation_vacuous(self, m0, m1):
        assert verify_relation(frozenset(), m0, m1, (), SIG_AB)

    def test_identity_relation(self, m2):
        ident = frozenset((s, s) for s in m2.states)
        assert verify_relation(ident, m2, m2, (), SIG_AB)
        assert verify_relation(ident, m2, m2, (), SIG_NONE)

    def test_forth_violation(self):
        m = make_model(ACTIONS, ["s", "t"], [("s", "a", "t")], {})
        n = make_model(ACTIONS, ["u"], [], {})
        assert not verify_relation({("s", "u")}, m, n, (), SIG_AB)


class TestLargestRefinement:
    def test_reflexive_pair_included(self, m0):
        rel = largest_refinement(m0, m0, (), SIG_NONE)
        assert ("s0", "s0") in rel.pairs

    def test_contravariant_forth_exemption(self):
        # left has a contravariant move the right lacks: forth exempts it
        m = make_model(ACTIONS, ["s", "t"], [("s", "b", "t")], {})
        n = make_model(ACTIONS, ["u"], [], {})
        rel = largest_refinement(m, n, (), SIG_AB)
        assert ("s", "u") in rel.pairs

    def test_back_requires_contravariant_match(self):
        m = make_model(ACTIONS, ["s"], [], {})
        n = make_model(ACTIONS, ["u", "v"], [("u", "b", "v")], {})
        rel = largest_refinement(m, n, (), SIG_AB)
        assert ("s", "u") not in rel.pairs

    def test_alphabet_mismatch(self, m0):
        other = make_model(("a",), ["x"], [], {})
        with pytest.raises(AlphabetMismatch):
            largest_refinement(m0, other)

    def test_result_verifies(self):
        rng = random.Random(11)
        for _ in range(25):
            m = random_model(rng, rng.randint(1, 5))
            n = random_model(rng, rng.randint(1, 5))
            rel = largest_refinement(m, n, ("q",), SIG_AB)
            assert verify_relation(rel.pairs, m, n, ("q",), SIG_AB)


class TestRefines:
    def test_reflexivity_all_signatures(self, m1):
        pm = PointedModel(m1, "s")
        for sig in (SIG_NONE, SIG_AB, signature(["b"], ["a"]),
                    signature(["a", "b"], []), signature([], ["a", "b"])):
            assert refines(pm, pm, (), sig)

    def test_fresh_covariant_successor_allowed(self):
        # the implementation may add covariant transitions unmatched
        spec = make_model(ACTIONS, ["s0"], [], {"p": ["s0"]})
        impl = make_model(
            ACTIONS, ["u", "v"], [("u", "a", "v")], {"p": ["u", "v"]}
        )
        got = refines(PointedModel(spec, "s0"), PointedModel(impl, "u"), (), SIG_AB)
        oracle = _refines_oracle(
            PointedModel(spec, "s0"), PointedModel(impl, "u"), (), SIG_AB
        )
        assert got and oracle

    def test_matches_exhaustive_relation_oracle(self):
        rng = random.Random(12)
        for _ in range(20):
            m = random_model(rng, rng.randint(1, 2), atoms=("p",))
            n = random_model(rng, rng.randint(1, 3), atoms=("p",))
            pm, pn = PointedModel(m, m.states[0]), PointedModel(n, n.states[0])
            for sig in (SIG_AB, SIG_NONE, signature(["a", "b"], [])):
                assert refines(pm, pn, (), sig) == _refines_oracle(pm, pn, (), sig)


class TestSpecialCases:
    def test_bisimilarity_equals_partition_refinement(self):
        rng = random.Random(13)
        for _ in range(15):
            m = random_model(rng, rng.randint(1, 10))
            n = random_model(rng, rng.randint(1, 10))
            assert largest_refinement(m, n, (), SIG_NONE).pairs == (
                partition_refinement_bisim(m, n)
            )

    def test_full_simulation_equals_naive_oracle(self):
        rng = random.Random(14)
        full = frozenset(ACTIONS)
        for _ in range(15):
            m = random_model(rng, rng.randint(1, 8))
            n = random_model(rng, rng.randint(1, 8))
            got = largest_refinement(m, n, (), signature(full, ())).pairs
            assert got == naive_simulation(m, n, full)

    def test_plain_refinement_is_reversed_simulation(self):
        rng = random.Random(15)
        full = frozenset(ACTIONS)
        for _ in range(15):
            m = random_model(rng, rng.randint(1, 6))
            n = random_model(rng, rng.randint(1, 6))
            got = largest_refinement(m, n, (), signature((), full)).pairs
            via_sim = naive_simulation(n, m, full)
            assert got == frozenset((u, v) for (v, u) in via_sim)


class TestStructuralProperties:
    def test_signature_reversal_identity(self):
        rng = random.Random(16)
        for _ in range(20):
            m = random_model(rng, rng.randint(1, 4), atoms=("p",))
            n = random_model(rng, rng.randint(1, 4), atoms=("p",))
            fwd = largest_refinement(m, n, (), SIG_AB).pairs
            rev = largest_refinement(n, m, (), signature(["b"], ["a"])).pairs
            assert fwd == frozenset((u, v) for (v, u) in rev)

    def test_monotone_in_restriction(self):
        rng = random.Random(17)
        for _ in range(20):
            m = random_model(rng, rng.randint(1, 5))
            n = random_model(rng, rng.randint(1, 5))
            small = largest_refinement(m, n, (), SIG_AB).pairs
            big = largest_refinement(m, n, ("p",), SIG_AB).pairs
            bigger = largest_refinement(m, n, ("p", "q"), SIG_AB).pairs
            assert small <= big <= bigger

    def test_state_order_independence(self):
        rng = random.Random(18)
        for _ in range(10):
            m = random_model(rng, 4)
            n = random_model(rng, 4)
            rel = largest_refinement(m, n, (), SIG_AB).pairs
            perm = list(n.states)
            rng.shuffle(perm)
            shuffled = Model(
                alphabet=n.alphabet,
                states=tuple(perm),
                transitions=n.transitions,
                valuation=n.valuation,
            )
            assert largest_refinement(m, shuffled, (), SIG_AB).pairs == rel

    def test_bisim_each_side_preserves_refinement(self):
        # bisim ∘ refinement ∘ bisim stays inside refinement
        rng = random.Random(19)
        from ccmu.lts import copy_rename

        for _ in range(12):
            m = random_model(rng, rng.randint(1, 4), atoms=("p",))
            n = random_model(rng, rng.randint(1, 4), atoms=("p",))
            pm, pn = PointedModel(m, m.states[0]), PointedModel(n, n.states[0])
            if not refines(pm, pn, (), SIG_AB):
                continue
            pm2 = copy_rename(pm, "_l")
            pn2 = copy_rename(pn, "_r")
            assert refines(pm2, pn2, (), SIG_AB)

    def test_composition_on_samples(self):
        # a split-signature route composes into the full signature
        rng = random.Random(20)
        sig_up = signature(["a"], [])
        sig_down = signature([], ["b"])
        for _ in range(40):
            m = random_model(rng, rng.randint(1, 3), atoms=("p",))
            k = random_model(rng, rng.randint(1, 3), atoms=("p",))
            n = random_model(rng, rng.randint(1, 3), atoms=("p",))
            r1 = largest_refinement(m, k, (), sig_up)
            r2 = largest_refinement(k, n, (), sig_down)
            composed = frozenset(
                (u, w) for (u, v) in r1.pairs for (v2, w) in r2.pairs if v == v2
            )
            if composed:
                assert verify_relation(composed, m, n, (), SIG_AB)
