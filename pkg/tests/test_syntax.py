import pytest
from hypothesis import given, settings

from ccmu.errors import (
    FormulaSyntaxError,
    PositivityError,
    QuantifierPresent,
    UnknownAction,
)
from ccmu.syntax import (
    ActionAlphabet,
    And,
    Atom,
    Box,
    Cover,
    Diamond,
    Exists,
    Mu,
    Neg,
    Nu,
    Or,
    QuantifierSignature,
    TRUE,
    alphabet,
    cover,
    free_atoms,
    is_df,
    nnf,
    parse,
    render,
    signature,
    subformulas,
    substitute,
    validate_positivity,
)

from conftest import formulas


class TestParse:
    def test_atom(self):
        assert parse("p") == Atom("p")

    def test_quantified_fixpoint(self):
        got = parse("E{a;b} nu q. (p & [a]q)")
        want = Exists(
            signature(["a"], ["b"]), Nu("q", And(Atom("p"), Box("a", Atom("q"))))
        )
        assert got == want

    def test_negative_binder_rejected(self):
        with pytest.raises(PositivityError) as exc:
            parse("mu q. !q")
        assert exc.value.var == "q"

    def test_precedence(self):
        assert parse("p & q | r") == Or(And(Atom("p"), Atom("q")), Atom("r"))
        assert parse("p -> q | r") == Or(Neg(Atom("p")), Or(Atom("q"), Atom("r")))
        assert parse("[a]p & q") == And(Box("a", Atom("p")), Atom("q"))

    def test_scope_of_binders(self):
        assert parse("mu q. p | q") == Mu("q", Or(Atom("p"), Atom("q")))
        assert parse("(mu q. p) | q") == Or(Mu("q", Atom("p")), Atom("q"))

    def test_cover_and_signature_syntax(self):
        assert parse("nabla_a {}") == Cover("a", frozenset())
        assert parse("nabla_b {p, true}") == cover("b", [Atom("p"), TRUE])
        f = parse("E{a,b;}p")
        assert f.sig == QuantifierSignature(frozenset("ab"), frozenset())

    def test_syntax_error_offset(self):
        with pytest.raises(FormulaSyntaxError) as exc:
            parse("p & ")
        assert exc.value.offset == 4

    def test_unknown_action(self):
        with pytest.raises(UnknownAction):
            parse("<c>p", alphabet("a", "b"))

    def test_trailing_input(self):
        with pytest.raises(FormulaSyntaxError):
            parse("p q")


class TestRender:
    def test_examples(self):
        assert render(Atom("p")) == "p"
        assert render(cover("a", [Atom("p"), TRUE])) == "nabla_a {p, true}"
        assert (
            render(Nu("q", And(Atom("p"), Box("a", Atom("q"))))) == "nu q. (p & [a]q)"
        )

    def test_binder_in_left_operand_parenthesized(self):
        f = And(Mu("q", Atom("p")), Atom("r"))
        assert render(f) == "((mu q. p) & r)"
        assert parse(render(f)) == f

    @settings(max_examples=300, deadline=None)
    @given(formulas())
    def test_roundtrip(self, f):
        assert parse(render(f)) == f

    def test_roundtrip_canonical(self):
        text = render(parse("E{a;b} nu q. (p & [a]q)"))
        assert render(parse(text)) == text


class TestAlphabetAndSignature:
    def test_alphabet_invariants(self):
        with pytest.raises(ValueError):
            ActionAlphabet(())
        with pytest.raises(ValueError):
            ActionAlphabet(("a", "a"))
        assert alphabet("b", "a").index("a") == 1

    def test_signature_disjoint(self):
        with pytest.raises(ValueError):
            signature(["a"], ["a"])
        sig = signature([], [])
        assert not sig.cov and not sig.contra


class TestNnf:
    def test_de_morgan(self):
        assert nnf(parse("!(p & q)")) == parse("!p | !q")

    def test_modal_dual(self):
        assert nnf(parse("![a]p")) == parse("<a>!p")

    def test_fixpoint_dual(self):
        got = nnf(parse("!mu q. (p | <a>q)"))
        assert got == parse("nu q. (!p & [a]q)")

    def test_quantifier_dual(self):
        got = nnf(Neg(parse("E{a;b} p")))
        assert got == parse("A{a;b} !p")

    @settings(max_examples=200, deadline=None)
    @given(formulas())
    def test_negations_only_on_atoms(self, f):
        for g in subformulas(nnf(f)):
            if isinstance(g, Neg):
                assert isinstance(g.child, Atom)


class TestSubstitute:
    def test_simple(self):
        assert substitute(parse("<a>q"), "q", Atom("p")) == parse("<a>p")

    def test_bound_untouched(self):
        f = parse("mu q. (q | r)")
        assert substitute(f, "q", Atom("p")) == f

    def test_capture_avoided(self):
        f = Mu("r", Or(Atom("q"), Diamond("a", Atom("r"))))
        got = substitute(f, "q", Atom("r"))
        assert got == Mu("r1", Or(Atom("r"), Diamond("a", Atom("r1"))))

    @settings(max_examples=200, deadline=None)
    @given(formulas())
    def test_identity_substitution(self, f):
        for name in sorted(free_atoms(f)):
            assert substitute(f, name, Atom(name)) == f


class TestDisjunctiveSyntax:
    def test_guarded_cover(self):
        assert is_df(parse("p & nabla_a {p}"))

    def test_box_is_not_df(self):
        assert not is_df(parse("[a]p"))

    def test_conjunct_variable_rejected(self):
        assert not is_df(parse("mu q. (q & p)"))

    def test_duplicate_cover_actions_rejected(self):
        assert not is_df(parse("nabla_a {p} & nabla_a {q}"))

    def test_distinct_cover_actions_accepted(self):
        assert is_df(parse("p & nabla_a {p} & nabla_b {true}"))

    def test_quantifier_raises(self):
        with pytest.raises(QuantifierPresent):
            is_df(parse("E{a;b} p"))

    def test_positivity_required_for_binder(self):
        f = Mu("q", Neg(Neg(Atom("q"))))
        assert is_df(f)
        g = Mu("q", Or(Neg(Atom("q")), Atom("q")))
        assert not is_df(g)


def test_corpus_is_labelled_disjunctive():
    from ccmu.corpus import DF_CORPUS

    for f in DF_CORPUS:
        assert is_df(f), render(f)


def test_corpus_renders_canonically():
    from ccmu.corpus import DF_CORPUS, quantified_corpus

    for f in list(DF_CORPUS) + list(quantified_corpus()):
        text = render(f)
        assert parse(text) == f
        assert render(parse(text)) == text


def test_validate_positivity_passes_even_negations():
    validate_positivity(parse("mu q. !!q"))
    with pytest.raises(PositivityError):
        validate_positivity(Mu("q", Neg(Atom("q"))))
