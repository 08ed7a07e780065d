"""Formula AST, concrete grammar, normal forms, substitution and the
disjunctive-syntax check.

Atoms and fixpoint variables share one namespace: a propositional letter
becomes a variable exactly when a ``mu``/``nu`` binder captures it.
Formulas are immutable; every operation here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import (
    FormulaSyntaxError,
    PositivityError,
    QuantifierPresent,
    UnknownAction,
)


# ---------------------------------------------------------------------------
# Alphabets and quantifier signatures


@dataclass(frozen=True)
class ActionAlphabet:
    """Ordered finite set of action names; the order fixes canonical
    rendering and deterministic enumeration."""

    actions: tuple[str, ...]

    def __post_init__(self):
        if not self.actions:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.actions)) != len(self.actions):
            raise ValueError("duplicate action names")
        for a in self.actions:
            if not a:
                raise ValueError("empty action name")

    def __contains__(self, action: str) -> bool:
        return action in self.actions

    def __iter__(self) -> Iterator[str]:
        return iter(self.actions)

    def __len__(self) -> int:
        return len(self.actions)

    def index(self, action: str) -> int:
        try:
            return self.actions.index(action)
        except ValueError:
            raise UnknownAction(f"action {action!r} not in alphabet {self.actions}")


def alphabet(*actions: str) -> ActionAlphabet:
    return ActionAlphabet(tuple(actions))


@dataclass(frozen=True)
class QuantifierSignature:
    """Covariant / contravariant action-set pair carried by a refinement
    quantifier.  Both sets may be empty only on the semantic-checking
    paths; elimination requires them non-empty."""

    cov: frozenset[str]
    contra: frozenset[str]

    def __post_init__(self):
        if self.cov & self.contra:
            raise ValueError("covariant and contravariant sets must be disjoint")

    def check_alphabet(self, alpha: ActionAlphabet) -> None:
        for a in sorted(self.cov | self.contra):
            if a not in alpha:
                raise UnknownAction(f"signature action {a!r} not in alphabet")


def signature(cov: Iterable[str], contra: Iterable[str]) -> QuantifierSignature:
    return QuantifierSignature(frozenset(cov), frozenset(contra))


# ---------------------------------------------------------------------------
# Formula AST


class Formula:
    """Base class for formula nodes; subclasses are frozen dataclasses."""

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Neg(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    action: str
    child: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    action: str
    child: Formula


@dataclass(frozen=True)
class Cover(Formula):
    """Cover modality: every successor satisfies some member and every
    member holds at some successor.  A primitive constructor because the
    elimination rules pattern-match on it."""

    action: str
    members: frozenset[Formula]


@dataclass(frozen=True)
class Exists(Formula):
    sig: QuantifierSignature
    child: Formula


@dataclass(frozen=True)
class Forall(Formula):
    sig: QuantifierSignature
    child: Formula


@dataclass(frozen=True)
class Mu(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Nu(Formula):
    var: str
    body: Formula


TRUE = Top()
FALSE = Bot()


def cover(action: str, members: Iterable[Formula]) -> Cover:
    return Cover(action, frozenset(members))


def big_and(parts: Iterable[Formula]) -> Formula:
    """Left-associated conjunction; empty input yields ``true``."""
    parts = list(parts)
    if not parts:
        return TRUE
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def big_or(parts: Iterable[Formula]) -> Formula:
    """Left-associated disjunction; empty input yields ``false``."""
    parts = list(parts)
    if not parts:
        return FALSE
    acc = parts[0]
    for p in parts[1:]:
        acc = Or(acc, p)
    return acc


def conjuncts(f: Formula) -> list[Formula]:
    """Flatten a conjunction tree into its leaves (left-to-right)."""
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


def disjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, Or):
        return disjuncts(f.left) + disjuncts(f.right)
    return [f]


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Neg):
        return (f.child,)
    if isinstance(f, (And, Or)):
        return (f.left, f.right)
    if isinstance(f, (Box, Diamond)):
        return (f.child,)
    if isinstance(f, Cover):
        return tuple(f.members)
    if isinstance(f, (Exists, Forall)):
        return (f.child,)
    if isinstance(f, (Mu, Nu)):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformula occurrences, preorder."""
    yield f
    for c in children(f):
        yield from subformulas(c)


def has_quantifier(f: Formula) -> bool:
    return any(isinstance(g, (Exists, Forall)) for g in subformulas(f))


def has_fixpoint(f: Formula) -> bool:
    return any(isinstance(g, (Mu, Nu)) for g in subformulas(f))


def is_propositional(f: Formula) -> bool:
    """Membership in the propositional fragment (no modal, cover, fixpoint
    or refinement operators)."""
    if isinstance(f, (Top, Bot, Atom)):
        return True
    if isinstance(f, Neg):
        return is_propositional(f.child)
    if isinstance(f, (And, Or)):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Neg) and isinstance(f.child, Atom))


def actions_of(f: Formula) -> frozenset[str]:
    acts: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, (Box, Diamond, Cover)):
            acts.add(g.action)
        elif isinstance(g, (Exists, Forall)):
            acts |= g.sig.cov | g.sig.contra
    return frozenset(acts)


def atoms_of(f: Formula) -> frozenset[str]:
    """Every atom name occurring in ``f``, bound or free."""
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def free_atoms(f: Formula) -> frozenset[str]:
    """Atom names with at least one occurrence not captured by a binder."""
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, (Mu, Nu)):
        return free_atoms(f.body) - {f.var}
    out: frozenset[str] = frozenset()
    for c in children(f):
        out |= free_atoms(c)
    return out


# ---------------------------------------------------------------------------
# Positivity


def _polarity_ok(f: Formula, var: str, positive: bool) -> bool:
    """True iff every free occurrence of ``var`` in ``f`` sits under an even
    number of negations (given the polarity of the current context)."""
    if isinstance(f, Atom):
        return f.name != var or positive
    if isinstance(f, Neg):
        return _polarity_ok(f.child, var, not positive)
    if isinstance(f, (Mu, Nu)) and f.var == var:
        return True
    for c in children(f):
        if not _polarity_ok(c, var, positive):
            return False
    return True


def validate_positivity(f: Formula) -> None:
    """Raise PositivityError unless every bound variable occurs only
    positively in its binder's body."""
    for g in subformulas(f):
        if isinstance(g, (Mu, Nu)) and not _polarity_ok(g.body, g.var, True):
            raise PositivityError(g.var)


# ---------------------------------------------------------------------------
# Substitution


def _fresh_name(base: str, avoid: frozenset[str]) -> str:
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def substitute(f: Formula, name: str, repl: Formula) -> Formula:
    """Capture-avoiding replacement of free occurrences of ``name`` by
    ``repl``; clashing binders are renamed with deterministic suffix
    counters."""
    repl_free = free_atoms(repl)

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return repl if g.name == name else g
        if isinstance(g, (Top, Bot)):
            return g
        if isinstance(g, Neg):
            return Neg(go(g.child))
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Or):
            return Or(go(g.left), go(g.right))
        if isinstance(g, Box):
            return Box(g.action, go(g.child))
        if isinstance(g, Diamond):
            return Diamond(g.action, go(g.child))
        if isinstance(g, Cover):
            return Cover(g.action, frozenset(go(m) for m in g.members))
        if isinstance(g, Exists):
            return Exists(g.sig, go(g.child))
        if isinstance(g, Forall):
            return Forall(g.sig, go(g.child))
        if isinstance(g, (Mu, Nu)):
            kind = type(g)
            if g.var == name:
                return g
            if name not in free_atoms(g.body):
                return g
            if g.var in repl_free:
                fresh = _fresh_name(
                    g.var, repl_free | free_atoms(g.body) | {name}
                )
                body = substitute(g.body, g.var, Atom(fresh))
                return kind(fresh, go(body))
            return kind(g.var, go(g.body))
        raise TypeError(f"unknown formula node {g!r}")

    return go(f)


# ---------------------------------------------------------------------------
# Negation normal form


def expand_cover(f: Cover) -> Formula:
    """Rewrite a cover into its box/diamond definition."""
    members = sorted(f.members, key=render)
    return And(
        Box(f.action, big_or(members)),
        big_and([Diamond(f.action, m) for m in members]),
    )


def nnf(f: Formula) -> Formula:
    """Push negations down to atoms, keeping And/Or, Box/Diamond, Mu/Nu and
    Exists/Forall as dual pairs.  Negated covers are expanded through the
    box/diamond definition first."""
    if isinstance(f, (Top, Bot, Atom)):
        return f
    if isinstance(f, Neg):
        return _nnf_neg(f.child)
    if isinstance(f, And):
        return And(nnf(f.left), nnf(f.right))
    if isinstance(f, Or):
        return Or(nnf(f.left), nnf(f.right))
    if isinstance(f, Box):
        return Box(f.action, nnf(f.child))
    if isinstance(f, Diamond):
        return Diamond(f.action, nnf(f.child))
    if isinstance(f, Cover):
        return Cover(f.action, frozenset(nnf(m) for m in f.members))
    if isinstance(f, Exists):
        return Exists(f.sig, nnf(f.child))
    if isinstance(f, Forall):
        return Forall(f.sig, nnf(f.child))
    if isinstance(f, Mu):
        return Mu(f.var, nnf(f.body))
    if isinstance(f, Nu):
        return Nu(f.var, nnf(f.body))
    raise TypeError(f"unknown formula node {f!r}")


def _nnf_neg(f: Formula) -> Formula:
    if isinstance(f, Top):
        return FALSE
    if isinstance(f, Bot):
        return TRUE
    if isinstance(f, Atom):
        return Neg(f)
    if isinstance(f, Neg):
        return nnf(f.child)
    if isinstance(f, And):
        return Or(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Or):
        return And(_nnf_neg(f.left), _nnf_neg(f.right))
    if isinstance(f, Box):
        return Diamond(f.action, _nnf_neg(f.child))
    if isinstance(f, Diamond):
        return Box(f.action, _nnf_neg(f.child))
    if isinstance(f, Cover):
        return _nnf_neg(expand_cover(f))
    if isinstance(f, Exists):
        return Forall(f.sig, _nnf_neg(f.child))
    if isinstance(f, Forall):
        return Exists(f.sig, _nnf_neg(f.child))
    if isinstance(f, Mu):
        return Nu(f.var, _nnf_neg(substitute(f.body, f.var, Neg(Atom(f.var)))))
    if isinstance(f, Nu):
        return Mu(f.var, _nnf_neg(substitute(f.body, f.var, Neg(Atom(f.var)))))
    raise TypeError(f"unknown formula node {f!r}")


# ---------------------------------------------------------------------------
# Disjunctive syntax


def _in_conj_with(f: Formula, var: str) -> bool:
    """Does ``var`` occur free as a direct conjunct of some conjunction?"""
    if isinstance(f, And):
        parts = conjuncts(f)
        if any(p == Atom(var) for p in parts):
            return True
        return any(_in_conj_with(p, var) for p in parts)
    if isinstance(f, (Mu, Nu)) and f.var == var:
        return False
    return any(_in_conj_with(c, var) for c in children(f))


def is_df(f: Formula) -> bool:
    """Disjunctive-syntax check: propositional formulas; disjunctions of
    disjunctive formulas; conjunctions of one propositional part with at
    most one cover per action whose members are disjunctive; and fixpoints
    whose variable occurs positively and never as a conjunct."""
    if has_quantifier(f):
        raise QuantifierPresent("refinement quantifiers are outside disjunctive syntax")
    return _is_df(f)


def _is_df(f: Formula) -> bool:
    if is_propositional(f):
        return True
    if isinstance(f, Or):
        return _is_df(f.left) and _is_df(f.right)
    if isinstance(f, (And, Cover)):
        covers = []
        for part in conjuncts(f):
            if isinstance(part, Cover):
                covers.append(part)
            elif not is_propositional(part):
                return False
        actions = [c.action for c in covers]
        if len(set(actions)) != len(actions):
            return False
        return all(_is_df(m) for c in covers for m in c.members)
    if isinstance(f, (Mu, Nu)):
        return _polarity_ok(f.body, f.var, True) and not _in_conj_with(f.body, f.var)
    return False


# ---------------------------------------------------------------------------
# Rendering


def render(f: Formula) -> str:
    """Canonical text; ``parse(render(f))`` is structurally ``f``."""
    return _render(f, True)


def _render(f: Formula, scope_end: bool) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Neg):
        return "!" + _render(f.child, scope_end)
    if isinstance(f, And):
        return "(" + _render(f.left, False) + " & " + _render(f.right, True) + ")"
    if isinstance(f, Or):
        return "(" + _render(f.left, False) + " | " + _render(f.right, True) + ")"
    if isinstance(f, Box):
        return f"[{f.action}]" + _render(f.child, scope_end)
    if isinstance(f, Diamond):
        return f"<{f.action}>" + _render(f.child, scope_end)
    if isinstance(f, Cover):
        inner = ", ".join(sorted(_render(m, True) for m in f.members))
        return f"nabla_{f.action} {{{inner}}}"
    if isinstance(f, (Exists, Forall)):
        tag = "E" if isinstance(f, Exists) else "A"
        sig = ",".join(sorted(f.sig.cov)) + ";" + ",".join(sorted(f.sig.contra))
        return f"{tag}{{{sig}}} " + _render(f.child, scope_end)
    if isinstance(f, (Mu, Nu)):
        kw = "mu" if isinstance(f, Mu) else "nu"
        core = f"{kw} {f.var}. " + _render(f.body, True)
        return core if scope_end else "(" + core + ")"
    raise TypeError(f"unknown formula node {f!r}")


# ---------------------------------------------------------------------------
# Parsing

_PUNCT = ("->", "(", ")", "{", "}", "[", "]", "<", ">", ",", ";", ".", "!", "&", "|")


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("->", i):
            toks.append(_Token("->", "->", i))
            i += 2
            continue
        if c in "(){}[]<>,;.!&|":
            toks.append(_Token(c, c, i))
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Token("ident", text[i:j], i))
            i = j
            continue
        raise FormulaSyntaxError(f"unexpected character {c!r}", i)
    toks.append(_Token("eof", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, alpha: Optional[ActionAlphabet]):
        self.text = text
        self.alpha = alpha
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.toks[self.i]

    def next(self) -> _Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Token:
        t = self.peek()
        if t.kind != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {t.text!r}", t.pos)
        return self.next()

    def fail(self, msg: str):
        raise FormulaSyntaxError(msg, self.peek().pos)

    def check_action(self, name: str, pos: int) -> str:
        if self.alpha is not None and name not in self.alpha:
            raise UnknownAction(f"action {name!r} not in alphabet (at offset {pos})")
        return name

    # grammar: implies > or > and > prefix > primary
    def formula(self) -> Formula:
        return self.implies()

    def implies(self) -> Formula:
        left = self.disj()
        if self.peek().kind == "->":
            self.next()
            right = self.implies()
            return Or(Neg(left), right)
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek().kind == "|":
            self.next()
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.prefix()
        while self.peek().kind == "&":
            self.next()
            left = And(left, self.prefix())
        return left

    def prefix(self) -> Formula:
        t = self.peek()
        if t.kind == "!":
            self.next()
            return Neg(self.prefix())
        if t.kind == "[":
            self.next()
            act = self.expect("ident")
            self.check_action(act.text, act.pos)
            self.expect("]")
            return Box(act.text, self.prefix())
        if t.kind == "<":
            self.next()
            act = self.expect("ident")
            self.check_action(act.text, act.pos)
            self.expect(">")
            return Diamond(act.text, self.prefix())
        if t.kind == "ident" and t.text.startswith("nabla_"):
            self.next()
            act = t.text[len("nabla_"):]
            if not act:
                raise FormulaSyntaxError("missing action after nabla_", t.pos)
            self.check_action(act, t.pos)
            self.expect("{")
            members = []
            if self.peek().kind != "}":
                members.append(self.formula())
                while self.peek().kind == ",":
                    self.next()
                    members.append(self.formula())
            self.expect("}")
            return Cover(act, frozenset(members))
        if t.kind == "ident" and t.text in ("E", "A") and self.toks[self.i + 1].kind == "{":
            self.next()
            sig = self.signature()
            child = self.prefix()
            return Exists(sig, child) if t.text == "E" else Forall(sig, child)
        return self.primary()

    def signature(self) -> QuantifierSignature:
        self.expect("{")
        cov = self.action_list(stop=";")
        self.expect(";")
        contra = self.action_list(stop="}")
        self.expect("}")
        try:
            return QuantifierSignature(frozenset(cov), frozenset(contra))
        except ValueError as e:
            self.fail(str(e))

    def action_list(self, stop: str) -> list[str]:
        acts = []
        if self.peek().kind == stop:
            return acts
        a = self.expect("ident")
        acts.append(self.check_action(a.text, a.pos))
        while self.peek().kind == ",":
            self.next()
            a = self.expect("ident")
            acts.append(self.check_action(a.text, a.pos))
        return acts

    def primary(self) -> Formula:
        t = self.peek()
        if t.kind == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident":
            if t.text == "true":
                self.next()
                return TRUE
            if t.text == "false":
                self.next()
                return FALSE
            if t.text in ("mu", "nu"):
                self.next()
                var = self.expect("ident")
                self.expect(".")
                body = self.formula()
                return Mu(var.text, body) if t.text == "mu" else Nu(var.text, body)
            self.next()
            return Atom(t.text)
        self.fail(f"expected a formula, found {t.text!r}")


def parse(text: str, alpha: Optional[ActionAlphabet] = None) -> Formula:
    """Parse formula text; action names are validated against ``alpha``
    when given.  Enforces the positivity invariant on binders."""
    p = _Parser(text, alpha)
    f = p.formula()
    t = p.peek()
    if t.kind != "eof":
        raise FormulaSyntaxError(f"trailing input {t.text!r}", t.pos)
    validate_positivity(f)
    return f
