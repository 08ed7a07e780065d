"""Disjunctive-form conversion for the fixed-point-free fragment.

The pass normalizes to negation normal form, replaces boxes and diamonds
by their cover encodings, distributes conjunction over disjunction, and
merges same-action covers inside each conjunct with the cover-meet law:
the conjunction of two covers is the disjunction, over all relations
between the member sets that are total on both sides, of the cover of the
pairwise conjunctions.  Members are converted recursively.

Duplicate cover members collapse because member collections are sets.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable

from .errors import FixpointPresent, NotDisjunctive, QuantifierPresent
from .syntax import (
    And,
    Bot,
    Box,
    Cover,
    Diamond,
    Formula,
    Neg,
    Or,
    Top,
    TRUE,
    FALSE,
    big_and,
    big_or,
    has_fixpoint,
    has_quantifier,
    is_df,
    is_literal,
    nnf,
    render,
)


def _conj2(x: Formula, y: Formula) -> Formula:
    if isinstance(x, Top):
        return y
    if isinstance(y, Top):
        return x
    if isinstance(x, Bot) or isinstance(y, Bot):
        return FALSE
    if x == y:
        return x
    return And(x, y)


def _full_relations(
    phi: tuple[Formula, ...], psi: tuple[Formula, ...]
) -> Iterable[tuple[tuple[Formula, Formula], ...]]:
    """Relations R between the two member tuples with every member of
    either side related to something on the other."""
    if not phi and not psi:
        yield ()
        return
    if not phi or not psi:
        return
    m = len(psi)
    nonempty = [s for s in range(1, 1 << m)]
    for choice in product(nonempty, repeat=len(phi)):
        covered = 0
        for s in choice:
            covered |= s
        if covered != (1 << m) - 1:
            continue
        yield tuple(
            (phi[i], psi[j])
            for i in range(len(phi))
            for j in range(m)
            if choice[i] >> j & 1
        )


def _merge_covers(
    sets: list[frozenset[Formula]],
) -> list[frozenset[Formula]]:
    """Fold same-action member sets with the cover-meet law; the result is
    a list of alternative merged member sets (a disjunction of covers)."""
    acc = [sets[0]]
    for nxt in sets[1:]:
        nxt_t = tuple(sorted(nxt, key=render))
        out = []
        for cur in acc:
            cur_t = tuple(sorted(cur, key=render))
            for rel in _full_relations(cur_t, nxt_t):
                out.append(frozenset(_conj2(x, y) for (x, y) in rel))
        acc = out
    seen = []
    for s in acc:
        if s not in seen:
            seen.append(s)
    return seen


_Clause = tuple[tuple[Formula, ...], tuple[tuple[str, frozenset[Formula]], ...]]


def _clauses(f: Formula) -> list[_Clause]:
    """Disjunctive normal form over literals and covers; boxes and
    diamonds enter as their cover encodings."""
    if isinstance(f, Top):
        return [((), ())]
    if isinstance(f, Bot):
        return []
    if is_literal(f):
        return [((f,), ())]
    if isinstance(f, Or):
        return _clauses(f.left) + _clauses(f.right)
    if isinstance(f, And):
        out = []
        for (l1, c1) in _clauses(f.left):
            for (l2, c2) in _clauses(f.right):
                out.append((l1 + l2, c1 + c2))
        return out
    if isinstance(f, Box):
        return [
            ((), ((f.action, frozenset()),)),
            ((), ((f.action, frozenset((f.child,))),)),
        ]
    if isinstance(f, Diamond):
        return [((), ((f.action, frozenset((f.child, TRUE))),))]
    if isinstance(f, Cover):
        return [((), ((f.action, f.members),))]
    raise NotDisjunctive(f"cannot clausify {render(f)}", f)


def to_df(f: Formula) -> Formula:
    """Equivalent disjunctive-syntax formula for a fixed-point-free,
    quantifier-free input."""
    if has_quantifier(f):
        raise QuantifierPresent(f"quantifier in df conversion input: {render(f)}")
    if has_fixpoint(f):
        raise FixpointPresent(f"fixpoint in df conversion input: {render(f)}")
    return _convert(nnf(f))


def _convert(f: Formula) -> Formula:
    out: list[Formula] = []
    for (lits, covs) in _clauses(f):
        by_action: dict[str, list[frozenset[Formula]]] = {}
        for (a, members) in covs:
            by_action.setdefault(a, []).append(members)
        merged_alternatives: list[list[tuple[str, frozenset[Formula]]]] = [[]]
        for a in sorted(by_action):
            choices = _merge_covers(by_action[a])
            merged_alternatives = [
                prev + [(a, members)]
                for prev in merged_alternatives
                for members in choices
            ]
        uniq_lits: list[Formula] = []
        for lit in sorted(lits, key=render):
            if lit not in uniq_lits:
                uniq_lits.append(lit)
        for alt in merged_alternatives:
            covers = [
                Cover(a, frozenset(_convert(m) for m in members))
                for (a, members) in alt
            ]
            out.append(big_and(uniq_lits + covers))
    dedup: list[Formula] = []
    for g in out:
        if g not in dedup:
            dedup.append(g)
    return big_or(dedup)


def cover_form(f: Formula) -> Formula:
    """Pointwise rewrite of boxes and diamonds into covers; valid on any
    formula and used to re-feed elimination results into the next pass."""
    from .syntax import (
        Atom,
        Exists,
        Forall,
        Mu,
        Nu,
    )

    if isinstance(f, (Top, Bot, Atom)):
        return f
    if isinstance(f, Neg):
        return Neg(cover_form(f.child))
    if isinstance(f, And):
        return And(cover_form(f.left), cover_form(f.right))
    if isinstance(f, Or):
        return Or(cover_form(f.left), cover_form(f.right))
    if isinstance(f, Box):
        g = cover_form(f.child)
        return Or(Cover(f.action, frozenset()), Cover(f.action, frozenset((g,))))
    if isinstance(f, Diamond):
        g = cover_form(f.child)
        return Cover(f.action, frozenset((g, TRUE)))
    if isinstance(f, Cover):
        return Cover(f.action, frozenset(cover_form(m) for m in f.members))
    if isinstance(f, Exists):
        return Exists(f.sig, cover_form(f.child))
    if isinstance(f, Forall):
        return Forall(f.sig, cover_form(f.child))
    if isinstance(f, Mu):
        return Mu(f.var, cover_form(f.body))
    if isinstance(f, Nu):
        return Nu(f.var, cover_form(f.body))
    raise TypeError(f"unknown formula node {f!r}")


def ensure_df(f: Formula) -> Formula:
    """Route a quantifier-free formula into disjunctive syntax: pass
    through when already disjunctive, convert when fixed-point-free, and
    reject otherwise."""
    if has_quantifier(f):
        raise QuantifierPresent(f"quantifier in ensure_df input: {render(f)}")
    if is_df(f):
        return f
    if not has_fixpoint(f):
        return to_df(f)
    raise NotDisjunctive(
        f"formula has fixpoints and is not in disjunctive syntax: {render(f)}", f
    )
