"""Independent oracles the property suites compare against.

Nothing here may share algorithms or helpers with the primary code paths
it validates: bisimilarity is computed by partition refinement instead of
pair deletion, the simulation preorder by a direct containment fixpoint,
and fixpoint extensions by explicit enumeration of all candidate state
subsets instead of Knaster-Tarski iteration.
"""

from __future__ import annotations

from itertools import combinations
from typing import Mapping

from .lts import Model
from .syntax import (
    And,
    Atom,
    Bot,
    Box,
    Cover,
    Diamond,
    Formula,
    Mu,
    Neg,
    Nu,
    Or,
    Top,
)


def partition_refinement_bisim(m: Model, n: Model) -> frozenset[tuple[str, str]]:
    """Bisimilarity across two models by splitting blocks on per-action
    successor-block signatures until stable; returns all cross-model
    pairs of equivalent states."""
    states = [("m", s) for s in m.states] + [("n", s) for s in n.states]

    def atoms_of(tag_state):
        tag, s = tag_state
        model = m if tag == "m" else n
        return model.atoms_of(s)

    def succ(tag_state, a):
        tag, s = tag_state
        model = m if tag == "m" else n
        return frozenset((tag, t) for t in model.succ(a, s))

    block_of = {}
    blocks: dict[frozenset, int] = {}
    for st in states:
        key = atoms_of(st)
        block_of[st] = blocks.setdefault(key, len(blocks))
    while True:
        sig_of = {
            st: (
                block_of[st],
                tuple(
                    frozenset(block_of[t] for t in succ(st, a)) for a in m.alphabet
                ),
            )
            for st in states
        }
        new_ids: dict[tuple, int] = {}
        new_block_of = {
            st: new_ids.setdefault(sig_of[st], len(new_ids)) for st in states
        }
        # each signature embeds the old block, so the new partition refines
        # the old; equal block counts therefore mean stability
        stable = len(new_ids) == len(set(block_of.values()))
        block_of = new_block_of
        if stable:
            break
    return frozenset(
        (s, t)
        for s in m.states
        for t in n.states
        if block_of[("m", s)] == block_of[("n", t)]
    )


def naive_simulation(
    m: Model, n: Model, cov_actions: frozenset[str]
) -> frozenset[tuple[str, str]]:
    """Simulation preorder for the given action set: every covariant move
    of the left state is matched by the right state, atoms equal.  Direct
    fixpoint on a dict of candidate sets."""
    sim: dict[str, set[str]] = {
        u: {v for v in n.states if m.atoms_of(u) == n.atoms_of(v)} for u in m.states
    }
    changed = True
    while changed:
        changed = False
        for u in m.states:
            for v in list(sim[u]):
                ok = True
                for a in cov_actions:
                    for u1 in m.succ(a, u):
                        if not any(v1 in sim[u1] for v1 in n.succ(a, v)):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    sim[u].discard(v)
                    changed = True
    return frozenset((u, v) for u in m.states for v in sim[u])


def subset_extension(
    m: Model, f: Formula, env: Mapping[str, frozenset[str]] | None = None
) -> frozenset[str]:
    """Extension computed against the set-comprehension semantics: a least
    fixpoint is the intersection of all prefixed subsets, a greatest one
    the union of all postfixed subsets, each found by enumerating every
    candidate subset."""
    env = dict(env or {})
    states = frozenset(m.states)

    def go(g: Formula, e: dict[str, frozenset[str]]) -> frozenset[str]:
        if isinstance(g, Top):
            return states
        if isinstance(g, Bot):
            return frozenset()
        if isinstance(g, Atom):
            if g.name in e:
                return e[g.name]
            return frozenset(m.valuation.get(g.name, frozenset()))
        if isinstance(g, Neg):
            return states - go(g.child, e)
        if isinstance(g, And):
            return go(g.left, e) & go(g.right, e)
        if isinstance(g, Or):
            return go(g.left, e) | go(g.right, e)
        if isinstance(g, Box):
            body = go(g.child, e)
            return frozenset(s for s in states if m.succ(g.action, s) <= body)
        if isinstance(g, Diamond):
            body = go(g.child, e)
            return frozenset(s for s in states if m.succ(g.action, s) & body)
        if isinstance(g, Cover):
            exts = [go(mem, e) for mem in g.members]
            union = frozenset().union(*exts) if exts else frozenset()
            out = set()
            for s in states:
                succ = m.succ(g.action, s)
                if succ <= union and all(succ & x for x in exts):
                    out.add(s)
            return frozenset(out)
        if isinstance(g, (Mu, Nu)):
            candidates = _all_subsets(m.states)
            if isinstance(g, Mu):
                acc = states
                for t_set in candidates:
                    e2 = dict(e)
                    e2[g.var] = t_set
                    if go(g.body, e2) <= t_set:
                        acc &= t_set
                return acc
            acc = frozenset()
            for t_set in candidates:
                e2 = dict(e)
                e2[g.var] = t_set
                if t_set <= go(g.body, e2):
                    acc |= t_set
            return acc
        raise TypeError(f"unsupported node in subset oracle: {g!r}")

    return go(f, env)


def _all_subsets(states) -> list[frozenset[str]]:
    out = []
    items = list(states)
    for r in range(len(items) + 1):
        for combo in combinations(items, r):
            out.append(frozenset(combo))
    return out
