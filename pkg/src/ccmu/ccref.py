"""P-restricted (A1, A2)-refinement relations between finite models.

The covariant set's transitions in the left model must be matched in the
right model (forth, over every action outside the contravariant set); the
right model's transitions must trace back (back, over every action
outside the covariant set); and related states agree on all atoms outside
the exempt set P.  Bisimulation, simulation and plain refinement are the
(∅,∅), (B,∅) and (∅,B) instances.

The greatest such relation exists because the defining clauses are closed
under union; it is computed by pair deletion from the atom-compatible
seed relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import AlphabetMismatch, UnknownState
from .lts import Model, PointedModel
from .syntax import QuantifierSignature


@dataclass(frozen=True)
class RefinementRelation:
    """A set of cross-model state pairs certified against the three
    defining clauses for the stored context."""

    pairs: frozenset[tuple[str, str]]
    p_set: frozenset[str]
    sig: QuantifierSignature


def _atoms_compatible(m: Model, n: Model, u: str, v: str, p_set: frozenset[str]) -> bool:
    return (m.atoms_of(u) - p_set) == (n.atoms_of(v) - p_set)


def verify_relation(
    pairs: Iterable[tuple[str, str]],
    m: Model,
    n: Model,
    p_set: Iterable[str] = (),
    sig: QuantifierSignature = QuantifierSignature(frozenset(), frozenset()),
) -> bool:
    """Check the atoms/forth/back clauses at every pair of a candidate
    relation.  The empty relation passes vacuously."""
    pairs = frozenset(pairs)
    p_set = frozenset(p_set)
    for (u, v) in pairs:
        m.require_state(u)
        n.require_state(v)
    forth_actions = [a for a in m.alphabet if a not in sig.contra]
    back_actions = [a for a in m.alphabet if a not in sig.cov]
    for (u, v) in pairs:
        if not _atoms_compatible(m, n, u, v, p_set):
            return False
        for a in forth_actions:
            n_succ = n.succ(a, v)
            for u1 in m.succ(a, u):
                if not any((u1, v1) in pairs for v1 in n_succ):
                    return False
        for a in back_actions:
            m_succ = m.succ(a, u)
            for v1 in n.succ(a, v):
                if not any((u1, v1) in pairs for u1 in m_succ):
                    return False
    return True


def largest_refinement(
    m: Model,
    n: Model,
    p_set: Iterable[str] = (),
    sig: QuantifierSignature = QuantifierSignature(frozenset(), frozenset()),
) -> RefinementRelation:
    """Greatest-fixpoint pair deletion: start from every atom-compatible
    pair and delete violations of forth/back against the current relation
    until stable.  The result is the union of all refinement relations for
    this context, so it is independent of deletion order."""
    if m.alphabet != n.alphabet:
        raise AlphabetMismatch(
            f"{tuple(m.alphabet)} vs {tuple(n.alphabet)}"
        )
    p_set = frozenset(p_set)
    nm, nn = len(m.states), len(n.states)
    m_index = {s: i for i, s in enumerate(m.states)}
    n_index = {s: i for i, s in enumerate(n.states)}

    m_succ = {
        a: [[m_index[v] for v in sorted(m.succ(a, s))] for s in m.states]
        for a in m.alphabet
    }
    n_succ_mask = {a: [0] * nn for a in m.alphabet}
    n_succ_list = {
        a: [[n_index[v] for v in sorted(n.succ(a, s))] for s in n.states]
        for a in m.alphabet
    }
    for a in m.alphabet:
        for j, succs in enumerate(n_succ_list[a]):
            mask = 0
            for v in succs:
                mask |= 1 << v
            n_succ_mask[a][j] = mask

    # rows[i]: bitmask over n-states related to m-state i
    rows = [0] * nm
    for i, u in enumerate(m.states):
        for j, v in enumerate(n.states):
            if _atoms_compatible(m, n, u, v, p_set):
                rows[i] |= 1 << j

    forth_actions = [a for a in m.alphabet if a not in sig.contra]
    back_actions = [a for a in m.alphabet if a not in sig.cov]

    changed = True
    while changed:
        changed = False
        for i in range(nm):
            row = rows[i]
            j = 0
            while row >> j:
                if row >> j & 1:
                    ok = True
                    for a in forth_actions:
                        nmask = n_succ_mask[a][j]
                        for i1 in m_succ[a][i]:
                            if (rows[i1] & nmask) == 0:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        for a in back_actions:
                            for j1 in n_succ_list[a][j]:
                                if not any(
                                    rows[i1] >> j1 & 1 for i1 in m_succ[a][i]
                                ):
                                    ok = False
                                    break
                            if not ok:
                                break
                    if not ok:
                        rows[i] &= ~(1 << j)
                        changed = True
                j += 1

    pairs = frozenset(
        (m.states[i], n.states[j])
        for i in range(nm)
        for j in range(nn)
        if rows[i] >> j & 1
    )
    return RefinementRelation(pairs=pairs, p_set=p_set, sig=sig)


def refines(
    pm: PointedModel,
    pn: PointedModel,
    p_set: Iterable[str] = (),
    sig: QuantifierSignature = QuantifierSignature(frozenset(), frozenset()),
) -> bool:
    """Is the right pointed model a P-restricted refinement of the left
    one, i.e. are the two points related by the greatest relation?"""
    rel = largest_refinement(pm.model, pn.model, p_set, sig)
    return (pm.point, pn.point) in rel.pairs


def bisimilar(pm: PointedModel, pn: PointedModel) -> bool:
    """The (∅,∅) special case."""
    return refines(pm, pn, (), QuantifierSignature(frozenset(), frozenset()))
