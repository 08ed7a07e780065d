"""Bounded brute-force oracle for the refinement-quantifier semantics:
enumerate candidate refined models in a fixed order and test each for
refinement and satisfaction.

Enumeration is deterministic: state counts ascend, and within one count
models follow the packed-integer order documented in kernels.packed.  A
found witness is re-certified symbolically (relation verified, formula
re-checked) before being returned, so kernel bugs cannot smuggle in a
bogus witness.
"""

from __future__ import annotations

from typing import Iterator, Optional

import numpy as np

from . import ccref, mc
from .kernels import (
    compile_formula,
    family_block,
    model_count,
    pointed_from_index,
    refines_family,
    sat_roots,
)
from .lts import PointedModel
from .syntax import Formula, QuantifierSignature, free_atoms, has_quantifier

_BLOCK = 1 << 20


def enumerate_models(
    alphabet_actions,
    atoms,
    max_states: int,
    prune_isomorphic: bool = False,
) -> Iterator[PointedModel]:
    """Every model with 1..max_states states over the given alphabet and
    atom list, rooted at its first state, in enumeration order.  Optional
    pruning drops candidates whose reachable part already appeared under a
    breadth-first relabeling; soundness never depends on it."""
    actions = tuple(alphabet_actions)
    atoms = tuple(atoms)
    seen: set[tuple] = set()
    for k in range(1, max_states + 1):
        for idx in range(model_count(k, len(actions), len(atoms))):
            pm = pointed_from_index(idx, k, actions, atoms)
            if prune_isomorphic:
                sig = _reachable_signature(pm)
                if sig in seen:
                    continue
                seen.add(sig)
            yield pm


def _reachable_signature(pm: PointedModel) -> tuple:
    """Canonical form of the root-reachable part under BFS relabeling."""
    m = pm.model
    order = [pm.point]
    pos = {pm.point: 0}
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        for a in m.alphabet:
            for t in sorted(m.succ(a, s)):
                if t not in pos:
                    pos[t] = len(order)
                    order.append(t)
    trans = tuple(
        tuple(
            sorted(
                (pos[u], pos[v])
                for (u, v) in m.transitions[a]
                if u in pos and v in pos
            )
        )
        for a in m.alphabet
    )
    val = tuple(
        tuple(sorted(pos[s] for s in m.valuation[r] if s in pos))
        for r in sorted(m.valuation)
    )
    return (len(order), trans, val)


def witness_atoms(pm: PointedModel, f: Formula) -> tuple[str, ...]:
    """Atom list the search ranges over: the formula's free atoms plus the
    spec model's declared atoms.  Other atoms are pinned through the
    atoms clause anyway; a finite list is what makes enumeration finite."""
    return tuple(sorted(free_atoms(f) | set(pm.model.valuation.keys())))


def _certify(
    pm: PointedModel, sig: QuantifierSignature, cand: PointedModel, f: Formula
) -> None:
    rel = ccref.largest_refinement(pm.model, cand.model, (), sig)
    if (pm.point, cand.point) not in rel.pairs:
        raise RuntimeError("witness kernel returned a non-refining candidate")
    if not ccref.verify_relation(rel.pairs, pm.model, cand.model, (), sig):
        raise RuntimeError("emitted relation failed verification")
    if not _holds(cand, f):
        raise RuntimeError("witness kernel returned a non-satisfying candidate")


def _holds(cand: PointedModel, f: Formula) -> bool:
    if not has_quantifier(f):
        return mc.check(cand, f)
    from .elim import check_cc

    verdict = check_cc(cand, f)
    if verdict.is_undetermined():
        from .errors import SideConditionUnknown

        raise SideConditionUnknown(
            f"inner quantifier undecided during witness search: {verdict.reason}"
        )
    return verdict.is_true()


def witness_search(
    pm: PointedModel,
    sig: QuantifierSignature,
    f: Formula,
    max_states: int,
) -> Optional[PointedModel]:
    """First enumerated pointed model that refines ``pm`` for ``sig`` and
    satisfies ``f``; None when the bound holds no witness (inconclusive
    for the unbounded semantics)."""
    sig.check_alphabet(pm.model.alphabet)
    actions = tuple(pm.model.alphabet)
    atoms = witness_atoms(pm, f)
    kernel_ok = not has_quantifier(f)
    prog_cache: dict[int, object] = {}
    for k in range(1, max_states + 1):
        total = model_count(k, len(actions), len(atoms))
        if kernel_ok:
            if k not in prog_cache:
                prog_cache[k] = compile_formula(f, actions, atoms)
            start = 0
            while start < total:
                count = min(_BLOCK, total - start)
                fam = family_block(k, actions, atoms, start, count)
                hits = sat_roots(prog_cache[k], fam) & refines_family(pm, fam, sig)
                if hits.any():
                    idx = start + int(np.argmax(hits))
                    cand = pointed_from_index(idx, k, actions, atoms)
                    _certify(pm, sig, cand, f)
                    return cand
                start += count
        else:
            for idx in range(total):
                cand = pointed_from_index(idx, k, actions, atoms)
                if ccref.refines(pm, cand, (), sig) and _holds(cand, f):
                    return cand
    return None
