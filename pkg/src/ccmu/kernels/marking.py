"""Marking-existence sweeps: evaluate one tableau against every model of a
packed family.  The tableau compiles to flat arrays (children before
parents); per model the kernel computes which states can carry each node
and reports the root's mask."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import UnboundVariable
from ..syntax import Atom, Bot, Cover, Neg, Top
from ..tableau import Tableau
from .backend import use_numba
from .packed import PackedFamily


@dataclass(frozen=True)
class CompiledTableau:
    node_kind: np.ndarray  # 0 nonmodal, 1 modal; root is the last node
    lit_pos: np.ndarray
    lit_neg: np.ndarray
    action_mask: np.ndarray
    child_start: np.ndarray
    child_end: np.ndarray
    child_ids: np.ndarray
    child_action: np.ndarray
    n_actions: int


def compile_tableau(
    t: Tableau, actions: tuple[str, ...], atoms: tuple[str, ...]
) -> CompiledTableau:
    action_pos = {a: i for i, a in enumerate(actions)}
    atom_pos = {r: i for i, r in enumerate(atoms)}
    order = list(reversed(range(len(t.nodes))))  # children first, root last
    new_id = {nid: i for i, nid in enumerate(order)}
    n = len(order)
    node_kind = np.zeros(n, dtype=np.int64)
    lit_pos = np.zeros(n, dtype=np.int64)
    lit_neg = np.zeros(n, dtype=np.int64)
    action_mask = np.zeros(n, dtype=np.int64)
    child_start = np.zeros(n, dtype=np.int64)
    child_end = np.zeros(n, dtype=np.int64)
    child_ids: list[int] = []
    child_action: list[int] = []
    # a false label member kills a node: bit 62 never occurs in a state's
    # atom mask, so requiring it makes the literal check fail everywhere
    DEAD = 1 << 62
    for i, nid in enumerate(order):
        node = t.nodes[nid]
        node_kind[i] = 1 if node.modal else 0
        child_start[i] = len(child_ids)
        for (act, c) in node.children:
            child_ids.append(new_id[c])
            child_action.append(action_pos[act] if act is not None else -1)
        child_end[i] = len(child_ids)
        if node.modal:
            for g in node.label:
                if isinstance(g, Top):
                    continue
                if isinstance(g, Bot):
                    lit_pos[i] |= DEAD
                elif isinstance(g, Atom):
                    if g.name not in atom_pos:
                        raise UnboundVariable(f"atom {g.name!r} not in packed list")
                    lit_pos[i] |= 1 << atom_pos[g.name]
                elif isinstance(g, Neg):
                    assert isinstance(g.child, Atom)
                    if g.child.name not in atom_pos:
                        raise UnboundVariable(
                            f"atom {g.child.name!r} not in packed list"
                        )
                    lit_neg[i] |= 1 << atom_pos[g.child.name]
                elif isinstance(g, Cover):
                    action_mask[i] |= 1 << action_pos[g.action]
    return CompiledTableau(
        node_kind,
        lit_pos,
        lit_neg,
        action_mask,
        child_start,
        child_end,
        np.array(child_ids, dtype=np.int64),
        np.array(child_action, dtype=np.int64),
        len(actions),
    )


def _marking_numpy(ct: CompiledTableau, fam: PackedFamily) -> np.ndarray:
    k = fam.n_states
    n = len(fam)
    full = (1 << k) - 1
    n_nodes = ct.node_kind.shape[0]
    av = []
    for s in range(k):
        acc = np.zeros(n, dtype=np.int64)
        for p in range(len(fam.atoms)):
            acc |= ((fam.val[:, p] >> s) & 1) << p
        av.append(acc)
    ok = [np.zeros(n, dtype=np.int64) for _ in range(n_nodes)]
    for node in range(n_nodes):
        cs, ce = int(ct.child_start[node]), int(ct.child_end[node])
        if ct.node_kind[node] == 0:
            acc = np.zeros(n, dtype=np.int64)
            for ci in range(cs, ce):
                acc |= ok[ct.child_ids[ci]]
            ok[node] = acc
            continue
        mask = np.zeros(n, dtype=np.int64)
        for s in range(k):
            good = ((int(ct.lit_pos[node]) & ~av[s]) == 0) & (
                (int(ct.lit_neg[node]) & av[s]) == 0
            )
            for a in range(ct.n_actions):
                if not (int(ct.action_mask[node]) >> a) & 1:
                    continue
                union = np.zeros(n, dtype=np.int64)
                for ci in range(cs, ce):
                    if ct.child_action[ci] == a:
                        union |= ok[ct.child_ids[ci]]
                succ = (fam.trans[:, a] >> (s * k)) & full
                good &= (succ & ~union) == 0
                for ci in range(cs, ce):
                    if ct.child_action[ci] == a:
                        good &= (succ & ok[ct.child_ids[ci]]) != 0
            mask |= good.astype(np.int64) << s
        ok[node] = mask
    return ok[n_nodes - 1]


def marking_roots(ct: CompiledTableau, fam: PackedFamily, root: int = 0) -> np.ndarray:
    """Boolean array: does a marking exist placing each model's root at
    the tableau root."""
    if use_numba():
        from ._jit import marking_sweep_jit

        out = np.empty(len(fam), dtype=np.int64)
        marking_sweep_jit(
            fam.n_states,
            fam.trans,
            fam.val,
            ct.node_kind,
            ct.lit_pos,
            ct.lit_neg,
            ct.action_mask,
            ct.child_start,
            ct.child_end,
            ct.child_ids,
            ct.child_action,
            ct.n_actions,
            out,
        )
        masks = out
    else:
        masks = _marking_numpy(ct, fam)
    return ((masks >> root) & 1).astype(bool)
