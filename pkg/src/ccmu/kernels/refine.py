"""Refinement sweeps: test one fixed pointed model against every model of
a packed family at once.

Per candidate the relation is a (k_m * k_n)-bit integer seeded with the
atom-compatible pairs and shrunk by forth/back pair deletion until stable
or until the root pair dies.  The numpy path runs the same deletion
vectorized over the candidate axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..lts import PointedModel
from ..syntax import QuantifierSignature
from .backend import use_numba
from .packed import PackedFamily, PackedModel, pack_model


def _action_flags(
    actions: tuple[str, ...], sig: QuantifierSignature
) -> tuple[np.ndarray, np.ndarray]:
    forth = np.array([a not in sig.contra for a in actions], dtype=np.bool_)
    back = np.array([a not in sig.cov for a in actions], dtype=np.bool_)
    return forth, back


def _refines_numpy(
    spec: PackedModel,
    family: PackedFamily,
    forth: np.ndarray,
    back: np.ndarray,
    p_mask: int,
    n_root: int,
) -> np.ndarray:
    km, kn = spec.n_states, family.n_states
    n = len(family)
    knmask = (1 << kn) - 1
    n_actions = len(family.actions)
    n_atoms = len(family.atoms)

    z = np.zeros(n, dtype=np.int64)
    for v in range(kn):
        av = np.zeros(n, dtype=np.int64)
        for p in range(n_atoms):
            av |= ((family.val[:, p] >> v) & 1) << p
        for u in range(km):
            compat = ((int(spec.state_atoms[u]) ^ av) & ~p_mask) == 0
            z |= compat.astype(np.int64) << (u * kn + v)

    m_succ = [
        [
            [
                u1
                for u1 in range(km)
                if int(spec.trans[a]) >> (u * km + u1) & 1
            ]
            for u in range(km)
        ]
        for a in range(n_actions)
    ]

    while True:
        new_z = z.copy()
        for u in range(km):
            for v in range(kn):
                bit = (z >> (u * kn + v)) & 1
                ok = bit.astype(bool)
                for a in range(n_actions):
                    succ_v = (family.trans[:, a] >> (v * kn)) & knmask
                    if forth[a]:
                        for u1 in m_succ[a][u]:
                            ok &= (((z >> (u1 * kn)) & knmask) & succ_v) != 0
                    if back[a]:
                        for v1 in range(kn):
                            need = ((succ_v >> v1) & 1).astype(bool)
                            found = np.zeros(len(z), dtype=bool)
                            for u1 in m_succ[a][u]:
                                found |= ((z >> (u1 * kn + v1)) & 1).astype(bool)
                            ok &= ~need | found
                new_z &= ~((bit & ~ok.astype(np.int64)) << (u * kn + v))
        if np.array_equal(new_z, z):
            break
        z = new_z
    return ((z >> (spec.root * kn + n_root)) & 1).astype(bool)


_JIT = None


def _jit_sweep():
    global _JIT
    if _JIT is None:
        from ._jit import refines_sweep_jit

        _JIT = refines_sweep_jit
    return _JIT


def refines_family(
    pm: PointedModel,
    family: PackedFamily,
    sig: QuantifierSignature,
    p_atoms: tuple[str, ...] = (),
    n_root: int = 0,
) -> np.ndarray:
    """Boolean array over the family: does each candidate (at its root)
    refine the given pointed model for the signature."""
    spec = pack_model(pm.model, family.atoms, pm.point)
    forth, back = _action_flags(family.actions, sig)
    atom_pos = {r: i for i, r in enumerate(family.atoms)}
    p_mask = 0
    for r in p_atoms:
        if r in atom_pos:
            p_mask |= 1 << atom_pos[r]
    if use_numba():
        out = np.empty(len(family), dtype=np.bool_)
        _jit_sweep()(
            spec.n_states,
            spec.trans,
            spec.state_atoms,
            spec.root,
            family.n_states,
            family.trans,
            family.val,
            n_root,
            forth,
            back,
            p_mask,
            out,
        )
        return out
    return _refines_numpy(spec, family, forth, back, p_mask, n_root)


def or_reduce_where(mask: np.ndarray, bits: np.ndarray) -> int:
    """OR of bits[i] over the set mask positions."""
    if use_numba():
        from ._jit import or_reduce_where_jit

        return int(or_reduce_where_jit(mask, bits))
    if not mask.any():
        return 0
    return int(np.bitwise_or.reduce(bits[mask]))


@dataclass(frozen=True)
class SpecBatch:
    """Several spec models padded to one state count, kernel-ready; padding
    states are isolated and never reachable, so they cannot affect the
    root pair."""

    n_states: int
    trans: np.ndarray  # (n_spec, n_actions) int64
    state_atoms: np.ndarray  # (n_spec, n_states) int64
    models: tuple[PointedModel, ...]


def pack_spec_batch(
    pms: "list[PointedModel]", atoms: tuple[str, ...]
) -> SpecBatch:
    km = max(len(pm.model.states) for pm in pms)
    n_actions = len(pms[0].model.alphabet)
    trans = np.zeros((len(pms), n_actions), dtype=np.int64)
    state_atoms = np.zeros((len(pms), km), dtype=np.int64)
    for i, pm in enumerate(pms):
        if pm.model.states.index(pm.point) != 0:
            raise ValueError("spec batches require the point at state index 0")
        single = pack_model(pm.model, atoms, pm.point)
        k = single.n_states
        for ai in range(n_actions):
            block = int(single.trans[ai])
            # re-space k-state rows into km-state rows
            out = 0
            for u in range(k):
                row = (block >> (u * k)) & ((1 << k) - 1)
                out |= row << (u * km)
            trans[i, ai] = out
        state_atoms[i, :k] = single.state_atoms
    return SpecBatch(km, trans, state_atoms, tuple(pms))


def _pairs_numpy(
    batch: SpecBatch,
    family: PackedFamily,
    forth: np.ndarray,
    back: np.ndarray,
    p_mask: int,
) -> np.ndarray:
    n_words = (len(batch.models) + 31) // 32
    out = np.zeros((len(family), n_words), dtype=np.int64)
    for si in range(len(batch.models)):
        spec = PackedModel(
            batch.n_states, batch.trans[si], batch.state_atoms[si], 0
        )
        col = _refines_numpy(spec, family, forth, back, p_mask, 0)
        out[:, si >> 5] |= col.astype(np.int64) << (si & 31)
    return out


def refines_pairs(
    pms: "list[PointedModel]",
    family: PackedFamily,
    sig: QuantifierSignature,
    p_atoms: tuple[str, ...] = (),
) -> np.ndarray:
    """Packed bit matrix (candidate, spec-word): which candidates refine
    which spec models; 32 payload bits per word."""
    batch = pack_spec_batch(pms, family.atoms)
    forth, back = _action_flags(family.actions, sig)
    atom_pos = {r: i for i, r in enumerate(family.atoms)}
    p_mask = 0
    for r in p_atoms:
        if r in atom_pos:
            p_mask |= 1 << atom_pos[r]
    if use_numba():
        from ._jit import refines_pairs_jit

        n_words = (len(batch.models) + 31) // 32
        out = np.zeros((len(family), n_words), dtype=np.int64)
        refines_pairs_jit(
            batch.n_states,
            batch.trans,
            batch.state_atoms,
            family.n_states,
            family.trans,
            family.val,
            forth,
            back,
            p_mask,
            out,
        )
        return out
    return _pairs_numpy(batch, family, forth, back, p_mask)


def accumulate_witness(pair_words: np.ndarray, satbits: np.ndarray, acc: np.ndarray):
    """acc[spec] |= satbits[cand] over all candidates refining that spec."""
    if use_numba():
        from ._jit import accumulate_witness_jit

        accumulate_witness_jit(pair_words, satbits, acc)
        return
    n_cand, n_words = pair_words.shape
    for w in range(n_words):
        for bit in range(32):
            idx = w * 32 + bit
            if idx >= acc.shape[0]:
                break
            mask = ((pair_words[:, w] >> bit) & 1).astype(bool)
            acc[idx] |= or_reduce_where(mask, satbits)


def composition_check(
    k1_words: np.ndarray,
    k2_words: np.ndarray,
    refines_words: np.ndarray,
    exists_words: np.ndarray,
) -> int:
    """Record which (spec, target) pairs gain an intermediate from this
    candidate block and count pairs whose composed route is not already a
    direct refinement (must stay zero)."""
    if use_numba():
        from ._jit import composition_check_jit

        return int(
            composition_check_jit(k1_words, k2_words, refines_words, exists_words)
        )
    violations = 0
    n_cand, n_words = k1_words.shape
    for c in range(n_cand):
        for w1 in range(n_words):
            word = int(k1_words[c, w1])
            bit = 0
            while word >> bit:
                if (word >> bit) & 1:
                    m = w1 * 32 + bit
                    exists_words[m] |= k2_words[c]
                    bad = k2_words[c] & ~refines_words[m]
                    violations += int(sum(bin(int(x)).count("1") for x in bad))
                bit += 1
    return violations
