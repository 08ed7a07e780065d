"""Numba implementations of the sweep kernels.

Kept in one module so the pure-numpy fallback never imports numba; every
function here mirrors a numpy twin and must produce identical output.
Packed bit matrices carry 32 payload bits per int64 word to dodge signed
shift corner cases.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

OP_TOP = 0
OP_BOT = 1
OP_ATOM = 2
OP_NEG = 3
OP_AND = 4
OP_OR = 5
OP_BOX = 6
OP_DIA = 7
OP_FIXPRE = 8
OP_FIXPOST = 9


@njit(cache=True, parallel=True)
def eval_program_jit(code, n_regs, result, k, trans, val, out):
    n = trans.shape[0]
    full = (np.int64(1) << k) - 1
    n_instr = code.shape[0]
    for m in prange(n):
        regs = np.zeros(n_regs, dtype=np.int64)
        counts = np.zeros(n_instr, dtype=np.int64)
        ip = 0
        while ip < n_instr:
            op = code[ip, 0]
            a = code[ip, 1]
            b = code[ip, 2]
            c = code[ip, 3]
            d = code[ip, 4]
            if op == OP_TOP:
                regs[c] = full
            elif op == OP_BOT:
                regs[c] = 0
            elif op == OP_ATOM:
                regs[c] = val[m, a]
            elif op == OP_NEG:
                regs[c] = full & ~regs[a]
            elif op == OP_AND:
                regs[c] = regs[a] & regs[b]
            elif op == OP_OR:
                regs[c] = regs[a] | regs[b]
            elif op == OP_BOX:
                src = regs[b]
                acc = np.int64(0)
                t = trans[m, a]
                for u in range(k):
                    succ = (t >> (u * k)) & full
                    if (succ & (full & ~src)) == 0:
                        acc |= np.int64(1) << u
                regs[c] = acc
            elif op == OP_DIA:
                src = regs[b]
                acc = np.int64(0)
                t = trans[m, a]
                for u in range(k):
                    succ = (t >> (u * k)) & full
                    if (succ & src) != 0:
                        acc |= np.int64(1) << u
                regs[c] = acc
            elif op == OP_FIXPRE:
                regs[a] = 0 if b == 0 else full
                counts[ip] = 0
            elif op == OP_FIXPOST:
                counts[d] += 1
                if counts[d] < k:
                    regs[a] = regs[b]
                    ip = d
                else:
                    regs[c] = regs[b]
            ip += 1
        out[m] = regs[result]


@njit(cache=True)
def _refines_one(
    km,
    spec_trans,
    spec_atoms,
    si,
    m_root,
    kn,
    n_trans,
    n_val,
    cand,
    n_root,
    forth_acts,
    back_acts,
    p_mask,
):
    """Pair-deletion refinement between spec row ``si`` and candidate
    ``cand``; returns whether the root pair survives."""
    n_actions = forth_acts.shape[0]
    n_atoms = n_val.shape[1]
    knmask = (np.int64(1) << kn) - 1
    root_bit = m_root * kn + n_root
    z = np.int64(0)
    for v in range(kn):
        av = np.int64(0)
        for p in range(n_atoms):
            av |= ((n_val[cand, p] >> v) & 1) << p
        for u in range(km):
            if ((spec_atoms[si, u] ^ av) & ~p_mask) == 0:
                z |= np.int64(1) << (u * kn + v)
    changed = True
    while changed and ((z >> root_bit) & 1) == 1:
        changed = False
        for u in range(km):
            for v in range(kn):
                if ((z >> (u * kn + v)) & 1) == 0:
                    continue
                ok = True
                for a in range(n_actions):
                    if not forth_acts[a]:
                        continue
                    succ_v = (n_trans[cand, a] >> (v * kn)) & knmask
                    mt = spec_trans[si, a]
                    for u1 in range(km):
                        if (mt >> (u * km + u1)) & 1:
                            if ((z >> (u1 * kn)) & knmask & succ_v) == 0:
                                ok = False
                                break
                    if not ok:
                        break
                if ok:
                    for a in range(n_actions):
                        if not back_acts[a]:
                            continue
                        succ_v = (n_trans[cand, a] >> (v * kn)) & knmask
                        mt = spec_trans[si, a]
                        for v1 in range(kn):
                            if ((succ_v >> v1) & 1) == 0:
                                continue
                            found = False
                            for u1 in range(km):
                                if (mt >> (u * km + u1)) & 1 and (
                                    z >> (u1 * kn + v1)
                                ) & 1:
                                    found = True
                                    break
                            if not found:
                                ok = False
                                break
                        if not ok:
                            break
                if not ok:
                    z &= ~(np.int64(1) << (u * kn + v))
                    changed = True
    return ((z >> root_bit) & 1) == 1


@njit(cache=True, parallel=True)
def refines_sweep_jit(
    km,
    m_trans,
    m_atoms,
    m_root,
    kn,
    n_trans,
    n_val,
    n_root,
    forth_acts,
    back_acts,
    p_mask,
    out,
):
    n = n_trans.shape[0]
    spec_trans = m_trans.reshape(1, m_trans.shape[0])
    spec_atoms = m_atoms.reshape(1, m_atoms.shape[0])
    for cand in prange(n):
        out[cand] = _refines_one(
            km,
            spec_trans,
            spec_atoms,
            0,
            m_root,
            kn,
            n_trans,
            n_val,
            cand,
            n_root,
            forth_acts,
            back_acts,
            p_mask,
        )


@njit(cache=True, parallel=True)
def refines_pairs_jit(
    km,
    spec_trans,
    spec_atoms,
    kn,
    n_trans,
    n_val,
    forth_acts,
    back_acts,
    p_mask,
    out_words,
):
    """Bit matrix over (candidate, spec): candidate roots refining each
    spec root.  Specs share the state count km and root index 0."""
    n = n_trans.shape[0]
    n_spec = spec_trans.shape[0]
    for cand in prange(n):
        for si in range(n_spec):
            if _refines_one(
                km,
                spec_trans,
                spec_atoms,
                si,
                0,
                kn,
                n_trans,
                n_val,
                cand,
                0,
                forth_acts,
                back_acts,
                p_mask,
            ):
                out_words[cand, si >> 5] |= np.int64(1) << (si & 31)


@njit(cache=True)
def or_reduce_where_jit(mask, bits):
    acc = np.int64(0)
    for i in range(mask.shape[0]):
        if mask[i]:
            acc |= bits[i]
    return acc


@njit(cache=True)
def accumulate_witness_jit(pair_words, satbits, acc):
    """acc[spec] |= satbits[cand] for every candidate refining that spec."""
    n_cand, n_words = pair_words.shape
    for c in range(n_cand):
        sb = satbits[c]
        if sb == 0:
            continue
        for w in range(n_words):
            word = pair_words[c, w]
            if word == 0:
                continue
            for bit in range(32):
                if (word >> bit) & 1:
                    acc[w * 32 + bit] |= sb


@njit(cache=True)
def composition_check_jit(k1_words, k2_words, refines_words, exists_words):
    """For every intermediate candidate: every (spec m in k1, target n in
    k2) pair must already be a direct refinement (returns the count of
    counterexamples), and the pair gets recorded as having an
    intermediate."""
    n_cand, n_words = k1_words.shape
    violations = 0
    for c in range(n_cand):
        for w1 in range(n_words):
            word = k1_words[c, w1]
            if word == 0:
                continue
            for bit in range(32):
                if ((word >> bit) & 1) == 0:
                    continue
                m = w1 * 32 + bit
                for w in range(n_words):
                    k2w = k2_words[c, w]
                    if k2w == 0:
                        continue
                    exists_words[m, w] |= k2w
                    bad = k2w & ~refines_words[m, w]
                    while bad != 0:
                        bad &= bad - 1
                        violations += 1
    return violations


@njit(cache=True, parallel=True)
def marking_sweep_jit(
    k,
    trans,
    val,
    node_kind,
    lit_pos,
    lit_neg,
    action_mask,
    child_start,
    child_end,
    child_ids,
    child_action,
    n_action_count,
    out,
):
    """Bottom-up marking existence per model: ok-mask per tableau node.

    Nodes come children-before-parents.  kind 0: some child carries the
    state.  kind 1 (modal): the state satisfies every label literal and,
    per action with a cover in the label, every cover child is witnessed
    by a successor and every successor lands in some cover child.
    """
    n = trans.shape[0]
    n_nodes = node_kind.shape[0]
    full = (np.int64(1) << k) - 1
    n_atoms = val.shape[1]
    for m in prange(n):
        ok = np.zeros(n_nodes, dtype=np.int64)
        atoms_of = np.zeros(k, dtype=np.int64)
        for s in range(k):
            av = np.int64(0)
            for p in range(n_atoms):
                av |= ((val[m, p] >> s) & 1) << p
            atoms_of[s] = av
        for node in range(n_nodes):
            if node_kind[node] == 0:
                acc = np.int64(0)
                for ci in range(child_start[node], child_end[node]):
                    acc |= ok[child_ids[ci]]
                ok[node] = acc
            else:
                mask = np.int64(0)
                for s in range(k):
                    av = atoms_of[s]
                    if (lit_pos[node] & ~av) != 0:
                        continue
                    if (lit_neg[node] & av) != 0:
                        continue
                    good = True
                    for a in range(n_action_count):
                        if ((action_mask[node] >> a) & 1) == 0:
                            continue
                        union = np.int64(0)
                        for ci in range(child_start[node], child_end[node]):
                            if child_action[ci] == a:
                                union |= ok[child_ids[ci]]
                        succ = (trans[m, a] >> (s * k)) & full
                        if (succ & ~union) != 0:
                            good = False
                            break
                        for ci in range(child_start[node], child_end[node]):
                            if child_action[ci] == a:
                                if (succ & ok[child_ids[ci]]) == 0:
                                    good = False
                                    break
                        if not good:
                            break
                    if good:
                        mask |= np.int64(1) << s
                ok[node] = mask
        out[m] = ok[n_nodes - 1]
