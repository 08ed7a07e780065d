"""Bit-packed model families for the enumeration sweeps.

A model with k states over actions (a_0..a_{A-1}) and atoms (r_0..r_{P-1})
is one integer: first A blocks of k*k transition bits (bit u*k+v inside a
block is the edge u->v), then P blocks of k valuation bits.  Enumerating
all integers in range enumerates every model exactly once, rooted at
state 0, in a deterministic order shared by every consumer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..lts import Model, PointedModel
from ..syntax import ActionAlphabet

MAX_DENSE_BITS = 24


def model_bits(n_states: int, n_actions: int, n_atoms: int) -> int:
    return n_actions * n_states * n_states + n_atoms * n_states


def model_count(n_states: int, n_actions: int, n_atoms: int) -> int:
    return 1 << model_bits(n_states, n_actions, n_atoms)


@dataclass(frozen=True)
class PackedFamily:
    """A contiguous slice of the enumeration for one state count."""

    n_states: int
    actions: tuple[str, ...]
    atoms: tuple[str, ...]
    start: int
    trans: np.ndarray  # (n_models, n_actions) int64 transition masks
    val: np.ndarray  # (n_models, n_atoms) int64 valuation masks

    def __len__(self) -> int:
        return self.trans.shape[0]


def family_block(
    n_states: int,
    actions: tuple[str, ...],
    atoms: tuple[str, ...],
    start: int,
    count: int,
) -> PackedFamily:
    """Decode indices [start, start+count) into transition/valuation masks."""
    k2 = n_states * n_states
    total = model_count(n_states, len(actions), len(atoms))
    if start < 0 or start + count > total:
        raise ValueError("block out of range")
    idx = np.arange(start, start + count, dtype=np.int64)
    trans = np.empty((count, len(actions)), dtype=np.int64)
    val = np.empty((count, len(atoms)), dtype=np.int64)
    for ai in range(len(actions)):
        trans[:, ai] = (idx >> (ai * k2)) & ((1 << k2) - 1)
    base = len(actions) * k2
    for pi in range(len(atoms)):
        val[:, pi] = (idx >> (base + pi * n_states)) & ((1 << n_states) - 1)
    return PackedFamily(n_states, actions, atoms, start, trans, val)


def full_family(
    n_states: int, actions: tuple[str, ...], atoms: tuple[str, ...]
) -> PackedFamily:
    bits = model_bits(n_states, len(actions), len(atoms))
    if bits > MAX_DENSE_BITS:
        raise ValueError(
            f"family of {bits} bits too large to materialize; use family_block"
        )
    return family_block(n_states, actions, atoms, 0, 1 << bits)


def state_names(n_states: int) -> tuple[str, ...]:
    return tuple(f"w{i}" for i in range(n_states))


def model_from_index(
    index: int, n_states: int, actions: tuple[str, ...], atoms: tuple[str, ...]
) -> Model:
    """The model a given enumeration index encodes."""
    k2 = n_states * n_states
    names = state_names(n_states)
    transitions = {}
    for ai, a in enumerate(actions):
        mask = (index >> (ai * k2)) & ((1 << k2) - 1)
        transitions[a] = frozenset(
            (names[u], names[v])
            for u in range(n_states)
            for v in range(n_states)
            if mask >> (u * n_states + v) & 1
        )
    base = len(actions) * k2
    valuation = {}
    for pi, r in enumerate(atoms):
        mask = (index >> (base + pi * n_states)) & ((1 << n_states) - 1)
        valuation[r] = frozenset(
            names[v] for v in range(n_states) if mask >> v & 1
        )
    return Model(
        alphabet=ActionAlphabet(actions),
        states=names,
        transitions=transitions,
        valuation=valuation,
    )


def pointed_from_index(
    index: int, n_states: int, actions: tuple[str, ...], atoms: tuple[str, ...]
) -> PointedModel:
    return PointedModel(model_from_index(index, n_states, actions, atoms), "w0")


def model_to_index(m: Model, atoms: tuple[str, ...]) -> int:
    """Inverse of model_from_index for models with the canonical state
    order; used by tests."""
    k = len(m.states)
    pos = {s: i for i, s in enumerate(m.states)}
    idx = 0
    for ai, a in enumerate(m.alphabet):
        block = 0
        for (u, v) in m.transitions[a]:
            block |= 1 << (pos[u] * k + pos[v])
        idx |= block << (ai * k * k)
    base = len(m.alphabet) * k * k
    for pi, r in enumerate(atoms):
        block = 0
        for s in m.valuation.get(r, frozenset()):
            block |= 1 << pos[s]
        idx |= block << (base + pi * k)
    return idx


@dataclass(frozen=True)
class PackedModel:
    """One concrete model in kernel form, for the fixed side of a sweep."""

    n_states: int
    trans: np.ndarray  # (n_actions,) int64
    state_atoms: np.ndarray  # (n_states,) int64 atom-set bitmask per state
    root: int


def pack_model(m: Model, atoms: tuple[str, ...], point: str) -> PackedModel:
    """Kernel form of a single model; every declared atom outside the
    given atom list must be empty-extension to be representable."""
    k = len(m.states)
    pos = {s: i for i, s in enumerate(m.states)}
    trans = np.zeros(len(m.alphabet), dtype=np.int64)
    for ai, a in enumerate(m.alphabet):
        block = 0
        for (u, v) in m.transitions[a]:
            block |= 1 << (pos[u] * k + pos[v])
        trans[ai] = block
    state_atoms = np.zeros(k, dtype=np.int64)
    atom_pos = {r: i for i, r in enumerate(atoms)}
    for r, ext in m.valuation.items():
        if r not in atom_pos:
            if ext:
                raise ValueError(
                    f"atom {r!r} outside the packed atom list has non-empty extension"
                )
            continue
        for s in ext:
            state_atoms[pos[s]] |= 1 << atom_pos[r]
    return PackedModel(k, trans, state_atoms, pos[point])
