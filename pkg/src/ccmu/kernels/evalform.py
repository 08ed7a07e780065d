"""Vectorized formula evaluation over packed model families.

Formulas compile to a flat register program (covers expanded through the
box/diamond definition first).  Fixpoints run exactly n_states rounds,
which reaches the fixpoint on every model at once.  The numba path
interprets the program per model; the numpy path interprets it once with
model-axis arrays.  Both return the satisfying state set of every model
as a k-bit mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import QuantifierPresent, UnboundVariable
from ..syntax import (
    And,
    Atom,
    Bot,
    Box,
    Cover,
    Diamond,
    Exists,
    Forall,
    Formula,
    Mu,
    Neg,
    Nu,
    Or,
    Top,
    expand_cover,
    render,
)
from .backend import use_numba
from .packed import PackedFamily

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


@dataclass(frozen=True)
class Program:
    code: np.ndarray  # (n_instr, 5) int64: op, a, b, c, d
    n_regs: int
    result: int


def compile_formula(
    f: Formula, actions: tuple[str, ...], atoms: tuple[str, ...]
) -> Program:
    """Flatten a quantifier-free formula; free atoms must appear in the
    atom list, bound variables become loop registers."""
    code: list[list[int]] = []
    n_regs = 0
    action_pos = {a: i for i, a in enumerate(actions)}
    atom_pos = {r: i for i, r in enumerate(atoms)}

    def new_reg() -> int:
        nonlocal n_regs
        n_regs += 1
        return n_regs - 1

    def emit(op, a=0, b=0, c=0, d=0) -> None:
        code.append([op, a, b, c, d])

    def go(g: Formula, env: dict[str, int]) -> int:
        if isinstance(g, Top):
            r = new_reg()
            emit(OP_TOP, 0, 0, r)
            return r
        if isinstance(g, Bot):
            r = new_reg()
            emit(OP_BOT, 0, 0, r)
            return r
        if isinstance(g, Atom):
            if g.name in env:
                return env[g.name]
            if g.name not in atom_pos:
                raise UnboundVariable(
                    f"atom {g.name!r} not in the packed atom list {atoms}"
                )
            r = new_reg()
            emit(OP_ATOM, atom_pos[g.name], 0, r)
            return r
        if isinstance(g, Neg):
            s = go(g.child, env)
            r = new_reg()
            emit(OP_NEG, s, 0, r)
            return r
        if isinstance(g, And):
            x, y = go(g.left, env), go(g.right, env)
            r = new_reg()
            emit(OP_AND, x, y, r)
            return r
        if isinstance(g, Or):
            x, y = go(g.left, env), go(g.right, env)
            r = new_reg()
            emit(OP_OR, x, y, r)
            return r
        if isinstance(g, Box):
            s = go(g.child, env)
            r = new_reg()
            emit(OP_BOX, action_pos[g.action], s, r)
            return r
        if isinstance(g, Diamond):
            s = go(g.child, env)
            r = new_reg()
            emit(OP_DIA, action_pos[g.action], s, r)
            return r
        if isinstance(g, Cover):
            return go(expand_cover(g), env)
        if isinstance(g, (Mu, Nu)):
            var_reg = new_reg()
            pre_ip = len(code)
            emit(OP_FIXPRE, var_reg, 0 if isinstance(g, Mu) else 1, 0)
            inner = dict(env)
            inner[g.var] = var_reg
            body = go(g.body, inner)
            dest = new_reg()
            # a, b, c, d = var reg, body reg, dest, jump target
            emit(OP_FIXPOST, var_reg, body, dest, pre_ip)
            return dest
        if isinstance(g, (Exists, Forall)):
            raise QuantifierPresent(f"quantifier in compiled formula: {render(g)}")
        raise TypeError(f"unknown formula node {g!r}")

    result = go(f, {})
    return Program(np.array(code, dtype=np.int64), n_regs, result)


def _eval_numpy(prog: Program, k: int, trans: np.ndarray, val: np.ndarray) -> np.ndarray:
    n = trans.shape[0]
    code = prog.code
    full = (1 << k) - 1
    kmask = full
    regs = [np.zeros(n, dtype=np.int64) for _ in range(prog.n_regs)]
    counts = {}
    ip = 0
    while ip < code.shape[0]:
        op, a, b, c, d = code[ip]
        if op == OP_TOP:
            regs[c] = np.full(n, full, dtype=np.int64)
        elif op == OP_BOT:
            regs[c] = np.zeros(n, dtype=np.int64)
        elif op == OP_ATOM:
            regs[c] = val[:, a].copy()
        elif op == OP_NEG:
            regs[c] = full & ~regs[a]
        elif op == OP_AND:
            regs[c] = regs[a] & regs[b]
        elif op == OP_OR:
            regs[c] = regs[a] | regs[b]
        elif op == OP_BOX:
            src = regs[b]
            out = np.zeros(n, dtype=np.int64)
            nsrc = (~src) & kmask
            for u in range(k):
                succ = (trans[:, a] >> (u * k)) & kmask
                out |= ((succ & nsrc) == 0).astype(np.int64) << u
            regs[c] = out
        elif op == OP_DIA:
            src = regs[b]
            out = np.zeros(n, dtype=np.int64)
            for u in range(k):
                succ = (trans[:, a] >> (u * k)) & kmask
                out |= ((succ & src) != 0).astype(np.int64) << u
            regs[c] = out
        elif op == OP_FIXPRE:
            regs[a] = np.full(n, 0 if b == 0 else full, dtype=np.int64)
            counts[ip] = 0
        elif op == OP_FIXPOST:
            counts[d] += 1
            if counts[d] < k:
                regs[a] = regs[b]
                ip = d
            else:
                regs[c] = regs[b]
        ip += 1
    return regs[prog.result]


_NUMBA_EVAL = None


def _numba_eval():
    global _NUMBA_EVAL
    if _NUMBA_EVAL is None:
        from ._jit import eval_program_jit

        _NUMBA_EVAL = eval_program_jit
    return _NUMBA_EVAL


def eval_family(prog: Program, family: PackedFamily) -> np.ndarray:
    """Satisfying-state mask of every model in the family."""
    k = family.n_states
    if use_numba():
        out = np.empty(len(family), dtype=np.int64)
        _numba_eval()(
            prog.code, prog.n_regs, prog.result, k, family.trans, family.val, out
        )
        return out
    return _eval_numpy(prog, k, family.trans, family.val)


def sat_roots(prog: Program, family: PackedFamily, root: int = 0) -> np.ndarray:
    """Boolean array: does each model satisfy the formula at its root."""
    return (eval_family(prog, family) >> root & 1).astype(bool)
