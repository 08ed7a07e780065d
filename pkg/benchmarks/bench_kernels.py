#!/usr/bin/env python3
"""Benchmark the sweep kernels: numba path against the pure-numpy fallback.

Both paths are invoked directly (not through the CCMU_BACKEND switch) so a
single run produces the comparison.  The workloads are the three hot
kernels on the two-action/one-atom universes: vectorized formula
evaluation, the refinement sweep against a fixed spec model, and the
tableau-marking sweep.
"""

import argparse
import time

import numpy as np

from ccmu.kernels import full_family, pointed_from_index
from ccmu.kernels.evalform import _eval_numpy, compile_formula
from ccmu.kernels.marking import _marking_numpy, compile_tableau
from ccmu.kernels.packed import family_block, model_count, pack_model
from ccmu.kernels.refine import _action_flags, _refines_numpy
from ccmu.syntax import parse, signature
from ccmu.tableau import build_tableau

ACTIONS = ("a", "b")
ATOMS = ("p",)
SIG = signature(["a"], ["b"])


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eval(fam, numpy_cap):
    from ccmu.kernels._jit import eval_program_jit

    f = parse("nu x. mu y. ((p & [a]x) | <b>y)")
    prog = compile_formula(f, ACTIONS, ATOMS)
    out = np.empty(len(fam), dtype=np.int64)
    eval_program_jit(
        prog.code, prog.n_regs, prog.result, fam.n_states, fam.trans, fam.val, out
    )
    t_jit = _time(
        lambda: eval_program_jit(
            prog.code, prog.n_regs, prog.result, fam.n_states, fam.trans, fam.val, out
        )
    )
    small = family_block(fam.n_states, ACTIONS, ATOMS, 0, min(len(fam), numpy_cap))
    t_np = _time(
        lambda: _eval_numpy(prog, small.n_states, small.trans, small.val), repeat=2
    )
    return ("formula evaluation", len(fam), t_jit, len(small), t_np)


def bench_refines(fam, numpy_cap):
    from ccmu.kernels._jit import refines_sweep_jit

    pm = pointed_from_index(5, 2, ACTIONS, ATOMS)
    spec = pack_model(pm.model, ATOMS, pm.point)
    forth, back = _action_flags(ACTIONS, SIG)
    out = np.empty(len(fam), dtype=np.bool_)

    def jit():
        refines_sweep_jit(
            spec.n_states, spec.trans, spec.state_atoms, spec.root,
            fam.n_states, fam.trans, fam.val, 0, forth, back, 0, out,
        )

    jit()
    t_jit = _time(jit)
    small = family_block(fam.n_states, ACTIONS, ATOMS, 0, min(len(fam), numpy_cap))
    t_np = _time(lambda: _refines_numpy(spec, small, forth, back, 0, 0), repeat=2)
    return ("refinement sweep", len(fam), t_jit, len(small), t_np)


def bench_marking(fam, numpy_cap):
    from ccmu.kernels._jit import marking_sweep_jit

    t = build_tableau(parse("(p & nabla_a {p, true}) | (!p & nabla_b {})"))
    ct = compile_tableau(t, ACTIONS, ATOMS)
    out = np.empty(len(fam), dtype=np.int64)

    def jit():
        marking_sweep_jit(
            fam.n_states, fam.trans, fam.val, ct.node_kind, ct.lit_pos, ct.lit_neg,
            ct.action_mask, ct.child_start, ct.child_end, ct.child_ids,
            ct.child_action, ct.n_actions, out,
        )

    jit()
    t_jit = _time(jit)
    small = family_block(fam.n_states, ACTIONS, ATOMS, 0, min(len(fam), numpy_cap))
    t_np = _time(lambda: _marking_numpy(ct, small), repeat=2)
    return ("marking sweep", len(fam), t_jit, len(small), t_np)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--states", type=int, default=3, help="universe state count")
    ap.add_argument(
        "--numpy-cap",
        type=int,
        default=1 << 17,
        help="cap on candidates for the numpy fallback timings",
    )
    args = ap.parse_args()

    fam = full_family(args.states, ACTIONS, ATOMS)
    total = model_count(args.states, len(ACTIONS), len(ATOMS))
    print(f"universe: {total} models with {args.states} states over {ACTIONS}/{ATOMS}")
    print(f"{'kernel':<20} {'numba':>14} {'numpy':>14} {'speedup':>9}")
    for bench in (bench_eval, bench_refines, bench_marking):
        name, n_jit, t_jit, n_np, t_np = bench(fam, args.numpy_cap)
        jit_rate = n_jit / t_jit
        np_rate = n_np / t_np
        print(
            f"{name:<20} {jit_rate:>10.0f}/s {np_rate:>10.0f}/s "
            f"{jit_rate / np_rate:>8.1f}x"
        )


if __name__ == "__main__":
    main()
