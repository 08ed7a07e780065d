"""Enumerated-universe property sweeps.

These drive the heavy cross-validations: elimination against the witness
oracle, axiom validity, the composition law, fixpoint semantics against
subset enumeration, tableau markings against the model checker, and
disjunctive-form conversion.  The self-test command runs them with
configurable bounds; the acceptance suite runs them at the full calibrated
bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import ccref
from .dnf import to_df
from .elim import DEFAULT_LIMITS, Limits, eliminate
from .errors import CcmuError
from .kernels import (
    compile_formula,
    eval_family,
    family_block,
    full_family,
    model_count,
    pointed_from_index,
    sat_roots,
)
from .kernels.marking import compile_tableau, marking_roots
from .kernels.packed import PackedFamily
from .kernels.refine import (
    accumulate_witness,
    composition_check,
    refines_pairs,
)
from .lts import PointedModel
from .syntax import (
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
    QuantifierSignature,
    Top,
    TRUE,
    is_df,
    render,
    signature,
)
from .tableau import build_tableau

_BLOCK = 1 << 19


def dense_families(
    actions: tuple[str, ...], atoms: tuple[str, ...], max_states: int
) -> list[PackedFamily]:
    return [full_family(k, actions, atoms) for k in range(1, max_states + 1)]


def spec_models(
    actions: tuple[str, ...], atoms: tuple[str, ...], max_states: int
) -> list[PointedModel]:
    out = []
    for k in range(1, max_states + 1):
        for idx in range(model_count(k, len(actions), len(atoms))):
            out.append(pointed_from_index(idx, k, actions, atoms))
    return out


# ---------------------------------------------------------------------------
# Elimination vs the witness oracle (soundness / completeness)


@dataclass
class EliminationSweep:
    formulas: list[Formula]
    specs: list[PointedModel]
    translations: list[Optional[Formula]]
    translation_errors: list[Optional[str]]
    check_true: np.ndarray  # (n_specs,) int64 bitmask over formulas
    witness_bits: np.ndarray  # (n_specs,) int64 bitmask over formulas
    soundness_violations: list[tuple[int, int]] = field(default_factory=list)
    completeness_misses: list[tuple[int, int]] = field(default_factory=list)

    def finish(self) -> None:
        for si in range(len(self.specs)):
            wit = int(self.witness_bits[si])
            chk = int(self.check_true[si])
            for fi in range(len(self.formulas)):
                has_wit = (wit >> fi) & 1
                says_true = (chk >> fi) & 1
                if has_wit and not says_true:
                    self.soundness_violations.append((si, fi))
                if says_true and not has_wit:
                    self.completeness_misses.append((si, fi))


def elimination_sweep(
    formulas,
    sig: QuantifierSignature,
    actions: tuple[str, ...],
    atoms: tuple[str, ...],
    spec_states: int = 2,
    witness_states: int = 3,
    limits: Limits = DEFAULT_LIMITS,
) -> EliminationSweep:
    """For every enumerated spec model and corpus formula: compare the
    translation verdict with bounded witness existence.  A witness without
    a true verdict breaks soundness; a true verdict without a witness is a
    completeness miss at this bound."""
    formulas = list(formulas)
    if len(formulas) > 63:
        raise ValueError("sweep packs verdicts into 63-bit masks")
    specs = spec_models(actions, atoms, spec_states)

    translations: list[Optional[Formula]] = []
    errors: list[Optional[str]] = []
    for f in formulas:
        try:
            translations.append(eliminate(Exists(sig, f), limits))
            errors.append(None)
        except CcmuError as e:
            translations.append(None)
            errors.append(f"{type(e).__name__}: {e}")

    check_true = np.zeros(len(specs), dtype=np.int64)
    spec_fams = dense_families(actions, atoms, spec_states)
    offset = 0
    for fam in spec_fams:
        for fi, xi in enumerate(translations):
            if xi is None:
                continue
            bits = sat_roots(compile_formula(xi, actions, atoms), fam)
            check_true[offset : offset + len(fam)] |= bits.astype(np.int64) << fi
        offset += len(fam)

    witness_bits = np.zeros(len(specs), dtype=np.int64)
    for k in range(1, witness_states + 1):
        total = model_count(k, len(actions), len(atoms))
        progs = [compile_formula(f, actions, atoms) for f in formulas]
        start = 0
        while start < total:
            count = min(_BLOCK, total - start)
            fam = family_block(k, actions, atoms, start, count)
            satbits = np.zeros(len(fam), dtype=np.int64)
            for fi, prog in enumerate(progs):
                satbits |= sat_roots(prog, fam).astype(np.int64) << fi
            pair_words = refines_pairs(specs, fam, sig)
            accumulate_witness(pair_words, satbits, witness_bits)
            start += count

    sweep = EliminationSweep(
        formulas, specs, translations, errors, check_true, witness_bits
    )
    sweep.finish()
    return sweep


def escalate_completeness(
    sweep: EliminationSweep, sig: QuantifierSignature, bound: int
) -> list[tuple[int, int]]:
    """Re-try completeness misses with the literal witness search at a
    larger bound; returns the pairs still missing a witness."""
    from .search import witness_search

    still = []
    for (si, fi) in sweep.completeness_misses:
        found = witness_search(sweep.specs[si], sig, sweep.formulas[fi], bound)
        if found is None:
            still.append((si, fi))
    return still


# ---------------------------------------------------------------------------
# Axiom validity


@dataclass(frozen=True)
class AxiomCase:
    name: str
    lhs: Formula
    rhs: Formula
    actions: tuple[str, ...]
    equivalence: bool = True  # otherwise lhs -> rhs as a validity


def _sig(a1: str, a2: str) -> QuantifierSignature:
    return signature([a1], [a2])


def axiom_cases() -> list[AxiomCase]:
    """Instantiations of the reduction axioms over corpus material; the
    bivariant and permutation cases need a third action."""
    p = Atom("p")
    np_ = Neg(p)
    ab = ("a", "b")
    abc = ("a", "b", "c")
    s = _sig("a", "b")
    E = lambda g: Exists(s, g)
    A = lambda g: Forall(s, g)
    cov = lambda act, *ms: Cover(act, frozenset(ms))
    cases = [
        AxiomCase("CCRp1", A(p), p, ab),
        AxiomCase("CCRp1-top", A(TRUE), TRUE, ab),
        AxiomCase("CCRp2", A(np_), np_, ab),
        AxiomCase("CCRKco1", E(cov("a", Bot())), Bot(), ab),
        AxiomCase("CCRKco1-mixed", E(cov("a", p, _and(p, np_))), Bot(), ab),
        AxiomCase(
            "CCRKco2-empty", E(cov("a")), Box("a", Bot()), ab
        ),
        AxiomCase(
            "CCRKco2-singleton", E(cov("a", p)), Box("a", E(p)), ab
        ),
        AxiomCase(
            "CCRKco2-pair",
            E(cov("a", p, np_)),
            Box("a", Or(E(p), E(np_))),
            ab,
        ),
        AxiomCase("CCRKcontra-empty", E(cov("b")), TRUE, ab),
        AxiomCase(
            "CCRKcontra-singleton", E(cov("b", p)), Diamond("b", E(p)), ab
        ),
        AxiomCase(
            "CCRKcontra-pair",
            E(cov("b", p, TRUE)),
            _and(Diamond("b", E(p)), Diamond("b", E(TRUE))),
            ab,
        ),
        AxiomCase(
            "CCRKcontra-nested",
            E(cov("b", E(p))),
            Diamond("b", E(E(p))),
            ab,
        ),
        AxiomCase(
            "CCRKbis",
            E(cov("c", p)),
            Cover("c", frozenset((E(p),))),
            abc,
        ),
        AxiomCase(
            "CCRKbis-pair",
            E(cov("c", p, np_)),
            Cover("c", frozenset((E(p), E(np_)))),
            abc,
        ),
        AxiomCase(
            "CCRKconj",
            E(_and(cov("a", p), cov("b", TRUE))),
            _and(E(cov("a", p)), E(cov("b", TRUE))),
            ab,
        ),
        AxiomCase(
            "CCRKconj-guarded",
            E(_and(p, cov("a", TRUE), cov("b", p))),
            _and(p, E(cov("a", TRUE)), E(cov("b", p))),
            ab,
        ),
        AxiomCase(
            "CCRD",
            Exists(signature(["a", "c"], ["b"]), p),
            Exists(_sig("a", "b"), Exists(_sig("c", "b"), p)),
            abc,
        ),
        AxiomCase(
            "CCRD-permuted",
            Exists(_sig("a", "b"), Exists(_sig("c", "b"), cov("a", p, TRUE))),
            Exists(_sig("c", "b"), Exists(_sig("a", "b"), cov("a", p, TRUE))),
            abc,
        ),
        AxiomCase("CCRin", E(_and(p, np_)), Bot(), ab),
        AxiomCase("CCRin-cover", E(cov("a", _and(p, np_))), Bot(), ab),
    ]
    nu_body = _and(p, Or(cov("a"), cov("a", Atom("q"))))
    cases += [
        AxiomCase("CCRnu", E(Nu("q", cov("a", Atom("q")))), Nu("q", E(cov("a", Atom("q")))), ab),
        AxiomCase("CCRnu-guarded", E(Nu("q", nu_body)), Nu("q", E(nu_body)), ab),
        AxiomCase(
            "CCRmu",
            E(Mu("q", Or(p, cov("a", Atom("q"))))),
            Mu("q", E(Or(p, cov("a", Atom("q"))))),
            ab,
        ),
        AxiomCase(
            "CCRmu-contra",
            E(Mu("q", Or(p, cov("b", Atom("q"), TRUE)))),
            Mu("q", E(Or(p, cov("b", Atom("q"), TRUE)))),
            ab,
        ),
    ]
    f1_phi = Or(p, cov("a", Atom("q")))
    f1 = Mu("q", f1_phi)
    cases += [
        AxiomCase("F1", _subst(f1_phi, "q", f1), f1, ab, equivalence=False),
        AxiomCase(
            "F1-quantified",
            _subst(E(f1_phi), "q", Mu("q", E(f1_phi))),
            Mu("q", E(f1_phi)),
            ab,
            equivalence=False,
        ),
    ]
    return cases


def _and(*parts: Formula) -> Formula:
    from .syntax import big_and

    return big_and(list(parts))


def _subst(f: Formula, var: str, g: Formula) -> Formula:
    from .syntax import substitute

    return substitute(f, var, g)


@dataclass(frozen=True)
class RuleCase:
    """Soundness of the least-fixpoint rule: when the premise is valid on
    the universe, the conclusion must be too."""

    name: str
    premise: Formula
    conclusion: Formula
    actions: tuple[str, ...]


def rule_cases() -> list[RuleCase]:
    p = Atom("p")
    ab = ("a", "b")
    phi1 = Or(p, Diamond("a", Atom("q")))
    phi2 = Diamond("a", Atom("q"))
    phi3 = _and(p, Diamond("a", Atom("q")))
    return [
        RuleCase(
            "F2-unfold",
            Or(Neg(_subst(phi1, "q", Mu("q", phi1))), Mu("q", phi1)),
            Or(Neg(Mu("q", phi1)), Mu("q", phi1)),
            ab,
        ),
        RuleCase(
            "F2-bottom",
            Or(Neg(_subst(phi2, "q", Bot())), Bot()),
            Or(Neg(Mu("q", phi2)), Bot()),
            ab,
        ),
        RuleCase(
            "F2-guard",
            Or(Neg(_subst(phi3, "q", Bot())), Bot()),
            Or(Neg(Mu("q", phi3)), Bot()),
            ab,
        ),
    ]


@dataclass
class AxiomSweep:
    failures: list[str] = field(default_factory=list)
    cases_run: int = 0


def axiom_sweep(
    max_states: int = 2,
    atoms: tuple[str, ...] = ("p",),
    limits: Limits = DEFAULT_LIMITS,
) -> AxiomSweep:
    """Translate both sides of every instantiated axiom and compare full
    extensions over every enumerated model; implications and rule cases
    check validity instead."""
    out = AxiomSweep()
    for case in axiom_cases():
        fams = dense_families(case.actions, atoms, max_states)
        try:
            lhs = eliminate(case.lhs, limits)
            rhs = eliminate(case.rhs, limits)
        except CcmuError as e:
            out.failures.append(f"{case.name}: elimination failed: {e}")
            continue
        lp = compile_formula(lhs, case.actions, atoms)
        rp = compile_formula(rhs, case.actions, atoms)
        for fam in fams:
            le, re_ = eval_family(lp, fam), eval_family(rp, fam)
            if case.equivalence:
                bad = int((le != re_).sum())
            else:
                full = (1 << fam.n_states) - 1
                bad = int(((((full & ~le) | re_) != np.int64(full))).sum())
            if bad:
                out.failures.append(
                    f"{case.name}: {bad} disagreeing models at {fam.n_states} states"
                )
        out.cases_run += 1
    for rc in rule_cases():
        fams = dense_families(rc.actions, atoms, max_states)
        pp = compile_formula(rc.premise, rc.actions, atoms)
        cp = compile_formula(rc.conclusion, rc.actions, atoms)
        premise_valid = True
        for fam in fams:
            full = (1 << fam.n_states) - 1
            if int((eval_family(pp, fam) != np.int64(full)).sum()):
                premise_valid = False
        if premise_valid:
            for fam in fams:
                full = (1 << fam.n_states) - 1
                bad = int((eval_family(cp, fam) != np.int64(full)).sum())
                if bad:
                    out.failures.append(
                        f"{rc.name}: conclusion fails on {bad} models "
                        f"at {fam.n_states} states"
                    )
        else:
            out.failures.append(f"{rc.name}: premise unexpectedly invalid")
        out.cases_run += 1
    return out


# ---------------------------------------------------------------------------
# Composition law


@dataclass
class CompositionSweep:
    subset_violations: int = 0
    missing_intermediates: int = 0
    true_pairs: int = 0
    verified_samples: int = 0
    samples_drawn: int = 0


def composition_sweep(
    actions: tuple[str, ...] = ("a", "b"),
    atoms: tuple[str, ...] = ("p",),
    spec_states: int = 2,
    inter_states: int = 3,
    verify_samples: int = 40,
) -> CompositionSweep:
    """Both directions of the split-signature composition law on the
    enumerated universe: an intermediate forces a direct refinement
    (checked exactly, per intermediate), and every direct refinement has
    an intermediate within the stated bound."""
    sig = signature(["a"], ["b"])
    sig_up = signature(["a"], [])
    sig_down_rev = signature(["b"], [])

    specs = spec_models(actions, atoms, spec_states)
    n = len(specs)
    n_words = (n + 31) // 32

    # direct-refinement matrix, rows over specs, packed over targets
    refines_words = np.zeros((n, n_words), dtype=np.int64)
    offset = 0
    for fam in dense_families(actions, atoms, spec_states):
        pair_words = refines_pairs(specs, fam, sig)
        for ci in range(len(fam)):
            ti = offset + ci
            for w in range(n_words):
                word = int(pair_words[ci, w])
                bit = 0
                while word >> bit:
                    if (word >> bit) & 1:
                        refines_words[w * 32 + bit, ti >> 5] |= 1 << (ti & 31)
                    bit += 1
        offset += len(fam)

    exists_words = np.zeros((n, n_words), dtype=np.int64)
    out = CompositionSweep()
    for k in range(1, inter_states + 1):
        total = model_count(k, len(actions), len(atoms))
        start = 0
        while start < total:
            count = min(_BLOCK, total - start)
            fam = family_block(k, actions, atoms, start, count)
            k1 = refines_pairs(specs, fam, sig_up)
            k2 = refines_pairs(specs, fam, sig_down_rev)
            out.subset_violations += composition_check(
                k1, k2, refines_words, exists_words
            )
            start += count

    missing_pairs: list[tuple[int, int]] = []
    for m in range(n):
        gap = refines_words[m] & ~exists_words[m]
        for w in range(n_words):
            word = int(gap[w])
            bit = 0
            while word >> bit:
                if (word >> bit) & 1:
                    missing_pairs.append((m, w * 32 + bit))
                bit += 1
        out.true_pairs += int(
            sum(bin(int(x) & 0xFFFFFFFF).count("1") for x in refines_words[m])
        )
    out.missing_intermediates = len(missing_pairs)

    # certify composed relations on a deterministic sample of pairs that
    # found an intermediate within the bound
    rng = np.random.default_rng(20240811)
    resolved = []
    for m in range(n):
        for w in range(n_words):
            word = int(refines_words[m, w] & exists_words[m, w])
            bit = 0
            while word >> bit:
                if (word >> bit) & 1:
                    resolved.append((m, w * 32 + bit))
                bit += 1
    if resolved:
        picks = rng.choice(
            len(resolved), min(verify_samples, len(resolved)), replace=False
        )
        for pi in picks:
            m_i, n_i = resolved[int(pi)]
            if _verify_composition(specs[m_i], specs[n_i], sig, sig_up, inter_states):
                out.verified_samples += 1
        out.samples_drawn = len(picks)
    return out


def _verify_composition(
    pm: PointedModel,
    pn: PointedModel,
    sig: QuantifierSignature,
    sig_up: QuantifierSignature,
    inter_states: int,
) -> bool:
    """Find the first intermediate within the bound (kernel-scanned) and
    certify the composed relation symbolically."""
    from .kernels.refine import refines_family

    sig_down = signature([], ["b"])
    sig_down_rev = signature(["b"], [])
    actions = tuple(pm.model.alphabet)
    atoms = tuple(sorted(pm.model.valuation))
    for k in range(1, inter_states + 1):
        total = model_count(k, len(actions), len(atoms))
        start = 0
        while start < total:
            count = min(_BLOCK, total - start)
            fam = family_block(k, actions, atoms, start, count)
            hits = refines_family(pm, fam, sig_up) & refines_family(
                pn, fam, sig_down_rev
            )
            if hits.any():
                idx = start + int(np.argmax(hits))
                cand = pointed_from_index(idx, k, actions, atoms)
                r1 = ccref.largest_refinement(pm.model, cand.model, (), sig_up)
                if (pm.point, cand.point) not in r1.pairs:
                    return False
                r2 = ccref.largest_refinement(cand.model, pn.model, (), sig_down)
                if (cand.point, pn.point) not in r2.pairs:
                    return False
                composed = frozenset(
                    (u, w)
                    for (u, v) in r1.pairs
                    for (v2, w) in r2.pairs
                    if v == v2
                )
                return (pm.point, pn.point) in composed and ccref.verify_relation(
                    composed, pm.model, pn.model, (), sig
                )
            start += count
    return False


# ---------------------------------------------------------------------------
# Fixpoint semantics vs subset enumeration, vectorized


def oracle_family(f: Formula, fam: PackedFamily, env=None) -> np.ndarray:
    """Extension masks computed against the set-comprehension semantics:
    fixpoints by explicit enumeration of all candidate subsets, not by
    iteration."""
    env = env or {}
    n = len(fam)
    k = fam.n_states
    full = (1 << k) - 1
    atom_pos = {r: i for i, r in enumerate(fam.atoms)}
    action_pos = {a: i for i, a in enumerate(fam.actions)}

    def go(g: Formula, e: dict) -> np.ndarray:
        if isinstance(g, Top):
            return np.full(n, full, dtype=np.int64)
        if isinstance(g, Bot):
            return np.zeros(n, dtype=np.int64)
        if isinstance(g, Atom):
            if g.name in e:
                return e[g.name]
            return fam.val[:, atom_pos[g.name]].copy()
        if isinstance(g, Neg):
            return full & ~go(g.child, e)
        if isinstance(g, Or):
            return go(g.left, e) | go(g.right, e)
        if isinstance(g, Box):
            body = go(g.child, e)
            out = np.zeros(n, dtype=np.int64)
            nb = (~body) & full
            for u in range(k):
                succ = (fam.trans[:, action_pos[g.action]] >> (u * k)) & full
                out |= ((succ & nb) == 0).astype(np.int64) << u
            return out
        if isinstance(g, Diamond):
            body = go(g.child, e)
            out = np.zeros(n, dtype=np.int64)
            for u in range(k):
                succ = (fam.trans[:, action_pos[g.action]] >> (u * k)) & full
                out |= ((succ & body) != 0).astype(np.int64) << u
            return out
        if isinstance(g, Cover):
            exts = [go(m, e) for m in sorted(g.members, key=render)]
            union = np.zeros(n, dtype=np.int64)
            for x in exts:
                union |= x
            out = np.zeros(n, dtype=np.int64)
            nu_ = (~union) & full
            for u in range(k):
                succ = (fam.trans[:, action_pos[g.action]] >> (u * k)) & full
                good = (succ & nu_) == 0
                for x in exts:
                    good &= (succ & x) != 0
                out |= good.astype(np.int64) << u
            return out
        if isinstance(g, (Mu, Nu)):
            if isinstance(g, Mu):
                acc = np.full(n, full, dtype=np.int64)
                for t in range(1 << k):
                    e2 = dict(e)
                    e2[g.var] = np.full(n, t, dtype=np.int64)
                    body = go(g.body, e2)
                    prefixed = (body & ~t) == 0
                    acc = np.where(prefixed, acc & t, acc)
                return acc
            acc = np.zeros(n, dtype=np.int64)
            for t in range(1 << k):
                e2 = dict(e)
                e2[g.var] = np.full(n, t, dtype=np.int64)
                body = go(g.body, e2)
                postfixed = (t & ~body) == 0
                acc = np.where(postfixed, acc | t, acc)
            return acc
        if isinstance(g, And):
            return go(g.left, e) & go(g.right, e)
        raise TypeError(f"unsupported node in vectorized oracle: {g!r}")

    return go(f, dict(env))


@dataclass
class OracleSweep:
    mismatches: list[str] = field(default_factory=list)
    comparisons: int = 0


def fixpoint_oracle_sweep(
    formulas,
    actions: tuple[str, ...],
    atoms: tuple[str, ...],
    max_states: int,
) -> OracleSweep:
    out = OracleSweep()
    fams = dense_families(actions, atoms, max_states)
    for f in formulas:
        prog = compile_formula(f, actions, atoms)
        for fam in fams:
            kt = eval_family(prog, fam)
            oracle = oracle_family(f, fam)
            bad = int((kt != oracle).sum())
            out.comparisons += len(fam)
            if bad:
                out.mismatches.append(
                    f"{render(f)}: {bad} models differ at {fam.n_states} states"
                )
    return out


# ---------------------------------------------------------------------------
# Tableau vs model checker, and disjunctive conversion


def tableau_sweep(
    formulas,
    actions: tuple[str, ...],
    atoms: tuple[str, ...],
    max_states: int,
) -> OracleSweep:
    out = OracleSweep()
    fams = dense_families(actions, atoms, max_states)
    for f in formulas:
        ct = compile_tableau(build_tableau(f), actions, atoms)
        prog = compile_formula(f, actions, atoms)
        for fam in fams:
            marked = marking_roots(ct, fam)
            sat = sat_roots(prog, fam)
            bad = int((marked != sat).sum())
            out.comparisons += len(fam)
            if bad:
                out.mismatches.append(
                    f"{render(f)}: {bad} models disagree at {fam.n_states} states"
                )
    return out


def dnf_sweep(
    formulas,
    actions: tuple[str, ...],
    atoms: tuple[str, ...],
    max_states: int,
) -> OracleSweep:
    out = OracleSweep()
    fams = dense_families(actions, atoms, max_states)
    for f in formulas:
        d = to_df(f)
        if not is_df(d):
            out.mismatches.append(f"{render(f)}: conversion output not disjunctive")
            continue
        p1 = compile_formula(f, actions, atoms)
        p2 = compile_formula(d, actions, atoms)
        for fam in fams:
            bad = int((eval_family(p1, fam) != eval_family(p2, fam)).sum())
            out.comparisons += len(fam)
            if bad:
                out.mismatches.append(
                    f"{render(f)}: {bad} models differ at {fam.n_states} states"
                )
    return out
