"""Axiom-driven elimination of refinement quantifiers.

Each singleton quantifier over a disjunctive body reduces by structural
recursion: propositional formulas pass through; disjunction and greatest
fixpoints commute with the quantifier; least fixpoints commute unless the
body is inconsistent, in which case the whole formula collapses to false;
a guarded cover conjunction splits into per-action cover reductions
(covariant covers become boxes over the disjunction of reduced members
after a member-consistency side condition, contravariant covers become
conjunctions of diamonds, bivariant covers reduce memberwise).  Set-valued
signatures expand into a fixed-order chain of singleton quantifiers.

The side conditions need unsatisfiability oracles.  These are bounded and
three-valued: the fixed-point-free fragment is decided exactly by a
small-model tree search, fixpoint formulas only ever get refuted by a
bounded model enumeration, and everything else stays undetermined, in
which case elimination fails loudly rather than guess.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import mc
from .dnf import cover_form, ensure_df
from .errors import (
    EmptySignature,
    NotDisjunctive,
    QuantifierPresent,
    SideConditionUnknown,
)
from .kernels import compile_formula, eval_family, family_block, model_count
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
    Top,
    TRUE,
    FALSE,
    actions_of,
    big_and,
    big_or,
    children,
    conjuncts,
    disjuncts,
    expand_cover,
    free_atoms,
    has_fixpoint,
    has_quantifier,
    is_df,
    is_literal,
    is_propositional,
    nnf,
    render,
    validate_positivity,
)

# ---------------------------------------------------------------------------
# Verdicts and caps

REASON_NOT_DISJUNCTIVE = "NotDisjunctive"
REASON_SIDE_CONDITION = "SideConditionUnknown"
REASON_BOUND_EXHAUSTED = "BoundExhausted"


@dataclass(frozen=True)
class Verdict:
    """Three-valued result; undetermined verdicts carry a machine-readable
    reason and optionally free-text detail."""

    value: str
    reason: Optional[str] = None
    detail: Optional[str] = None

    def is_true(self) -> bool:
        return self.value == "true"

    def is_false(self) -> bool:
        return self.value == "false"

    def is_undetermined(self) -> bool:
        return self.value == "undetermined"


V_TRUE = Verdict("true")
V_FALSE = Verdict("false")


def undetermined(reason: str, detail: Optional[str] = None) -> Verdict:
    return Verdict("undetermined", reason, detail)


@dataclass(frozen=True)
class Limits:
    """Caps for the bounded side-condition oracles."""

    sat_depth_cap: int = 6
    sat_node_budget: int = 200_000
    unsat_model_cap: int = 4
    unsat_model_budget: int = 4_000_000


DEFAULT_LIMITS = Limits()


# ---------------------------------------------------------------------------
# Bounded simplifier


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Box, Diamond)):
        return 1 + modal_depth(f.child)
    if isinstance(f, Cover):
        return 1 + max((modal_depth(m) for m in f.members), default=0)
    kids = children(f)
    return max((modal_depth(c) for c in kids), default=0)


def simplify(f: Formula) -> Formula:
    """Bounded, semantics-preserving cleanup: constant folding, double
    negation, idempotence, complementary literals, redundant diamond-top
    conjuncts and vacuous or trivial fixpoints.  Conjunct and disjunct
    order is canonicalized, so output is deterministic."""
    if isinstance(f, (Top, Bot, Atom)):
        return f
    if isinstance(f, Neg):
        c = simplify(f.child)
        if isinstance(c, Top):
            return FALSE
        if isinstance(c, Bot):
            return TRUE
        if isinstance(c, Neg):
            return c.child
        return Neg(c)
    if isinstance(f, And):
        parts: list[Formula] = []
        for p in conjuncts(f):
            s = simplify(p)
            parts.extend(conjuncts(s))
        out: list[Formula] = []
        for p in parts:
            if isinstance(p, Bot):
                return FALSE
            if isinstance(p, Top) or p in out:
                continue
            out.append(p)
        for p in out:
            if is_literal(p):
                neg = p.child if isinstance(p, Neg) else Neg(p)
                if neg in out:
                    return FALSE
        # a diamond-top is implied by any other requirement on the action
        keep = []
        for p in out:
            if isinstance(p, Diamond) and isinstance(p.child, Top):
                others = [
                    q
                    for q in out
                    if q is not p
                    and (
                        (isinstance(q, Diamond) and q.action == p.action)
                        or (isinstance(q, Cover) and q.action == p.action and q.members)
                    )
                ]
                if others:
                    continue
            keep.append(p)
        keep.sort(key=render)
        return big_and(keep)
    if isinstance(f, Or):
        parts = []
        for p in disjuncts(f):
            s = simplify(p)
            parts.extend(disjuncts(s))
        out = []
        for p in parts:
            if isinstance(p, Top):
                return TRUE
            if isinstance(p, Bot) or p in out:
                continue
            out.append(p)
        for p in out:
            if is_literal(p):
                neg = p.child if isinstance(p, Neg) else Neg(p)
                if neg in out:
                    return TRUE
        out.sort(key=render)
        return big_or(out)
    if isinstance(f, Box):
        c = simplify(f.child)
        if isinstance(c, Top):
            return TRUE
        return Box(f.action, c)
    if isinstance(f, Diamond):
        c = simplify(f.child)
        if isinstance(c, Bot):
            return FALSE
        return Diamond(f.action, c)
    if isinstance(f, Cover):
        members = frozenset(simplify(m) for m in f.members)
        if any(isinstance(m, Bot) for m in members):
            return FALSE
        return Cover(f.action, members)
    if isinstance(f, Exists):
        c = simplify(f.child)
        if isinstance(c, (Top, Bot)):
            return c
        return Exists(f.sig, c)
    if isinstance(f, Forall):
        c = simplify(f.child)
        if isinstance(c, (Top, Bot)):
            return c
        return Forall(f.sig, c)
    if isinstance(f, (Mu, Nu)):
        body = simplify(f.body)
        if f.var not in free_atoms(body):
            return body
        if body == Atom(f.var):
            return FALSE if isinstance(f, Mu) else TRUE
        return type(f)(f.var, body)
    raise TypeError(f"unknown formula node {f!r}")


# ---------------------------------------------------------------------------
# Bounded K-satisfiability


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise _BudgetExhausted()


class _BudgetExhausted(Exception):
    pass


def _expand_all_covers(f: Formula) -> Formula:
    if isinstance(f, Cover):
        return _expand_all_covers(expand_cover(f))
    if isinstance(f, (Top, Bot, Atom)):
        return f
    if isinstance(f, Neg):
        return Neg(_expand_all_covers(f.child))
    if isinstance(f, And):
        return And(_expand_all_covers(f.left), _expand_all_covers(f.right))
    if isinstance(f, Or):
        return Or(_expand_all_covers(f.left), _expand_all_covers(f.right))
    if isinstance(f, Box):
        return Box(f.action, _expand_all_covers(f.child))
    if isinstance(f, Diamond):
        return Diamond(f.action, _expand_all_covers(f.child))
    raise TypeError(f"unexpected node in modal satisfiability input: {f!r}")


def _sat_modal(gamma: list[Formula], budget: _Budget) -> bool:
    """Exact satisfiability of a finite set of fixed-point-free formulas in
    negation normal form: decompose boolean structure, then branch on the
    tree model forced by the diamonds."""
    budget.spend()
    pos: set[str] = set()
    neg: set[str] = set()
    boxes: dict[str, list[Formula]] = {}
    diamonds: dict[str, list[Formula]] = {}
    todo = list(gamma)
    while todo:
        g = todo.pop()
        if isinstance(g, Top):
            continue
        if isinstance(g, Bot):
            return False
        if isinstance(g, Atom):
            if g.name in neg:
                return False
            pos.add(g.name)
        elif isinstance(g, Neg):
            assert isinstance(g.child, Atom)
            if g.child.name in pos:
                return False
            neg.add(g.child.name)
        elif isinstance(g, And):
            todo.append(g.left)
            todo.append(g.right)
        elif isinstance(g, Or):
            rest = [x for x in todo]
            base = _collect_base(pos, neg, boxes, diamonds)
            return _sat_modal(base + rest + [g.left], budget) or _sat_modal(
                base + rest + [g.right], budget
            )
        elif isinstance(g, Box):
            boxes.setdefault(g.action, []).append(g.child)
        elif isinstance(g, Diamond):
            diamonds.setdefault(g.action, []).append(g.child)
        else:
            raise TypeError(f"unexpected node in modal satisfiability: {g!r}")
    for a, reqs in diamonds.items():
        ctx = boxes.get(a, [])
        for d in reqs:
            if not _sat_modal([d] + ctx, budget):
                return False
    return True


def _collect_base(pos, neg, boxes, diamonds) -> list[Formula]:
    out: list[Formula] = [Atom(p) for p in pos] + [Neg(Atom(n)) for n in neg]
    for a, bs in boxes.items():
        out.extend(Box(a, b) for b in bs)
    for a, ds in diamonds.items():
        out.extend(Diamond(a, d) for d in ds)
    return out


def unsat_k(f: Formula, limits: Limits = DEFAULT_LIMITS) -> Verdict:
    """Is a quantifier-free formula unsatisfiable?  Exact on the
    fixed-point-free fragment via bounded tree-model search; fixpoint
    formulas are only ever refuted, by enumerating models up to the cap.
    True comes only from the exact path or syntactic collapse to false."""
    if has_quantifier(f):
        raise QuantifierPresent(f"quantifier in satisfiability input: {render(f)}")
    g = simplify(f)
    if isinstance(g, Bot):
        return V_TRUE
    if isinstance(g, Top):
        return V_FALSE
    if not has_fixpoint(g):
        if modal_depth(g) > limits.sat_depth_cap:
            return undetermined(
                REASON_SIDE_CONDITION,
                f"modal depth {modal_depth(g)} over the exact-search cap",
            )
        try:
            sat = _sat_modal([nnf(_expand_all_covers(g))], _Budget(limits.sat_node_budget))
        except _BudgetExhausted:
            return undetermined(REASON_SIDE_CONDITION, "exact-search budget exhausted")
        return V_FALSE if sat else V_TRUE
    return _refute_by_enumeration(g, limits)


def _refute_by_enumeration(g: Formula, limits: Limits) -> Verdict:
    actions = tuple(sorted(actions_of(g))) or ("a",)
    atoms = tuple(sorted(free_atoms(g)))
    budget = limits.unsat_model_budget
    for k in range(1, limits.unsat_model_cap + 1):
        total = model_count(k, len(actions), len(atoms))
        prog = compile_formula(g, actions, atoms)
        start = 0
        while start < total:
            count = min(1 << 20, total - start, budget)
            if count <= 0:
                return undetermined(
                    REASON_BOUND_EXHAUSTED, "model-enumeration budget exhausted"
                )
            fam = family_block(k, actions, atoms, start, count)
            if eval_family(prog, fam).any():
                return V_FALSE
            start += count
            budget -= count
    return undetermined(
        REASON_BOUND_EXHAUSTED,
        f"no model with up to {limits.unsat_model_cap} states",
    )


# ---------------------------------------------------------------------------
# Singleton-quantifier elimination


def eliminate_one(
    a1: str, a2: str, f: Formula, limits: Limits = DEFAULT_LIMITS
) -> Formula:
    """Reduce one singleton refinement quantifier over a disjunctive body
    by the structural recursion described in the module docstring.  Free
    fixpoint variables are treated as propositional letters."""
    if a1 == a2:
        raise EmptySignature("covariant and contravariant actions must differ")

    def go(g: Formula) -> Formula:
        if is_propositional(g):
            return g
        if isinstance(g, Or):
            return Or(go(g.left), go(g.right))
        if isinstance(g, Nu):
            return Nu(g.var, go(g.body))
        if isinstance(g, Mu):
            side = unsat_k(g, limits)
            if side.is_true():
                return FALSE
            if side.is_false():
                return Mu(g.var, go(g.body))
            raise SideConditionUnknown(
                f"cannot settle consistency of {render(g)}: {side.detail}", g
            )
        if isinstance(g, (And, Cover)):
            props: list[Formula] = []
            rest: list[Formula] = []
            for part in conjuncts(g):
                (props if is_propositional(part) else rest).append(part)
            if len(rest) == 1 and not isinstance(rest[0], Cover):
                return big_and(props + [go(rest[0])])
            if rest and all(isinstance(r, Cover) for r in rest):
                actions = [r.action for r in rest]
                if len(set(actions)) == len(actions):
                    return big_and(props + [_cover(r) for r in rest])
            raise NotDisjunctive(
                f"conjunction outside the reducible fragment: {render(g)}", g
            )
        if isinstance(g, (Exists, Forall)):
            raise QuantifierPresent(
                f"nested quantifier reached singleton elimination: {render(g)}"
            )
        raise NotDisjunctive(f"cannot eliminate the quantifier over {render(g)}", g)

    def _cover(c: Cover) -> Formula:
        members = sorted(c.members, key=render)
        if c.action == a1:
            sides = [(m, unsat_k(m, limits)) for m in members]
            for (m, v) in sides:
                if v.is_true():
                    return FALSE
            for (m, v) in sides:
                if v.is_undetermined():
                    raise SideConditionUnknown(
                        f"cannot settle consistency of cover member {render(m)}:"
                        f" {v.detail}",
                        m,
                    )
            return Box(a1, big_or([go(m) for m in members]))
        if c.action == a2:
            return big_and([Diamond(a2, go(m)) for m in members])
        return Cover(c.action, frozenset(go(m) for m in members))

    return go(f)


# ---------------------------------------------------------------------------
# Full elimination


def _find_innermost_quantifier(f: Formula) -> Optional[Formula]:
    for c in children(f):
        r = _find_innermost_quantifier(c)
        if r is not None:
            return r
    if isinstance(f, (Exists, Forall)):
        return f
    return None


def _replace(f: Formula, target: Formula, repl: Formula) -> Formula:
    if f == target:
        return repl
    if isinstance(f, (Top, Bot, Atom)):
        return f
    if isinstance(f, Neg):
        return Neg(_replace(f.child, target, repl))
    if isinstance(f, And):
        return And(_replace(f.left, target, repl), _replace(f.right, target, repl))
    if isinstance(f, Or):
        return Or(_replace(f.left, target, repl), _replace(f.right, target, repl))
    if isinstance(f, Box):
        return Box(f.action, _replace(f.child, target, repl))
    if isinstance(f, Diamond):
        return Diamond(f.action, _replace(f.child, target, repl))
    if isinstance(f, Cover):
        return Cover(f.action, frozenset(_replace(m, target, repl) for m in f.members))
    if isinstance(f, Exists):
        return Exists(f.sig, _replace(f.child, target, repl))
    if isinstance(f, Forall):
        return Forall(f.sig, _replace(f.child, target, repl))
    if isinstance(f, (Mu, Nu)):
        return type(f)(f.var, _replace(f.body, target, repl))
    raise TypeError(f"unknown formula node {f!r}")


def _prepare_body(body: Formula, limits: Limits) -> Formula:
    g = simplify(body)
    if has_fixpoint(g):
        # boxes and diamonds inside fixpoint bodies sit outside the
        # reducible fragment; the pointwise cover rewrite restores it
        g = cover_form(g)
        if is_df(g):
            return g
    elif is_df(g):
        return g
    return ensure_df(g)


def eliminate(f: Formula, limits: Limits = DEFAULT_LIMITS) -> Formula:
    """Translate a refinement-quantified formula into the quantifier-free
    mu-calculus: innermost quantifiers first, universal quantifiers via
    their existential dual, set signatures expanded into a lexicographic
    chain of singleton quantifiers."""
    g = f
    while True:
        q = _find_innermost_quantifier(g)
        if q is None:
            break
        if isinstance(q, Forall):
            repl: Formula = Neg(Exists(q.sig, nnf(Neg(q.child))))
        else:
            assert isinstance(q, Exists)
            if not q.sig.cov or not q.sig.contra:
                raise EmptySignature(
                    "elimination needs non-empty covariant and contravariant sets; "
                    "empty signatures are supported only by the semantic oracles"
                )
            pairs = sorted((c1, c2) for c1 in q.sig.cov for c2 in q.sig.contra)
            body = q.child
            for (c1, c2) in reversed(pairs):
                body = _prepare_body(body, limits)
                body = simplify(eliminate_one(c1, c2, body, limits))
            repl = body
        g = _replace(g, q, repl)
    g = simplify(g)
    if has_quantifier(g):
        raise QuantifierPresent("internal error: quantifier survived elimination")
    validate_positivity(g)
    return g


# ---------------------------------------------------------------------------
# Quantified model checking


def _exc_reason(e: Exception) -> tuple[str, str]:
    if isinstance(e, NotDisjunctive):
        return REASON_NOT_DISJUNCTIVE, str(e)
    if isinstance(e, SideConditionUnknown):
        return REASON_SIDE_CONDITION, str(e)
    return REASON_NOT_DISJUNCTIVE, str(e)


def check_cc(
    pm: PointedModel,
    f: Formula,
    fallback_bound: int = 0,
    limits: Limits = DEFAULT_LIMITS,
) -> Verdict:
    """Decide satisfaction of a refinement-quantified formula at a point:
    translate and model-check; when translation fails and a fallback bound
    is given, evaluate outermost quantifiers by bounded witness search
    (sound but incomplete), else report undetermined."""
    try:
        xi = eliminate(f, limits)
    except (NotDisjunctive, SideConditionUnknown, EmptySignature) as e:
        reason, detail = _exc_reason(e)
        if fallback_bound > 0:
            return _check_fallback(pm, f, fallback_bound, reason, detail)
        return undetermined(reason, detail)
    return V_TRUE if mc.check(pm, xi) else V_FALSE


def _check_fallback(
    pm: PointedModel, f: Formula, bound: int, reason: str, detail: str
) -> Verdict:
    from .search import witness_search

    if not has_quantifier(f):
        return V_TRUE if mc.check(pm, f) else V_FALSE
    if isinstance(f, Exists):
        try:
            found = witness_search(pm, f.sig, f.child, bound)
        except (NotDisjunctive, SideConditionUnknown) as e:
            return undetermined(*_exc_reason(e))
        if found is not None:
            return V_TRUE
        return undetermined(REASON_BOUND_EXHAUSTED, f"no witness within {bound} states")
    if isinstance(f, Forall):
        dual = Exists(f.sig, nnf(Neg(f.child)))
        v = _check_fallback(pm, dual, bound, reason, detail)
        if v.is_true():
            return V_FALSE
        if v.is_false():
            return V_TRUE
        return v
    if isinstance(f, Neg):
        v = _check_fallback(pm, f.child, bound, reason, detail)
        if v.is_true():
            return V_FALSE
        if v.is_false():
            return V_TRUE
        return v
    if isinstance(f, And):
        l = _check_fallback(pm, f.left, bound, reason, detail)
        r = _check_fallback(pm, f.right, bound, reason, detail)
        if l.is_false() or r.is_false():
            return V_FALSE
        if l.is_true() and r.is_true():
            return V_TRUE
        return l if l.is_undetermined() else r
    if isinstance(f, Or):
        l = _check_fallback(pm, f.left, bound, reason, detail)
        r = _check_fallback(pm, f.right, bound, reason, detail)
        if l.is_true() or r.is_true():
            return V_TRUE
        if l.is_false() and r.is_false():
            return V_FALSE
        return l if l.is_undetermined() else r
    return undetermined(reason, detail)
