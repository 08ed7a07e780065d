"""Model checker for the quantifier-free fragment on finite models.

Extensions are computed by naive Knaster-Tarski iteration: least fixpoints
grow from the empty set, greatest fixpoints shrink from the full state
set, each converging within |S| rounds.  State sets are bit sets keyed by
the model's state order, so iteration is deterministic.

An environment maps free variables (atoms used as fixpoint variables) to
state sets; atoms declared in the model's valuation fall back to it.
"""

from __future__ import annotations

from typing import Mapping, Optional

from .errors import QuantifierPresent, UnboundVariable
from .lts import Model, PointedModel
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
    render,
)

Environment = Mapping[str, frozenset[str]]


class _Evaluator:
    def __init__(self, m: Model):
        self.m = m
        self.index = {s: i for i, s in enumerate(m.states)}
        self.full = (1 << len(m.states)) - 1
        # succ_mask[a][i]: bit set of a-successors of state i
        self.succ_mask = {
            a: [0] * len(m.states) for a in m.alphabet
        }
        for a in m.alphabet:
            for (u, v) in m.transitions[a]:
                self.succ_mask[a][self.index[u]] |= 1 << self.index[v]
        self.val_bits = {
            r: self._bits(ext) for r, ext in m.valuation.items()
        }

    def _bits(self, states) -> int:
        out = 0
        for s in states:
            out |= 1 << self.index[s]
        return out

    def to_states(self, bits: int) -> frozenset[str]:
        return frozenset(
            s for s, i in self.index.items() if bits >> i & 1
        )

    def eval(self, f: Formula, env: dict[str, int]) -> int:
        if isinstance(f, Top):
            return self.full
        if isinstance(f, Bot):
            return 0
        if isinstance(f, Atom):
            if f.name in env:
                return env[f.name]
            if f.name in self.val_bits:
                return self.val_bits[f.name]
            raise UnboundVariable(
                f"atom {f.name!r} neither bound in the environment nor "
                f"declared in the model"
            )
        if isinstance(f, Neg):
            return self.full & ~self.eval(f.child, env)
        if isinstance(f, And):
            return self.eval(f.left, env) & self.eval(f.right, env)
        if isinstance(f, Or):
            return self.eval(f.left, env) | self.eval(f.right, env)
        if isinstance(f, Box):
            body = self.eval(f.child, env)
            masks = self.succ_mask[f.action]
            out = 0
            for i in range(len(self.m.states)):
                if (masks[i] & ~body) == 0:
                    out |= 1 << i
            return out
        if isinstance(f, Diamond):
            body = self.eval(f.child, env)
            masks = self.succ_mask[f.action]
            out = 0
            for i in range(len(self.m.states)):
                if masks[i] & body:
                    out |= 1 << i
            return out
        if isinstance(f, Cover):
            # (box: every successor in some member) and (each member witnessed)
            exts = [self.eval(m_, env) for m_ in sorted(f.members, key=render)]
            union = 0
            for e in exts:
                union |= e
            masks = self.succ_mask[f.action]
            out = 0
            for i in range(len(self.m.states)):
                succ = masks[i]
                if succ & ~union:
                    continue
                if all(succ & e for e in exts):
                    out |= 1 << i
            return out
        if isinstance(f, (Exists, Forall)):
            raise QuantifierPresent(
                f"refinement quantifier in model-checker input: {render(f)}"
            )
        if isinstance(f, (Mu, Nu)):
            current = 0 if isinstance(f, Mu) else self.full
            inner = dict(env)
            while True:
                inner[f.var] = current
                nxt = self.eval(f.body, inner)
                if nxt == current:
                    return current
                current = nxt
        raise TypeError(f"unknown formula node {f!r}")


def extension(
    m: Model, f: Formula, env: Optional[Environment] = None
) -> frozenset[str]:
    """The set of states satisfying ``f``; exactly the semantic extension."""
    ev = _Evaluator(m)
    env_bits = {q: ev._bits(states) for q, states in (env or {}).items()}
    return ev.to_states(ev.eval(f, env_bits))


def check(pm: PointedModel, f: Formula) -> bool:
    """Satisfaction at the designated point, empty environment."""
    ev = _Evaluator(pm.model)
    bits = ev.eval(f, {})
    return bool(bits >> ev.index[pm.point] & 1)
