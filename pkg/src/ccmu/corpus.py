"""Curated formula corpus driving the property suites.

The disjunctive corpus lives over actions (a, b) and the single atom p,
modal depth at most two, and is the instantiation material for the
elimination/oracle comparisons and the axiom validity suite.  The
single-action fixpoint corpus feeds the subset-enumeration semantics
cross-check, which needs the smaller alphabet to stay exhaustive at four
states.
"""

from __future__ import annotations

from .syntax import (
    Exists,
    Formula,
    QuantifierSignature,
    has_fixpoint,
    parse,
    signature,
)

ACTIONS = ("a", "b")
ATOMS = ("p",)
SIG_AB = signature(["a"], ["b"])

_DF_TEXTS = [
    # propositional
    "true",
    "false",
    "p",
    "!p",
    "p | !p",
    "p & !p",
    # depth-one covers, covariant action
    "nabla_a {}",
    "nabla_a {p}",
    "nabla_a {true}",
    "nabla_a {!p}",
    "nabla_a {p, !p}",
    "nabla_a {p, true}",
    # depth-one covers, contravariant action
    "nabla_b {}",
    "nabla_b {p}",
    "nabla_b {true}",
    "nabla_b {p, true}",
    "nabla_b {p, !p}",
    # guarded conjunctions
    "p & nabla_a {p}",
    "!p & nabla_a {true}",
    "p & nabla_b {p}",
    "p & nabla_a {p} & nabla_b {true}",
    "nabla_a {p} & nabla_b {p, true}",
    "p & nabla_a {} & nabla_b {}",
    "!p & nabla_b {}",
    "p & nabla_a {true} & nabla_b {!p}",
    # disjunctions
    "nabla_a {} | nabla_a {p}",
    "p | nabla_b {!p}",
    "(p & nabla_a {p}) | (!p & nabla_b {true})",
    "nabla_a {p, true} | nabla_b {p}",
    "false | nabla_a {true}",
    "(p & nabla_a {}) | (p & nabla_a {p, true})",
    # modal depth two
    "nabla_a {nabla_b {p}}",
    "nabla_a {p & nabla_a {p}, true}",
    "nabla_b {nabla_a {} | nabla_a {p}}",
    "p & nabla_a {nabla_b {p, true}}",
    "nabla_a {nabla_a {p}, nabla_a {}}",
    "nabla_b {p & nabla_b {true}}",
    "nabla_a {p | nabla_b {p}}",
    "!p & nabla_b {nabla_a {p, !p}, true}",
    # fixpoints in disjunctive syntax
    "nu q. nabla_a {q}",
    "nu q. (p & nabla_a {q})",
    "mu q. (p | nabla_a {q})",
    "mu q. (nabla_a {} | nabla_a {q})",
    "nu q. (p & (nabla_a {} | nabla_a {q}))",
    "nu q. nabla_b {q}",
    "mu q. (p | nabla_b {q, true})",
    "mu q. (p | nabla_a {q, true})",
    "nu q. (nabla_a {} | nabla_a {q})",
    "nu q. (p | nabla_b {q})",
    "mu q. (!p | nabla_a {q})",
]

DF_CORPUS: tuple[Formula, ...] = tuple(parse(t) for t in _DF_TEXTS)


def df_fixpoint_free() -> tuple[Formula, ...]:
    return tuple(f for f in DF_CORPUS if not has_fixpoint(f))


def df_fixpoints() -> tuple[Formula, ...]:
    return tuple(f for f in DF_CORPUS if has_fixpoint(f))


def quantified_corpus(sig: QuantifierSignature = SIG_AB) -> tuple[Formula, ...]:
    """The disjunctive corpus under one existential refinement quantifier."""
    return tuple(Exists(sig, f) for f in DF_CORPUS)


# single-action fixpoint formulas for the subset-enumeration oracle
_MU_NU_SINGLE_TEXTS = [
    "mu q. (p | <a>q)",
    "nu q. (p & [a]q)",
    "mu q. <a>q",
    "nu q. <a>q",
    "mu q. (p | nabla_a {q, true})",
    "nu q. (p & (nabla_a {} | nabla_a {q}))",
    "nu q. nabla_a {q}",
    "nu x. mu y. ((p & [a]x) | <a>y)",
    "mu x. nu y. ((p | <a>x) & [a]y)",
    "nu q. (p & [a](p -> q))",
]

MU_NU_SINGLE: tuple[Formula, ...] = tuple(parse(t) for t in _MU_NU_SINGLE_TEXTS)
SINGLE_ACTIONS = ("a",)
