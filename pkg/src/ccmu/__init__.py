"""Covariant-contravariant refinement modal mu-calculus toolkit.

Parse and evaluate refinement-quantified mu-calculus formulas on finite
labelled transition systems, compute refinement relations subsuming
bisimulation and simulation, translate quantified formulas into the plain
mu-calculus by reduction axioms, and cross-validate everything against
brute-force witness search and tableau markings.
"""

from .syntax import (
    ActionAlphabet,
    Atom,
    And,
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
    alphabet,
    cover,
    nnf,
    parse,
    render,
    signature,
    substitute,
    is_df,
)
from .lts import (
    Model,
    PointedModel,
    copy_rename,
    disjoint_union,
    eq_modulo,
    generated_submodel,
    graft,
    is_tree_like,
    load_pointed,
    make_model,
    model_from_json,
    model_to_json,
    override_valuation,
    prune,
    unravel,
)
from .mc import check, extension
from .ccref import (
    RefinementRelation,
    bisimilar,
    largest_refinement,
    refines,
    verify_relation,
)

__version__ = "0.1.0"
