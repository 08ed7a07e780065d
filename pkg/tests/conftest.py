import random

import pytest
from hypothesis import strategies as st

# verdict lines from the acceptance criteria, echoed after the run
acceptance_report: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_report:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_report:
            terminalreporter.write_line(line)

from ccmu.lts import PointedModel, make_model
from ccmu.syntax import (
    And,
    Atom,
    Box,
    Cover,
    Diamond,
    Exists,
    Forall,
    Mu,
    Neg,
    Nu,
    Or,
    TRUE,
    FALSE,
    signature,
)

ACTIONS = ("a", "b")


@pytest.fixture
def m0():
    """Single p-state, no transitions."""
    return make_model(ACTIONS, ["s0"], [], {"p": ["s0"]})


@pytest.fixture
def m1():
    """Two states, one a-step onto the p-state."""
    return make_model(ACTIONS, ["s", "t"], [("s", "a", "t")], {"p": ["t"]})


@pytest.fixture
def m2():
    """Two states on an a-cycle, p at one of them."""
    return make_model(
        ACTIONS, ["s", "t"], [("s", "a", "t"), ("t", "a", "s")], {"p": ["t"]}
    )


def random_model(rng: random.Random, n_states, actions=ACTIONS, atoms=("p", "q"),
                 density=0.3):
    states = [f"s{i}" for i in range(n_states)]
    trans = [
        (u, a, v)
        for a in actions
        for u in states
        for v in states
        if rng.random() < density
    ]
    val = {r: [s for s in states if rng.random() < 0.5] for r in atoms}
    return make_model(actions, states, trans, val)


def pointed(m, s) -> PointedModel:
    return PointedModel(m, s)


# hypothesis strategy: binder variables (x, y) are never negated, so every
# generated formula satisfies the positivity invariant by construction
_atoms = st.sampled_from(["p", "q", "r"])
_vars = st.sampled_from(["x", "y"])
_acts = st.sampled_from(list(ACTIONS))


def formulas(max_leaves: int = 12, with_quantifiers: bool = True):
    leaves = st.one_of(
        st.just(TRUE),
        st.just(FALSE),
        st.builds(Atom, _atoms),
        st.builds(Atom, _vars),
        st.builds(lambda a: Neg(Atom(a)), _atoms),
    )

    def extend(children):
        opts = [
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Box, _acts, children),
            st.builds(Diamond, _acts, children),
            st.builds(
                lambda a, ms: Cover(a, frozenset(ms)),
                _acts,
                st.lists(children, min_size=0, max_size=3),
            ),
            st.builds(Mu, _vars, children),
            st.builds(Nu, _vars, children),
        ]
        if with_quantifiers:
            sig = st.sampled_from([signature(["a"], ["b"]), signature(["b"], ["a"])])
            opts.append(st.builds(Exists, sig, children))
            opts.append(st.builds(Forall, sig, children))
        return st.one_of(opts)

    return st.recursive(leaves, extend, max_leaves=max_leaves)
