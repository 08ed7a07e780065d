"""Finite labelled transition systems and the model constructions used by
the soundness arguments: disjoint union, copies, generated submodels,
unravelings, descendant pruning, valuation overrides and grafting."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import (
    CyclicWithoutBound,
    NotDisjoint,
    NotTreeLike,
    StateClash,
    UnknownAtom,
    UnknownState,
)
from .syntax import ActionAlphabet


@dataclass(frozen=True)
class Model:
    """Finite LTS: ordered states, action-indexed transition relations and
    an atom valuation.  Immutable; constructions return fresh models."""

    alphabet: ActionAlphabet
    states: tuple[str, ...]
    transitions: Mapping[str, frozenset[tuple[str, str]]]
    valuation: Mapping[str, frozenset[str]]

    def __post_init__(self):
        if not self.states:
            raise ValueError("model needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise StateClash("duplicate state ids")
        sset = set(self.states)
        object.__setattr__(self, "transitions", dict(self.transitions))
        object.__setattr__(self, "valuation", dict(self.valuation))
        for a in self.alphabet:
            rel = self.transitions.setdefault(a, frozenset())
            for (u, v) in rel:
                if u not in sset or v not in sset:
                    raise UnknownState(f"transition endpoint outside state set: {(u, v)}")
        for a in self.transitions:
            if a not in self.alphabet:
                raise UnknownState(f"transition action {a!r} not in alphabet")
        for r, ext in self.valuation.items():
            if not ext <= sset:
                raise UnknownState(f"valuation of {r!r} mentions unknown states")

    @property
    def atoms(self) -> tuple[str, ...]:
        return tuple(sorted(self.valuation))

    def succ(self, action: str, state: str) -> frozenset[str]:
        return frozenset(v for (u, v) in self.transitions[action] if u == state)

    def pred(self, action: str, state: str) -> frozenset[str]:
        return frozenset(u for (u, v) in self.transitions[action] if v == state)

    def atoms_of(self, state: str) -> frozenset[str]:
        """Per-state atom set (the dual valuation view)."""
        return frozenset(r for r, ext in self.valuation.items() if state in ext)

    def holds(self, atom: str, state: str) -> bool:
        if atom not in self.valuation:
            raise UnknownAtom(f"atom {atom!r} not declared in this model")
        return state in self.valuation[atom]

    def reachable(self, frontier: Iterable[str]) -> frozenset[str]:
        """Strict descendants: R+ of the given states over all actions."""
        seen: set[str] = set()
        todo = list(frontier)
        while todo:
            u = todo.pop()
            for a in self.alphabet:
                for v in self.succ(a, u):
                    if v not in seen:
                        seen.add(v)
                        todo.append(v)
        return frozenset(seen)

    def require_state(self, state: str) -> None:
        if state not in self.states:
            raise UnknownState(f"state {state!r} not in model")


@dataclass(frozen=True)
class PointedModel:
    model: Model
    point: str

    def __post_init__(self):
        self.model.require_state(self.point)


def make_model(
    alphabet_actions: Iterable[str],
    states: Iterable[str],
    transitions: Iterable[tuple[str, str, str]],
    valuation: Mapping[str, Iterable[str]],
) -> Model:
    """Convenience constructor; transitions given as (from, action, to)."""
    alpha = ActionAlphabet(tuple(alphabet_actions))
    trans: dict[str, set[tuple[str, str]]] = {a: set() for a in alpha}
    for (u, a, v) in transitions:
        if a not in alpha:
            raise UnknownState(f"transition action {a!r} not in alphabet")
        trans[a].add((u, v))
    return Model(
        alphabet=alpha,
        states=tuple(states),
        transitions={a: frozenset(s) for a, s in trans.items()},
        valuation={r: frozenset(ext) for r, ext in valuation.items()},
    )


# ---------------------------------------------------------------------------
# Constructions


def disjoint_union(m: Model, n: Model) -> Model:
    """Componentwise union; state sets must already be disjoint."""
    if m.alphabet != n.alphabet:
        raise StateClash("disjoint union needs a shared alphabet")
    clash = set(m.states) & set(n.states)
    if clash:
        raise StateClash(f"state ids occur in both models: {sorted(clash)}")
    atoms = set(m.valuation) | set(n.valuation)
    return Model(
        alphabet=m.alphabet,
        states=m.states + n.states,
        transitions={
            a: m.transitions[a] | n.transitions[a] for a in m.alphabet
        },
        valuation={
            r: m.valuation.get(r, frozenset()) | n.valuation.get(r, frozenset())
            for r in sorted(atoms)
        },
    )


def copy_rename(pm: PointedModel, suffix: str) -> PointedModel:
    """Isomorphic copy with every state id suffixed."""
    m = pm.model
    ren = {s: s + suffix for s in m.states}
    if set(ren.values()) & set(m.states):
        raise StateClash(f"suffix {suffix!r} does not give fresh state ids")
    copied = Model(
        alphabet=m.alphabet,
        states=tuple(ren[s] for s in m.states),
        transitions={
            a: frozenset((ren[u], ren[v]) for (u, v) in m.transitions[a])
            for a in m.alphabet
        },
        valuation={r: frozenset(ren[s] for s in ext) for r, ext in m.valuation.items()},
    )
    return PointedModel(copied, ren[pm.point])


def generated_submodel(m: Model, w: str) -> Model:
    """Restriction to {w} plus everything reachable from w."""
    m.require_state(w)
    keep = m.reachable([w]) | {w}
    return _restrict(m, keep)


def _restrict(m: Model, keep: frozenset[str]) -> Model:
    return Model(
        alphabet=m.alphabet,
        states=tuple(s for s in m.states if s in keep),
        transitions={
            a: frozenset((u, v) for (u, v) in m.transitions[a] if u in keep and v in keep)
            for a in m.alphabet
        },
        valuation={r: ext & keep for r, ext in m.valuation.items()},
    )


def prune(m: Model, t_set: Iterable[str]) -> Model:
    """Remove all strict descendants of the given states; the states
    themselves survive unless they descend from another member."""
    t_set = frozenset(t_set)
    for s in t_set:
        m.require_state(s)
    keep = frozenset(m.states) - m.reachable(t_set)
    return _restrict(m, keep)


def eq_modulo(m: Model, n: Model, t_set: Iterable[str]) -> bool:
    """Same states and transitions; per-state atom sets agree outside
    the exempt set."""
    t_set = frozenset(t_set)
    if set(m.states) != set(n.states):
        return False
    if m.alphabet != n.alphabet:
        return False
    for a in m.alphabet:
        if m.transitions[a] != n.transitions[a]:
            return False
    for s in m.states:
        if s in t_set:
            continue
        if m.atoms_of(s) != n.atoms_of(s):
            return False
    return True


def override_valuation(m: Model, atom: str, t_set: Iterable[str]) -> Model:
    """Replace the extension of one atom, leaving everything else alone."""
    t_set = frozenset(t_set)
    for s in t_set:
        m.require_state(s)
    val = dict(m.valuation)
    val[atom] = t_set
    return Model(m.alphabet, m.states, m.transitions, val)


def check_tree_like(m: Model) -> Optional[str]:
    """None when tree-like, else the first violated condition: a unique
    root reaching everything, unique parents, action-disjoint edges, and
    acyclicity."""
    edges = [(u, a, v) for a in m.alphabet for (u, v) in m.transitions[a]]
    all_states = set(m.states)
    candidates = [
        s for s in m.states if all_states - {s} <= set(m.reachable([s]))
    ]
    if len(candidates) != 1:
        return "root"
    parents: dict[str, set[str]] = {}
    for (u, _, v) in edges:
        parents.setdefault(v, set()).add(u)
    for v, ps in parents.items():
        if len(ps) > 1:
            return "unique-parent"
    pair_actions: dict[tuple[str, str], set[str]] = {}
    for (u, a, v) in edges:
        pair_actions.setdefault((u, v), set()).add(a)
        if len(pair_actions[(u, v)]) > 1:
            return "action-disjoint"
    for s in m.states:
        if s in m.reachable([s]):
            return "acyclic"
    return None


def is_tree_like(m: Model) -> bool:
    return check_tree_like(m) is None


def unravel(pm: PointedModel, depth: Optional[int] = None) -> PointedModel:
    """Tree-like unfolding whose states are transition paths, rendered as
    ``s/a/t`` chains.  Without a depth bound the reachable part must be
    acyclic; with a bound, paths are truncated at that many steps."""
    m = pm.model
    if depth is None:
        reach = m.reachable([pm.point]) | {pm.point}
        for s in reach:
            if s in m.reachable([s]):
                raise CyclicWithoutBound(
                    f"cycle through {s!r}; pass a depth bound to unravel"
                )
    states: list[str] = []
    trans: dict[str, set[tuple[str, str]]] = {a: set() for a in m.alphabet}
    val: dict[str, set[str]] = {r: set() for r in m.valuation}
    todo: list[tuple[str, str, int]] = [(pm.point, pm.point, 0)]
    while todo:
        last, path, d = todo.pop()
        states.append(path)
        for r in m.valuation:
            if last in m.valuation[r]:
                val[r].add(path)
        if depth is not None and d >= depth:
            continue
        for a in m.alphabet:
            for v in sorted(m.succ(a, last)):
                child = f"{path}/{a}/{v}"
                trans[a].add((path, child))
                todo.append((v, child, d + 1))
    unraveled = Model(
        alphabet=m.alphabet,
        states=tuple(sorted(states)),
        transitions={a: frozenset(s) for a, s in trans.items()},
        valuation={r: frozenset(s) for r, s in val.items()},
    )
    return PointedModel(unraveled, pm.point)


def _has_parent(m: Model, state: str) -> bool:
    return any(state in (v for (_, v) in m.transitions[a]) for a in m.alphabet)


def graft(
    pm: PointedModel,
    w_set: Iterable[str],
    parts: Mapping[str, PointedModel],
) -> Model:
    """Replace the subtree under each state u in ``w_set`` by the part
    rooted at that state's replacement: u keeps its incoming edges, takes
    the part root's atom set, and adopts the part root's outgoing edges."""
    m = pm.model
    w_set = frozenset(w_set)
    if check_tree_like(m) is not None:
        raise NotTreeLike("graft host must be tree-like")
    if _has_parent(m, pm.point):
        raise NotTreeLike("graft host must be pointed at its root")
    for u in w_set:
        m.require_state(u)
    if set(parts) != set(w_set):
        raise UnknownState("parts must be indexed exactly by the grafting states")
    if w_set & m.reachable(w_set):
        raise NotTreeLike("grafting states must not descend from one another")
    seen: set[str] = set(m.states)
    for u in sorted(w_set):
        part = parts[u]
        if part.model.alphabet != m.alphabet:
            raise StateClash("graft parts need the host's alphabet")
        if check_tree_like(part.model) is not None:
            raise NotTreeLike(f"part for {u!r} must be tree-like")
        if _has_parent(part.model, part.point):
            raise NotTreeLike(f"part for {u!r} must be pointed at its root")
        p_states = set(part.model.states)
        if p_states & seen:
            raise NotDisjoint(f"part for {u!r} shares state ids")
        seen |= p_states

    host = prune(m, w_set)
    states = list(host.states)
    atoms = set(m.valuation)
    trans: dict[str, set[tuple[str, str]]] = {
        a: set(host.transitions[a]) for a in m.alphabet
    }
    val: dict[str, set[str]] = {r: set(host.valuation.get(r, frozenset())) for r in atoms}
    for u in w_set:
        for r in val:
            val[r].discard(u)
    for u in sorted(w_set):
        part = parts[u]
        pm_, root = part.model, part.point
        atoms |= set(pm_.valuation)
        for r in pm_.valuation:
            val.setdefault(r, set())
        keep = [s for s in pm_.states if s != root]
        states.extend(keep)
        for a in m.alphabet:
            for (x, y) in pm_.transitions[a]:
                if x == root:
                    trans[a].add((u, y))
                elif y != root:
                    trans[a].add((x, y))
        for r, ext in pm_.valuation.items():
            val[r] |= {s for s in ext if s != root}
            if root in ext:
                val[r].add(u)
    return Model(
        alphabet=m.alphabet,
        states=tuple(states),
        transitions={a: frozenset(s) for a, s in trans.items()},
        valuation={r: frozenset(s) for r, s in val.items()},
    )


# ---------------------------------------------------------------------------
# JSON interchange


def model_to_json(m: Model, root: Optional[str] = None) -> str:
    doc = {
        "alphabet": list(m.alphabet),
        "atoms": list(m.atoms),
        "states": list(m.states),
        "transitions": [
            {"from": u, "action": a, "to": v}
            for a in m.alphabet
            for (u, v) in sorted(m.transitions[a])
        ],
        "valuation": {r: sorted(ext) for r, ext in sorted(m.valuation.items())},
    }
    if root is not None:
        m.require_state(root)
        doc["root"] = root
    return json.dumps(doc, indent=2)


def model_from_json(text: str) -> tuple[Model, Optional[str]]:
    doc = json.loads(text)
    valuation = {r: frozenset(v) for r, v in doc.get("valuation", {}).items()}
    for r in doc.get("atoms", []):
        valuation.setdefault(r, frozenset())
    m = make_model(
        doc["alphabet"],
        doc["states"],
        [(t["from"], t["action"], t["to"]) for t in doc.get("transitions", [])],
        valuation,
    )
    root = doc.get("root")
    if root is not None:
        m.require_state(root)
    return m, root


def load_pointed(path_selector: str) -> PointedModel:
    """Load ``file.json#state``; without a selector the file's ``root``
    field designates the point."""
    path, _, sel = path_selector.partition("#")
    with open(path, "r", encoding="utf-8") as fh:
        m, root = model_from_json(fh.read())
    point = sel or root
    if not point:
        raise UnknownState(f"{path}: no #state selector and no root in file")
    return PointedModel(m, point)
