"""Tableau construction and consistent-marking search for fixed-point-free
disjunctive formulas, an independent cross-validator of the model checker.

Construction decomposes a label set with the conjunction and disjunction
rules until only literals and covers remain, then applies the modal rule:
one child per cover member, labelled with that member and tagged with the
cover's action.  Disjunctive labels keep at most one cover per action;
this uniqueness is asserted at build time.

A marking relates model states to tableau nodes: the root pair is in, a
non-modal node passes its state to some child, and at a modal node the
state's successors and the node's per-action children must cover each
other, with every label literal true at the state.  Fixpoint rules never
fire on this fragment, so consistency is the local condition alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import FixpointPresent, NotDisjunctive, QuantifierPresent
from .lts import PointedModel
from .syntax import (
    And,
    Atom,
    Bot,
    Cover,
    Formula,
    Neg,
    Or,
    Top,
    has_fixpoint,
    has_quantifier,
    is_df,
    is_literal,
    nnf,
    render,
)


@dataclass
class TableauNode:
    nid: int
    label: frozenset[Formula]
    rule: Optional[str]  # "and" | "or" | "mod" | None for leaves
    children: list[tuple[Optional[str], int]] = field(default_factory=list)
    modal: bool = False
    choice: bool = False


@dataclass
class Tableau:
    formula: Formula
    nodes: list[TableauNode]

    @property
    def root(self) -> TableauNode:
        return self.nodes[0]


@dataclass(frozen=True)
class Marking:
    pairs: frozenset[tuple[str, int]]


def _sorted_label(label: frozenset[Formula]) -> list[Formula]:
    return sorted(label, key=render)


def _is_passive(g: Formula) -> bool:
    return is_literal(g) or isinstance(g, (Cover, Top, Bot))


def build_tableau(f: Formula) -> Tableau:
    """Decompose a fixed-point-free disjunctive formula; the input is
    normalized to negation normal form first so the propositional rules
    suffice.  Deterministic given canonical label ordering."""
    if has_quantifier(f):
        raise QuantifierPresent(f"quantifier in tableau input: {render(f)}")
    if has_fixpoint(f):
        raise FixpointPresent(f"fixpoint in tableau input: {render(f)}")
    if not is_df(f):
        raise NotDisjunctive(f"tableau input must be disjunctive: {render(f)}", f)
    g = nnf(f)
    nodes: list[TableauNode] = []

    def new_node(label: frozenset[Formula]) -> int:
        nid = len(nodes)
        nodes.append(TableauNode(nid, label, None))
        return nid

    def expand(nid: int) -> None:
        node = nodes[nid]
        label = node.label
        for member in _sorted_label(label):
            if _is_passive(member):
                continue
            rest = label - {member}
            if isinstance(member, And):
                node.rule = "and"
                child = new_node(rest | {member.left, member.right})
                node.children.append((None, child))
                expand(child)
                return
            if isinstance(member, Or):
                node.rule = "or"
                left = new_node(rest | {member.left})
                right = new_node(rest | {member.right})
                node.children.append((None, left))
                node.children.append((None, right))
                expand(left)
                expand(right)
                return
            raise NotDisjunctive(
                f"label member outside the fragment: {render(member)}", member
            )
        covers = [m for m in _sorted_label(label) if isinstance(m, Cover)]
        actions = [c.action for c in covers]
        if len(set(actions)) != len(actions):
            raise NotDisjunctive(
                "two covers over one action in a tableau label; "
                "disjunctive labels keep covers unique per action"
            )
        node.modal = True
        if covers:
            node.rule = "mod"
            for c in covers:
                for member in _sorted_label(c.members):
                    child = new_node(frozenset((member,)))
                    node.children.append((c.action, child))
                    nodes[child].choice = True
                    expand(child)

    root = new_node(frozenset((g,)))
    nodes[root].choice = True
    expand(root)
    return Tableau(g, nodes)


def _literal_holds(pm_model, state: str, g: Formula) -> bool:
    if isinstance(g, Top):
        return True
    if isinstance(g, Bot):
        return False
    if isinstance(g, Atom):
        return g.name in pm_model.valuation and state in pm_model.valuation[g.name]
    assert isinstance(g, Neg) and isinstance(g.child, Atom)
    return not (
        g.child.name in pm_model.valuation and state in pm_model.valuation[g.child.name]
    )


def _ok_sets(t: Tableau, pm: PointedModel) -> list[set[str]]:
    """Bottom-up: states that can carry each node in some marking."""
    m = pm.model
    ok: list[set[str]] = [set() for _ in t.nodes]
    for node in sorted(t.nodes, key=lambda n: -n.nid):
        if not node.modal:
            acc: set[str] = set()
            for (_, c) in node.children:
                acc |= ok[c]
            ok[node.nid] = acc
            continue
        lits = [g for g in node.label if _is_passive(g) and not isinstance(g, Cover)]
        covers = [g for g in node.label if isinstance(g, Cover)]
        good: set[str] = set()
        for s in m.states:
            if not all(_literal_holds(m, s, g) for g in lits):
                continue
            fine = True
            for c in covers:
                kids = [cid for (act, cid) in node.children if act == c.action]
                succ = m.succ(c.action, s)
                for cid in kids:
                    if not (succ & ok[cid]):
                        fine = False
                        break
                if fine:
                    for s1 in succ:
                        if not any(s1 in ok[cid] for cid in kids):
                            fine = False
                            break
                if not fine:
                    break
            if fine:
                good.add(s)
        ok[node.nid] = good
    return ok


def find_marking(t: Tableau, pm: PointedModel) -> Optional[Marking]:
    """A marking placing the designated point at the root, or None; the
    search resolves node-by-node over the bottom-up feasibility sets, so a
    returned marking always satisfies the defining clauses."""
    ok = _ok_sets(t, pm)
    if pm.point not in ok[0]:
        return None
    m = pm.model
    pairs: set[tuple[str, int]] = set()
    todo = [(pm.point, 0)]
    while todo:
        (s, nid) = todo.pop()
        if (s, nid) in pairs:
            continue
        pairs.add((s, nid))
        node = t.nodes[nid]
        if not node.modal:
            for (_, c) in node.children:
                if s in ok[c]:
                    todo.append((s, c))
                    break
            continue
        covers = [g for g in node.label if isinstance(g, Cover)]
        for c in covers:
            kids = [cid for (act, cid) in node.children if act == c.action]
            succ = sorted(m.succ(c.action, s))
            for cid in kids:
                for s1 in succ:
                    if s1 in ok[cid]:
                        todo.append((s1, cid))
                        break
            for s1 in succ:
                for cid in kids:
                    if s1 in ok[cid]:
                        todo.append((s1, cid))
                        break
    return Marking(frozenset(pairs))


def verify_marking(marking: Marking, t: Tableau, pm: PointedModel) -> bool:
    """Direct check of the marking clauses plus local consistency; used to
    certify extracted markings independently of the search."""
    m = pm.model
    pairs = marking.pairs
    if (pm.point, 0) not in pairs:
        return False
    for (s, nid) in pairs:
        node = t.nodes[nid]
        if not node.modal:
            if not any((s, c) in pairs for (_, c) in node.children):
                return False
            continue
        for g in node.label:
            if _is_passive(g) and not isinstance(g, Cover):
                if not _literal_holds(m, s, g):
                    return False
        for c in [g for g in node.label if isinstance(g, Cover)]:
            kids = [cid for (act, cid) in node.children if act == c.action]
            succ = m.succ(c.action, s)
            for cid in kids:
                if not any((s1, cid) in pairs for s1 in succ):
                    return False
            for s1 in succ:
                if not any((s1, cid) in pairs for cid in kids):
                    return False
    return True


def to_dot(t: Tableau, marking: Optional[Marking] = None) -> str:
    """Graphviz rendering; marked nodes list their carrying states."""
    lines = ["digraph tableau {", "  node [shape=box, fontname=monospace];"]
    carried: dict[int, list[str]] = {}
    if marking is not None:
        for (s, nid) in sorted(marking.pairs):
            carried.setdefault(nid, []).append(s)
    for node in t.nodes:
        label = ", ".join(render(g) for g in _sorted_label(node.label))
        extra = f"\\nrule={node.rule}" if node.rule else ""
        if node.modal:
            extra += "\\nmodal"
        if node.nid in carried:
            extra += "\\nstates: " + " ".join(carried[node.nid])
        lines.append(f'  n{node.nid} [label="{{{label}}}{extra}"];')
        for (act, c) in node.children:
            edge = f' [label="{act}"]' if act else ""
            lines.append(f"  n{node.nid} -> n{c}{edge};")
    lines.append("}")
    return "\n".join(lines)
