"""Fixpoint evaluation of (co)inductive predicates on rational profiles.

Inductive predicates (convergence) are least fixpoints, computed by a
worklist that only ever adds nodes.  Coinductive ones (divergence, the
``always`` modality, SPE) are greatest fixpoints, computed by a worklist
that only ever removes nodes from the full reachable set.  Both are exact
on a finite node graph.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Callable, Iterable, Set
from dataclasses import dataclass
from typing import Literal

from .core import Internal, Leaf, NodeId, Profile

NodeSet = frozenset
LocalRule = Callable[[Profile, NodeId, Set], bool]


@dataclass(frozen=True)
class Verdict:
    """Three-valued answer; ``unknown`` carries the search bound that bit."""

    status: Literal["holds", "fails", "unknown"]
    depth: int | None = None
    reason: str = ""

    @property
    def definite(self) -> bool:
        return self.status != "unknown"

    def __bool__(self) -> bool:
        if self.status == "unknown":
            raise ValueError("an unknown verdict has no truth value")
        return self.status == "holds"

    def __str__(self) -> str:
        if self.status == "unknown":
            return f"unknown@{self.depth}"
        return "true" if self.status == "holds" else "false"


HOLDS = Verdict("holds")
FAILS = Verdict("fails")


def unknown_at(depth: int, reason: str = "") -> Verdict:
    return Verdict("unknown", depth, reason)


def _order(s: Profile, order: Iterable[NodeId] | random.Random | None) -> list[NodeId]:
    if order is None:
        return list(s.reachable)
    if isinstance(order, random.Random):
        nodes = list(s.reachable)
        order.shuffle(nodes)
        return nodes
    return list(order)


def lfp_eval(rule: LocalRule, s: Profile, order=None) -> frozenset[NodeId]:
    """Least set of reachable nodes closed under ``rule``.

    ``order`` seeds the worklist (an explicit id sequence or a
    ``random.Random`` to shuffle with); the result does not depend on it
    when ``rule`` is monotone.
    """
    current: set[NodeId] = set()
    work = deque(_order(s, order))
    queued = set(work)
    preds = s.predecessors
    while work:
        v = work.popleft()
        queued.discard(v)
        if v in current or not rule(s, v, current):
            continue
        current.add(v)
        for p in preds[v]:
            if p not in current and p not in queued:
                queued.add(p)
                work.append(p)
    return frozenset(current)


def gfp_eval(rule: LocalRule, s: Profile, order=None) -> frozenset[NodeId]:
    """Greatest set of reachable nodes consistent with ``rule``."""
    current = set(s.reachable)
    work = deque(_order(s, order))
    queued = set(work)
    preds = s.predecessors
    while work:
        v = work.popleft()
        queued.discard(v)
        if v not in current or rule(s, v, current):
            continue
        current.discard(v)
        for p in preds[v]:
            if p in current and p not in queued:
                queued.add(p)
                work.append(p)
    return frozenset(current)


# Local rules.  Each reads the candidate set only through a node's children,
# which is what makes them monotone.

def conv_rule(s: Profile, v: NodeId, assumed: Set) -> bool:
    n = s.nodes[v]
    return isinstance(n, Leaf) or n.chosen in assumed


def div_rule(s: Profile, v: NodeId, assumed: Set) -> bool:
    n = s.nodes[v]
    return isinstance(n, Internal) and n.chosen in assumed


def always_rule(base: Set) -> LocalRule:
    """Rule for ``□P`` given the extension ``base`` of ``P``."""

    def rule(s: Profile, v: NodeId, assumed: Set) -> bool:
        if v not in base:
            return False
        n = s.nodes[v]
        return isinstance(n, Leaf) or (n.child1 in assumed and n.child2 in assumed)

    return rule


def true_rule(s: Profile, v: NodeId, assumed: Set) -> bool:
    return True


# Node-set extensions of the predicates.

def convergent_set(s: Profile) -> frozenset[NodeId]:
    return lfp_eval(conv_rule, s)


def always_convergent_set(s: Profile) -> frozenset[NodeId]:
    return gfp_eval(always_rule(convergent_set(s)), s)


def divergent_set(s: Profile) -> frozenset[NodeId]:
    return gfp_eval(div_rule, s)


def outcomes(s: Profile, conv: Set | None = None) -> dict[NodeId, NodeId]:
    """Leaf reached from each convergent node by following choices."""
    conv = convergent_set(s) if conv is None else conv
    out: dict[NodeId, NodeId] = {}
    for v in conv:
        path = []
        i = v
        while i not in out:
            n = s.nodes[i]
            if isinstance(n, Leaf):
                out[i] = i
                break
            path.append(i)
            i = n.chosen
        leaf = out[i]
        for p in path:
            out[p] = leaf
    return out


def pe_set(s: Profile) -> frozenset[NodeId]:
    """Nodes satisfying PE: always-convergent, and the chosen side is no
    worse for the owner than the other side.  Leaves qualify vacuously."""
    aconv = always_convergent_set(s)
    out = outcomes(s)
    good = set()
    for v in aconv:
        n = s.nodes[v]
        if isinstance(n, Leaf):
            good.add(v)
            continue
        mine = s.nodes[out[n.chosen]].utility[n.owner]
        theirs = s.nodes[out[n.other]].utility[n.owner]
        if mine >= theirs:
            good.add(v)
    return frozenset(good)


def spe_set(s: Profile) -> frozenset[NodeId]:
    return gfp_eval(always_rule(pe_set(s)), s)


def convergent(s: Profile) -> bool:
    return s.root in convergent_set(s)


def always_convergent(s: Profile) -> bool:
    return s.root in always_convergent_set(s)


def divergent(s: Profile) -> bool:
    return s.root in divergent_set(s)


def pe(s: Profile) -> bool:
    return s.root in pe_set(s)


def spe(s: Profile) -> bool:
    return s.root in spe_set(s)


def spe_outcomes(s: Profile) -> dict[NodeId, frozenset[NodeId]]:
    """For every reachable node, the leaves some SPE of its subgame can end in.

    Only the game matters here, never the choices stored in ``s``.  A
    witness must reach its outcome in finitely many steps (least
    fixpoint along the path) while every off-path subgame needs a witness
    of its own, indefinitely deep (greatest fixpoint), so this is a
    nested nu/mu iteration over (node, leaf) pairs.
    """
    nodes = s.reachable
    leaves = s.leaf_ids
    outer: dict[NodeId, frozenset[NodeId]] = {
        v: (frozenset({v}) if isinstance(s.nodes[v], Leaf) else frozenset(leaves)) for v in nodes
    }
    while True:
        inner: dict[NodeId, set[NodeId]] = {
            v: ({v} if isinstance(s.nodes[v], Leaf) else set()) for v in nodes
        }
        changed = True
        while changed:
            changed = False
            for v in s.internal_ids:
                n = s.nodes[v]
                for c in (1, 2):
                    path, off = n.child(c), n.child(3 - c)
                    if not outer[off]:
                        continue
                    floor = min(s.nodes[y].utility[n.owner] for y in outer[off])
                    for x in inner[path]:
                        if x not in inner[v] and s.nodes[x].utility[n.owner] >= floor:
                            inner[v].add(x)
                            changed = True
        new = {v: frozenset(inner[v]) for v in nodes}
        if new == outer:
            return new
        outer = new


def spe_witness_choices(s: Profile) -> dict[NodeId, frozenset[int]]:
    """Root choices ``c`` for which the subgame at each internal node has an
    SPE whose root chooses ``c``."""
    outs = spe_outcomes(s)
    result: dict[NodeId, frozenset[int]] = {}
    for v in s.internal_ids:
        n = s.nodes[v]
        ok = set()
        for c in (1, 2):
            path, off = n.child(c), n.child(3 - c)
            if not outs[path] or not outs[off]:
                continue
            floor = min(s.nodes[y].utility[n.owner] for y in outs[off])
            if any(s.nodes[x].utility[n.owner] >= floor for x in outs[path]):
                ok.add(c)
        result[v] = frozenset(ok)
    return result


def rat_inf_set(s: Profile) -> frozenset[NodeId]:
    """Extension of Rat_inf: along the chosen path, every choice is the root
    choice of some same-game SPE (greatest fixpoint)."""
    witnesses = spe_witness_choices(s)

    def rule(p: Profile, v: NodeId, assumed: Set) -> bool:
        n = p.nodes[v]
        if isinstance(n, Leaf):
            return True
        return n.choice in witnesses[v] and n.chosen in assumed

    return gfp_eval(rule, s)


def rat_inf(s: Profile) -> bool:
    return s.root in rat_inf_set(s)
