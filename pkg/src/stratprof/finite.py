"""Backward induction and finite rationality on acyclic profiles."""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from functools import lru_cache

from .core import (
    Internal,
    Leaf,
    NodeId,
    Profile,
    UtilityAssignment,
    subprofile,
)

DEFAULT_ENUMERATION_BOUND = 20


class NotFinite(ValueError):
    pass


class TooLarge(ValueError):
    pass


def _require_finite(s: Profile) -> None:
    if not s.is_finite:
        raise NotFinite("profile has a cycle")


def _postorder(s: Profile) -> list[NodeId]:
    # Children before parents; shared nodes appear once.
    order: list[NodeId] = []
    done: set[NodeId] = set()
    stack = [(s.root, False)]
    while stack:
        i, expanded = stack.pop()
        if i in done:
            continue
        n = s.nodes[i]
        if expanded or isinstance(n, Leaf):
            done.add(i)
            order.append(i)
            continue
        stack.append((i, True))
        stack.append((n.child2, False))
        stack.append((n.child1, False))
    return order


def _bi_under(nodes, order, choice) -> bool:
    """BI over ``order`` (a postorder) reading choices from ``choice``."""
    value: dict[NodeId, UtilityAssignment] = {}
    for i in order:
        n = nodes[i]
        if isinstance(n, Leaf):
            value[i] = n.utility
            continue
        if choice[i] == 1:
            mine, theirs = value[n.child1], value[n.child2]
        else:
            mine, theirs = value[n.child2], value[n.child1]
        if mine[n.owner] < theirs[n.owner]:
            return False
        value[i] = mine
    return True


def bi(s: Profile) -> bool:
    """Backward induction: every internal node's choice weakly maximises its
    owner's utility given the values of the two direct subprofiles."""
    _require_finite(s)
    return _bi_under(s.nodes, _postorder(s), s.choices())


def erase_choices(s: Profile) -> Profile:
    """Canonical representative of the underlying game: every choice set to 1."""
    return s.with_choices({i: 1 for i in s.internal_ids})


def _choice_vectors(ids: Sequence[NodeId]) -> Iterator[dict[NodeId, int]]:
    for combo in itertools.product((1, 2), repeat=len(ids)):
        yield dict(zip(ids, combo))


def enumerate_profiles(g: Profile, bound: int = DEFAULT_ENUMERATION_BOUND) -> Iterator[Profile]:
    """All ``2**k`` profiles of the game ``g`` (its choices are ignored).

    Profiles are produced in lexicographic order of the choice vector over
    ``g.internal_ids``.
    """
    _require_finite(g)
    ids = g.internal_ids
    if len(ids) > bound:
        raise TooLarge(f"{len(ids)} internal nodes exceeds the bound {bound}")
    for choice in _choice_vectors(ids):
        yield g.with_choices(choice)


def _witness_table_of(g: Profile) -> dict[NodeId, frozenset[int]]:
    # Exhaustive: every choice vector of every subgame is tried.
    table: dict[NodeId, frozenset[int]] = {}
    for v in g.internal_ids:
        sub = subprofile(g, v)
        order = _postorder(sub)
        found = set()
        for choice in _choice_vectors(sub.internal_ids):
            if choice[v] not in found and _bi_under(g.nodes, order, choice):
                found.add(choice[v])
                if len(found) == 2:
                    break
        table[v] = frozenset(found)
    return table


@lru_cache(maxsize=4096)
def _witness_table(g: Profile) -> dict[NodeId, frozenset[int]]:
    return _witness_table_of(g)


def bi_witness_choices(s: Profile) -> dict[NodeId, frozenset[int]]:
    """For each internal node, the root choices made by some BI profile of
    the subgame there (found by enumerating all of that subgame's profiles)."""
    _require_finite(s)
    return _witness_table(erase_choices(s))


def _rat_f_under(nodes, root, choice, table, witness_child: bool) -> bool:
    i = root
    while True:
        n = nodes[i]
        if isinstance(n, Leaf):
            return True
        c = choice[i]
        if c not in table[i]:
            return False
        if witness_child:
            return True
        i = n.child1 if c == 1 else n.child2


def rat_f(s: Profile, *, witness_child: bool = False) -> bool:
    """Finite rationality.

    At each node on the chosen path there must be a same-game BI profile
    with the same root choice.  By default the recursion continues into
    the original profile's chosen child; with ``witness_child=True`` it
    continues into the witness's child instead, which is BI and therefore
    rational, so only the root needs a witness.
    """
    _require_finite(s)
    table = _witness_table(erase_choices(s))
    return _rat_f_under(s.nodes, s.root, s.choices(), table, witness_child)


def aumann_counterexamples(
    g: Profile, bound: int = DEFAULT_ENUMERATION_BOUND, *, witness_child: bool = False
) -> list[Profile]:
    """Profiles of game ``g`` on which ``rat_f`` and ``bi`` disagree."""
    _require_finite(g)
    ids = g.internal_ids
    if len(ids) > bound:
        raise TooLarge(f"{len(ids)} internal nodes exceeds the bound {bound}")
    order = _postorder(g)
    table = _witness_table_of(g)
    bad = []
    for choice in _choice_vectors(ids):
        if _rat_f_under(g.nodes, g.root, choice, table, witness_child) != _bi_under(g.nodes, order, choice):
            bad.append(g.with_choices(choice))
    return bad


def aumann_equivalence(g: Profile, bound: int = DEFAULT_ENUMERATION_BOUND) -> bool:
    """Whether ``rat_f`` and ``bi`` select the same profiles of game ``g``."""
    return not aumann_counterexamples(g, bound)


# Template generation for exhaustive sweeps.

def tree_shapes(k: int) -> Iterator[tuple]:
    """Binary tree shapes with ``k`` internal nodes as nested tuples;
    ``None`` marks a leaf slot."""
    if k == 0:
        yield None
        return
    for left in range(k):
        for l_shape in tree_shapes(left):
            for r_shape in tree_shapes(k - 1 - left):
                yield (l_shape, r_shape)


def all_templates(
    max_internal: int,
    values: Sequence[int] = (0, 1, 2),
    agents: Sequence[str] = ("A", "B"),
) -> Iterator[Profile]:
    """Every tree-shaped game with at most ``max_internal`` decision nodes,
    any owner at each node, and each leaf giving every agent a value from
    ``values``.  Choices are all 1."""
    assignments = [UtilityAssignment(zip(agents, combo))
                   for combo in itertools.product(values, repeat=len(agents))]
    for k in range(max_internal + 1):
        for shape in tree_shapes(k):
            for owners in itertools.product(agents, repeat=k):
                for leaf_us in itertools.product(assignments, repeat=k + 1):
                    yield _instantiate(shape, owners, leaf_us)


def _instantiate(shape, owners, leaf_us) -> Profile:
    nodes: list = []
    own = iter(owners)
    lus = iter(leaf_us)

    def go(sh) -> int:
        if sh is None:
            nodes.append(Leaf(next(lus)))
            return len(nodes) - 1
        idx = len(nodes)
        nodes.append(None)
        owner = next(own)
        c1 = go(sh[0])
        c2 = go(sh[1])
        nodes[idx] = Internal(owner, 1, c1, c2)
        return idx

    root = go(shape)
    return Profile(tuple(nodes), root)
