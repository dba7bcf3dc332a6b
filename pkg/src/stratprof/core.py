"""Strategy profiles as pointed graphs with exact rational utilities.

A profile is an immutable node store plus a root index.  Internal nodes
point at their two children by index, so a cycle in the store is a
rational infinite profile and an acyclic reachable part is a finite one.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Union

Agent = str
NodeId = int
UtilityLike = Union[int, Fraction, str]

CHOICES = (1, 2)


class InvalidProfile(ValueError):
    pass


class InvalidNode(KeyError):
    pass


class Divergent(ValueError):
    """The chosen path re-enters a node before reaching a leaf."""


def to_utility(value: UtilityLike) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Strings go through :class:`fractions.Fraction`, so ``"0.5"`` and
    ``"1/2"`` are both accepted.  Floats are refused: a binary float is
    rarely the number the caller had in mind.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not utilities")
    if isinstance(value, float):
        raise TypeError(f"float utility {value!r}; pass a str, int or Fraction")
    if isinstance(value, (Rational, str)):
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as a rational utility")


class UtilityAssignment(Mapping):
    """Total map from agents to exact utilities, hashable and immutable."""

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, entries: Mapping[Agent, UtilityLike] | Iterable[tuple[Agent, UtilityLike]]):
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        items: dict[Agent, Fraction] = {}
        for agent, value in pairs:
            if not isinstance(agent, str) or not agent:
                raise InvalidProfile(f"bad agent label {agent!r}")
            if agent in items:
                raise InvalidProfile(f"agent {agent!r} assigned twice")
            items[agent] = to_utility(value)
        self._items = tuple(sorted(items.items()))
        self._map = dict(self._items)
        self._hash = hash(self._items)

    def __getitem__(self, agent: Agent) -> Fraction:
        return self._map[agent]

    def __iter__(self) -> Iterator[Agent]:
        return (a for a, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UtilityAssignment):
            return self._items == other._items
        if isinstance(other, Mapping):
            return dict(self._items) == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{a}:{v}" for a, v in self._items)
        return f"UtilityAssignment({body})"


@dataclass(frozen=True)
class Leaf:
    utility: UtilityAssignment


@dataclass(frozen=True)
class Internal:
    owner: Agent
    choice: int
    child1: NodeId
    child2: NodeId

    def __post_init__(self) -> None:
        if self.choice not in CHOICES:
            raise InvalidProfile(f"choice must be 1 or 2, got {self.choice!r}")

    @property
    def chosen(self) -> NodeId:
        return self.child1 if self.choice == 1 else self.child2

    @property
    def other(self) -> NodeId:
        return self.child2 if self.choice == 1 else self.child1

    @property
    def children(self) -> tuple[NodeId, NodeId]:
        return (self.child1, self.child2)

    def child(self, c: int) -> NodeId:
        return self.child1 if c == 1 else self.child2


Node = Union[Leaf, Internal]


@dataclass(frozen=True, eq=True)
class Profile:
    """A pointed node graph.

    ``nodes`` may hold entries not reachable from ``root`` (a subprofile
    shares its parent's store); every algorithm works over
    :attr:`reachable` only.
    """

    nodes: tuple[Node, ...]
    root: NodeId

    def __post_init__(self) -> None:
        size = len(self.nodes)
        if not 0 <= self.root < size:
            raise InvalidNode(self.root)
        for i, n in enumerate(self.nodes):
            if isinstance(n, Internal):
                if not (0 <= n.child1 < size and 0 <= n.child2 < size):
                    raise InvalidProfile(f"node {i} points outside the profile")
            elif not isinstance(n, Leaf):
                raise InvalidProfile(f"node {i} is neither a leaf nor a decision node")

    def node(self, i: NodeId) -> Node:
        if not 0 <= i < len(self.nodes):
            raise InvalidNode(i)
        return self.nodes[i]

    @cached_property
    def reachable(self) -> tuple[NodeId, ...]:
        """Reachable node ids in depth-first preorder (child1 before child2)."""
        seen = {self.root}
        order = []
        stack = [self.root]
        while stack:
            i = stack.pop()
            order.append(i)
            n = self.nodes[i]
            if isinstance(n, Internal):
                for c in (n.child2, n.child1):
                    if c not in seen:
                        seen.add(c)
                        stack.append(c)
        return tuple(order)

    @cached_property
    def internal_ids(self) -> tuple[NodeId, ...]:
        return tuple(i for i in self.reachable if isinstance(self.nodes[i], Internal))

    @cached_property
    def leaf_ids(self) -> tuple[NodeId, ...]:
        return tuple(i for i in self.reachable if isinstance(self.nodes[i], Leaf))

    @cached_property
    def predecessors(self) -> dict[NodeId, tuple[NodeId, ...]]:
        preds: dict[NodeId, list[NodeId]] = {i: [] for i in self.reachable}
        for i in self.internal_ids:
            n = self.nodes[i]
            preds[n.child1].append(i)
            if n.child2 != n.child1:
                preds[n.child2].append(i)
        return {i: tuple(p) for i, p in preds.items()}

    @cached_property
    def agents(self) -> frozenset[Agent]:
        out: set[Agent] = set()
        for i in self.reachable:
            n = self.nodes[i]
            if isinstance(n, Leaf):
                out.update(n.utility)
            else:
                out.add(n.owner)
        return frozenset(out)

    @cached_property
    def is_finite(self) -> bool:
        """True when the reachable graph is acyclic."""
        state: dict[NodeId, int] = {}
        for start in self.reachable:
            if start in state:
                continue
            stack = [(start, False)]
            while stack:
                i, done = stack.pop()
                if done:
                    state[i] = 2
                    continue
                if state.get(i) == 2:
                    continue
                state[i] = 1
                stack.append((i, True))
                n = self.nodes[i]
                if isinstance(n, Internal):
                    for c in n.children:
                        s = state.get(c)
                        if s == 1:
                            return False
                        if s is None:
                            stack.append((c, False))
        return True

    @property
    def root_node(self) -> Node:
        return self.nodes[self.root]

    def choices(self) -> dict[NodeId, int]:
        return {i: self.nodes[i].choice for i in self.internal_ids}

    def with_choices(self, choices: Mapping[NodeId, int]) -> Profile:
        """Same store and root with the given nodes' choices replaced."""
        nodes = list(self.nodes)
        for i, c in choices.items():
            n = nodes[i]
            if not isinstance(n, Internal):
                raise InvalidNode(i)
            if c not in CHOICES:
                raise InvalidProfile(f"choice must be 1 or 2, got {c!r}")
            nodes[i] = Internal(n.owner, c, n.child1, n.child2)
        return Profile(tuple(nodes), self.root)

    def __repr__(self) -> str:
        return f"Profile(root={self.root}, reachable={len(self.reachable)})"


class ProfileBuilder:
    """Mutable, single-threaded construction of a profile graph.

    Internal nodes may be declared before their children exist, which is
    how cycles are written::

        b = ProfileBuilder()
        n0 = b.internal("A", 2)
        n1 = b.internal("B", 2, b.leaf({"A": 0, "B": 1}), n0)
        b.set_children(n0, b.leaf({"A": 1, "B": 0}), n1)
        s = b.build(n0)
    """

    def __init__(self) -> None:
        self._nodes: list[Node | list] = []
        self._imported: dict[tuple[int, NodeId], NodeId] = {}
        self._stores: list[tuple[Node, ...]] = []  # keeps id() keys valid

    def leaf(self, u: Mapping[Agent, UtilityLike] | UtilityAssignment) -> NodeId:
        ua = u if isinstance(u, UtilityAssignment) else UtilityAssignment(u)
        if not len(ua):
            raise InvalidProfile("empty utility assignment")
        self._nodes.append(Leaf(ua))
        return len(self._nodes) - 1

    def internal(self, owner: Agent, choice: int, child1: NodeId | None = None,
                 child2: NodeId | None = None) -> NodeId:
        if not isinstance(owner, str) or not owner:
            raise InvalidProfile(f"bad owner {owner!r}")
        if choice not in CHOICES:
            raise InvalidProfile(f"choice must be 1 or 2, got {choice!r}")
        self._nodes.append([owner, choice, child1, child2])
        return len(self._nodes) - 1

    def set_children(self, node: NodeId, child1: NodeId, child2: NodeId) -> None:
        entry = self._nodes[node]
        if not isinstance(entry, list):
            raise InvalidNode(node)
        entry[2], entry[3] = child1, child2

    def add(self, s: Profile) -> NodeId:
        """Copy the reachable part of ``s`` in, sharing nodes already copied."""
        store = id(s.nodes)
        self._stores.append(s.nodes)
        for i in s.reachable:
            key = (store, i)
            if key in self._imported:
                continue
            n = s.nodes[i]
            if isinstance(n, Leaf):
                self._nodes.append(n)
            else:
                self._nodes.append([n.owner, n.choice, n.child1, n.child2, store])
            self._imported[key] = len(self._nodes) - 1
        return self._imported[(store, s.root)]

    def build(self, root: NodeId) -> Profile:
        out: list[Node] = []
        size = len(self._nodes)
        for i, entry in enumerate(self._nodes):
            if isinstance(entry, Leaf):
                out.append(entry)
                continue
            owner, choice, c1, c2 = entry[:4]
            if len(entry) == 5:
                c1 = self._imported[(entry[4], c1)]
                c2 = self._imported[(entry[4], c2)]
            for c in (c1, c2):
                if c is None:
                    raise InvalidProfile(f"node {i} has an unset child")
                if not 0 <= c < size:
                    raise InvalidNode(c)
            out.append(Internal(owner, choice, c1, c2))
        if not 0 <= root < size:
            raise InvalidNode(root)
        return Profile(tuple(out), root)


def build_leaf(u: Mapping[Agent, UtilityLike] | UtilityAssignment) -> Profile:
    b = ProfileBuilder()
    return b.build(b.leaf(u))


def build_internal(owner: Agent, choice: int, s1: Profile, s2: Profile) -> Profile:
    """``<owner, choice, s1, s2>``; nodes shared between s1 and s2 stay shared."""
    b = ProfileBuilder()
    r1 = b.add(s1)
    r2 = b.add(s2)
    return b.build(b.internal(owner, choice, r1, r2))


def subprofile(s: Profile, at: NodeId) -> Profile:
    s.node(at)
    return Profile(s.nodes, at)


def same_game(s: Profile, t: Profile) -> bool:
    """Decide ``s =_g t``: equal games up to bisimulation, choices ignored.

    The relation is the greatest one closed under the two clauses.  A pair
    survives exactly when no locally mismatched pair is reachable from it
    in the product graph, so a forward search suffices.
    """
    return _bisimilar(s, t, False)


def same_profile(s: Profile, t: Profile) -> bool:
    """Bisimilarity including the choices."""
    return _bisimilar(s, t, True)


def _bisimilar(s: Profile, t: Profile, choices: bool) -> bool:
    start = (s.root, t.root)
    seen = {start}
    queue = deque([start])
    while queue:
        i, j = queue.popleft()
        a, b = s.nodes[i], t.nodes[j]
        if isinstance(a, Leaf) or isinstance(b, Leaf):
            if not (isinstance(a, Leaf) and isinstance(b, Leaf) and a.utility == b.utility):
                return False
            continue
        if a.owner != b.owner or (choices and a.choice != b.choice):
            return False
        for pair in ((a.child1, b.child1), (a.child2, b.child2)):
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return True


def outcome_leaf(s: Profile, at: NodeId | None = None) -> NodeId:
    """Follow the choices from ``at`` (default: root) to a leaf id."""
    i = s.root if at is None else at
    visited = set()
    while True:
        n = s.nodes[i]
        if isinstance(n, Leaf):
            return i
        if i in visited:
            raise Divergent(f"chosen path from node {at if at is not None else s.root} cycles")
        visited.add(i)
        i = n.chosen


def utility_assignment(s: Profile) -> UtilityAssignment:
    return s.nodes[outcome_leaf(s)].utility
