"""The named games and profiles, and truncation of combs to finite games."""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Union

from .comb import Affine, Cap, CombChoiceWord, CombSpec, Geo
from .core import (
    Leaf,
    Profile,
    ProfileBuilder,
    UtilityLike,
    build_internal,
    build_leaf,
    outcome_leaf,
    to_utility,
)

FAMILY_NAMES = ("centipede158", "alpha", "fig1", "infpede", "omegapede", "zero_one", "dollar_auction")


class BadFamily(ValueError):
    pass


@dataclass(frozen=True)
class FamilyBundle:
    """A game and its named profiles.

    ``game`` is a :class:`CombSpec` for comb families (profiles are choice
    words) or a choice-erased :class:`Profile` for graph families.  It is
    ``None`` when the named profiles belong to different games.
    """

    name: str
    game: Union[CombSpec, Profile, None]
    profiles: Mapping[str, Union[CombChoiceWord, Profile]] = field(default_factory=dict)
    params: Mapping[str, object] = field(default_factory=dict)

    @property
    def is_comb(self) -> bool:
        return isinstance(self.game, CombSpec)

    def profile(self, name: str):
        try:
            return self.profiles[name]
        except KeyError:
            raise BadFamily(f"{self.name} has no profile {name!r}; "
                            f"known: {', '.join(sorted(self.profiles))}") from None


def _leaf(a: UtilityLike, b: UtilityLike) -> Profile:
    return build_leaf({"A": a, "B": b})


def _centipede158() -> FamilyBundle:
    def make(ca: int, cb: int) -> Profile:
        return build_internal("A", ca, _leaf(1, 2), build_internal("B", cb, _leaf(0, 1), _leaf(2, 1)))

    left, right = make(1, 1), make(2, 2)
    return FamilyBundle("centipede158", make(1, 1), {"left": left, "right": right})


def _alpha() -> FamilyBundle:
    s = build_internal("A", 2, _leaf(1, "0.5"), build_internal("B", 1, _leaf(2, 1), _leaf(0, 5)))
    return FamilyBundle("alpha", s, {"s_alpha": s})


def fig1_box2() -> Profile:
    b = ProfileBuilder()
    n0 = b.internal("A", 2)
    n1 = b.internal("B", 2, b.leaf({"A": 0, "B": 1}), n0)
    b.set_children(n0, b.leaf({"A": 1, "B": 0}), n1)
    return b.build(n0)


def fig1_1box2() -> Profile:
    b = ProfileBuilder()
    a2 = b.internal("A", 2)
    b2 = b.internal("B", 2, b.leaf({"A": 1, "B": 0}), a2)
    b.set_children(a2, b.leaf({"A": 0, "B": 1}), b2)
    b1 = b.internal("B", 2, b.leaf({"A": 1, "B": 0}), a2)
    a1 = b.internal("A", 1, b.leaf({"A": 0, "B": 1}), b1)
    return b.build(a1)


def _fig1() -> FamilyBundle:
    return FamilyBundle("fig1", None, {"s_box2": fig1_box2(), "s_1box2": fig1_1box2()})


def infpede_spec() -> CombSpec:
    # Round n: Alice's take pays (2^(2n+2), 2^(2n)), Bob's (2^(2n+1), 2^(2n+3)).
    return CombSpec(("A", "B"), [
        {"A": Geo(1, 2, 2), "B": Geo(1, 2, 0)},
        {"A": Geo(1, 2, 1), "B": Geo(1, 2, 3)},
    ])


def omegapede_spec(omega: int) -> CombSpec:
    cap = 2 ** omega
    return CombSpec(infpede_spec().agents, infpede_spec().take, Cap(omega, {"A": cap, "B": cap}))


def zero_one_spec() -> CombSpec:
    return CombSpec(("A", "B"), [{"A": 0, "B": 1}, {"A": 1, "B": 0}])


def dollar_auction_spec(pot: UtilityLike = 100, step: UtilityLike = 5) -> CombSpec:
    pot, step = to_utility(pot), to_utility(step)
    return CombSpec(("A", "B"), [
        {"A": Affine(0, -step), "B": Affine(pot, -step)},
        {"A": Affine(pot - step, -step), "B": Affine(0, -step)},
    ])


_ALTERNATING = {
    "bothpush": CombChoiceWord.all_push(),
    "bothtake": CombChoiceWord.all_take(),
    "a_push_b_take": CombChoiceWord("", "pt"),
    "a_take_b_push": CombChoiceWord("", "tp"),
}


def _params(name: str, given: Mapping[str, object], allowed: Mapping[str, object]) -> dict:
    extra = set(given) - set(allowed)
    if extra:
        raise BadFamily(f"{name} takes no parameter {sorted(extra)[0]!r}")
    out = dict(allowed)
    out.update(given)
    for k, v in out.items():
        if v is None:
            raise BadFamily(f"{name} needs parameter {k!r}")
    return out


def build_family(name: str, params: Mapping[str, object] | None = None) -> FamilyBundle:
    params = dict(params or {})
    if name == "centipede158":
        _params(name, params, {})
        return _centipede158()
    if name == "alpha":
        _params(name, params, {})
        return _alpha()
    if name == "fig1":
        _params(name, params, {})
        return _fig1()
    if name == "infpede":
        _params(name, params, {})
        return FamilyBundle(name, infpede_spec(), {
            "p0": CombChoiceWord.all_take(),
            "d0": CombChoiceWord.all_push(),
        })
    if name == "omegapede":
        p = _params(name, params, {"omega": None})
        try:
            omega = int(p["omega"])
        except (TypeError, ValueError):
            raise BadFamily(f"omega must be an integer, got {p['omega']!r}") from None
        if omega < 1:
            raise BadFamily("omega must be at least 1")
        return FamilyBundle(name, omegapede_spec(omega), {
            "allpush": CombChoiceWord.all_push(),
            "p0": CombChoiceWord.all_take(),
            "push_until_omega": CombChoiceWord("p" * omega, "t"),
        }, {"omega": omega})
    if name == "zero_one":
        _params(name, params, {})
        return FamilyBundle(name, zero_one_spec(), dict(_ALTERNATING))
    if name == "dollar_auction":
        p = _params(name, params, {"pot": 100, "step": 5})
        try:
            spec = dollar_auction_spec(p["pot"], p["step"])
        except (TypeError, ValueError) as exc:
            raise BadFamily(f"bad dollar auction parameter: {exc}") from None
        return FamilyBundle(name, spec, dict(_ALTERNATING),
                            {"pot": to_utility(p["pot"]), "step": to_utility(p["step"])})
    raise BadFamily(f"unknown family {name!r}; known: {', '.join(FAMILY_NAMES)}")


class EndingOption(enum.Enum):
    """How a comb cut after a fixed number of stages ends.

    TAKE_ALL: the next owner's take-leaf is the final position.
    CHOICE_2B: the next owner chooses between that take-leaf and an even split.
    NOTHING: everybody gets 0.
    """

    TAKE_ALL = "takeall"
    CHOICE_2B = "choice2b"
    NOTHING = "nothing"


def unfold(spec: CombSpec, depth: int, ending: EndingOption,
           share: UtilityLike | None = None) -> Profile:
    """Finite game of the first ``depth`` stages of ``spec`` (choices all 1).

    With CHOICE_2B each agent's share defaults to half the largest
    component of the stage-``depth`` take-leaf, i.e. ``2^(depth+1)`` for
    the centipede piles ``2^(depth+2)`` and ``2^depth``.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    b = ProfileBuilder()
    last = spec.value(depth)
    if ending is EndingOption.TAKE_ALL:
        tail = b.leaf(last)
    elif ending is EndingOption.NOTHING:
        tail = b.leaf({a: 0 for a in last})
    elif ending is EndingOption.CHOICE_2B:
        each = to_utility(share) if share is not None else max(last.values()) / 2
        tail = b.internal(spec.owner(depth), 1, b.leaf(last), b.leaf({a: each for a in last}))
    else:
        raise ValueError(f"unknown ending {ending!r}")
    nxt = tail
    for j in range(depth - 1, -1, -1):
        nxt = b.internal(spec.owner(j), 1, b.leaf(spec.value(j)), nxt)
    return b.build(nxt)


def spine_choices(s: Profile, depth: int) -> list[int]:
    """Choices along the spine of an unfolded comb (stage 0 first)."""
    out = []
    i = s.root
    for _ in range(depth):
        n = s.nodes[i]
        out.append(n.choice)
        i = n.child2
    return out



def truncate(s: Profile, depth: int, ending: EndingOption) -> Profile:
    """Unroll ``s`` into a tree and cut it ``depth`` moves below the root.

    A decision node at the cut becomes a leaf: its outcome with TAKE_ALL
    (it must be convergent), zeros with NOTHING.  The tree can have up to
    ``2**depth`` nodes.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if ending is EndingOption.CHOICE_2B:
        raise ValueError("choice2b is only defined for comb families")
    agents = sorted(s.agents)
    b = ProfileBuilder()

    def go(i: int, d: int) -> int:
        n = s.nodes[i]
        if isinstance(n, Leaf):
            return b.leaf(n.utility)
        if d == depth:
            if ending is EndingOption.NOTHING:
                return b.leaf({a: 0 for a in agents})
            return b.leaf(s.nodes[outcome_leaf(s, i)].utility)
        return b.internal(n.owner, n.choice, go(n.child1, d + 1), go(n.child2, d + 1))

    return b.build(go(s.root, 0))
