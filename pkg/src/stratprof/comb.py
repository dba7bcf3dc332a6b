"""Exact analysis of infinite comb games.

A comb is an infinite spine of decision stages ``0, 1, 2, ...``.  At stage
``j`` the owner ``agents[j % period]`` either *takes* (the game ends in a
leaf whose utilities are given by stage expressions) or *pushes* to stage
``j + 1``.  Stage expressions are functions of the round ``j // period``;
they are compared for all rounds at once, symbolically, so verdicts cover
the whole infinite spine.

Choice words are eventually periodic words over ``t`` (take) and ``p``
(push).  All reasoning below works on *stage families* ``base + step*n``
with ``step`` a multiple of the period, where every stage expression is
again a single expression in ``n``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Literal, Union

from .core import (
    Agent,
    Profile,
    ProfileBuilder,
    UtilityAssignment,
    UtilityLike,
    to_utility,
)
from .engine import HOLDS, Verdict, unknown_at

TAKE, PUSH = "t", "p"
DEFAULT_WITNESS_BOUND = 4


class NotRational(ValueError):
    """The comb has infinitely many distinct subgames."""


# -- stage expressions -------------------------------------------------------

@dataclass(frozen=True)
class _Series:
    """``sum(c_a * 2**(a*n)) + lin*n + const`` with distinct ``a > 0``."""

    exps: tuple[tuple[int, Fraction], ...] = ()
    lin: Fraction = Fraction(0)
    const: Fraction = Fraction(0)

    def __sub__(self, other: _Series) -> _Series:
        exps = dict(self.exps)
        for a, c in other.exps:
            exps[a] = exps.get(a, 0) - c
        return _Series(
            tuple(sorted((a, c) for a, c in exps.items() if c)),
            self.lin - other.lin,
            self.const - other.const,
        )

    def at(self, n: int) -> Fraction:
        return sum((c * 2 ** (a * n) for a, c in self.exps), Fraction(0)) + self.lin * n + self.const

    @property
    def is_zero(self) -> bool:
        return not self.exps and not self.lin and not self.const

    def tail(self) -> tuple[int, int] | None:
        """``(sign, start)``: for every ``n >= start`` the value has sign
        ``sign`` (never zero).  ``None`` for the zero series."""
        if self.exps:
            top, c = self.exps[-1]
            n = 1
            # Beyond the first n where the top term beats the rest, it keeps
            # winning: the top grows by 2**top per step, the rest by less.
            while abs(c) * 2 ** (top * n) <= (
                sum(abs(x) * 2 ** (a * n) for a, x in self.exps[:-1])
                + abs(self.lin) * n + abs(self.const)
            ):
                n += 1
            return (1 if c > 0 else -1), n
        if self.lin:
            return (1 if self.lin > 0 else -1), int(abs(self.const) // abs(self.lin)) + 1
        if self.const:
            return (1 if self.const > 0 else -1), 0
        return None


class StageExpr:
    """A rational-valued function of the round index ``n >= 0``."""

    def at(self, n: int) -> Fraction:
        raise NotImplementedError

    def shift(self, start: int, stride: int) -> StageExpr:
        """The expression ``n -> self.at(start + stride*n)``."""
        raise NotImplementedError

    def _series(self) -> _Series:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(StageExpr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", to_utility(self.value))

    def at(self, n: int) -> Fraction:
        return self.value

    def shift(self, start: int, stride: int) -> Const:
        return self

    def _series(self) -> _Series:
        return _Series(const=self.value)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Affine(StageExpr):
    """``q0 + q1*n``."""

    q0: Fraction
    q1: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q0", to_utility(self.q0))
        object.__setattr__(self, "q1", to_utility(self.q1))

    def at(self, n: int) -> Fraction:
        return self.q0 + self.q1 * n

    def shift(self, start: int, stride: int) -> Affine:
        return Affine(self.q0 + self.q1 * start, self.q1 * stride)

    def _series(self) -> _Series:
        return _Series(lin=self.q1, const=self.q0)

    def __str__(self) -> str:
        return f"{self.q0} + {self.q1}n"


@dataclass(frozen=True)
class Geo(StageExpr):
    """``q * 2**(a*n + b) + c`` with ``a`` a nonnegative integer."""

    q: Fraction
    a: int
    b: int
    c: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.a, int) or self.a < 0:
            raise ValueError(f"Geo exponent rate must be a nonnegative int, got {self.a!r}")
        if not isinstance(self.b, int):
            raise ValueError(f"Geo exponent offset must be an int, got {self.b!r}")
        object.__setattr__(self, "q", to_utility(self.q))
        object.__setattr__(self, "c", to_utility(self.c))

    def at(self, n: int) -> Fraction:
        return self.q * Fraction(2) ** (self.a * n + self.b) + self.c

    def shift(self, start: int, stride: int) -> Geo:
        return Geo(self.q, self.a * stride, self.a * start + self.b, self.c)

    def _series(self) -> _Series:
        scale = self.q * Fraction(2) ** self.b
        if self.a == 0 or not scale:
            return _Series(const=scale + self.c)
        return _Series(exps=((self.a, scale),), const=self.c)

    def __str__(self) -> str:
        s = f"{self.q}*2^({self.a}n+{self.b})"
        return s if not self.c else f"{s} + {self.c}"


ExprLike = Union[StageExpr, int, Fraction, str]


def as_expr(e: ExprLike) -> StageExpr:
    return e if isinstance(e, StageExpr) else Const(e)


# -- all-n comparison --------------------------------------------------------

@dataclass(frozen=True)
class ForAllVerdict:
    kind: Literal["ge", "gt", "eq", "fails"]
    stage: int | None = None  # least violating n when kind == "fails"

    @property
    def ok(self) -> bool:
        return self.kind != "fails"

    def __str__(self) -> str:
        return {"ge": "AlwaysGE", "gt": "AlwaysGT", "eq": "AlwaysEQ"}.get(
            self.kind, f"FailsAt({self.stage})")


ALWAYS_GE = ForAllVerdict("ge")
ALWAYS_GT = ForAllVerdict("gt")
ALWAYS_EQ = ForAllVerdict("eq")


def fails_at(n: int) -> ForAllVerdict:
    return ForAllVerdict("fails", n)


def stage_compare(lhs: StageExpr, rhs: StageExpr) -> ForAllVerdict:
    """Decide ``lhs(n) >= rhs(n)`` for every ``n >= 0``.

    Below the point where the dominant term of the difference takes over,
    every round is evaluated exactly; from there on the sign is that of
    the dominant term.
    """
    diff = lhs._series() - rhs._series()
    tail = diff.tail()
    if tail is None:
        return ALWAYS_EQ
    sign, start = tail
    saw_zero = False
    for n in range(start):
        v = diff.at(n)
        if v < 0:
            return fails_at(n)
        saw_zero = saw_zero or v == 0
    if sign < 0:
        return fails_at(start)
    return ALWAYS_GE if saw_zero else ALWAYS_GT


def strictly_greater_from(lhs: StageExpr, rhs: StageExpr) -> int | None:
    """Least ``n0`` with ``lhs(n) > rhs(n)`` for all ``n >= n0``, or ``None``
    if no such point exists."""
    diff = lhs._series() - rhs._series()
    tail = diff.tail()
    if tail is None or tail[0] < 0:
        return None
    start = tail[1]
    for n in range(start - 1, -1, -1):
        if diff.at(n) <= 0:
            return n + 1
    return 0


# -- combs and words -----------------------------------------------------------

@dataclass(frozen=True)
class Cap:
    """From ``stage`` on every take-leaf pays ``utility``; before it, each
    component is clipped to at most the corresponding cap value."""

    stage: int
    utility: UtilityAssignment

    def __post_init__(self):
        if not isinstance(self.utility, UtilityAssignment):
            object.__setattr__(self, "utility", UtilityAssignment(self.utility))
        if self.stage < 0:
            raise ValueError("cap stage must be nonnegative")


@dataclass(frozen=True)
class CombSpec:
    agents: tuple[Agent, ...]
    take: tuple[tuple[tuple[Agent, StageExpr], ...], ...]
    cap: Cap | None = None

    def __init__(self, agents, take, cap: Cap | None = None):
        agents = tuple(agents)
        if not agents:
            raise ValueError("a comb needs at least one owner")
        if len(take) != len(agents):
            raise ValueError("one take-utility map per owner position is required")
        rows = []
        keys = None
        for row in take:
            items = row.items() if isinstance(row, Mapping) else row
            norm = tuple(sorted((a, as_expr(e)) for a, e in items))
            names = {a for a, _ in norm}
            if keys is None:
                keys = names
            elif names != keys:
                raise ValueError("every take-utility map must name the same agents")
            rows.append(norm)
        missing = set(agents) - keys
        if missing:
            raise ValueError(f"owners without utilities: {sorted(missing)}")
        if cap is not None and set(cap.utility) != keys:
            raise ValueError("cap utility must name the same agents as the stages")
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "take", tuple(rows))
        object.__setattr__(self, "cap", cap)

    @property
    def period(self) -> int:
        return len(self.agents)

    @property
    def head(self) -> int:
        """Stages before this index are evaluated concretely."""
        return self.cap.stage if self.cap else 0

    @property
    def rational(self) -> bool:
        return self.cap is not None or all(
            isinstance(e, Const) for row in self.take for _, e in row)

    def owner(self, j: int) -> Agent:
        return self.agents[j % self.period]

    def value(self, j: int) -> UtilityAssignment:
        """Utilities of the take-leaf at stage ``j``."""
        return _stage_value(self, j)

    def family(self, base: int, step: int) -> dict[Agent, StageExpr]:
        """Take-leaf utilities along the stages ``base + step*n``."""
        if step == 0:
            return {a: Const(v) for a, v in self.value(base).items()}
        if step % self.period or base < self.head:
            raise ValueError(f"stage family {base}+{step}n is not uniform")
        if self.cap is not None:
            return {a: Const(v) for a, v in self.cap.utility.items()}
        row = self.take[base % self.period]
        return {a: e.shift(base // self.period, step // self.period) for a, e in row}


@lru_cache(maxsize=65536)
def _stage_value(spec: CombSpec, j: int) -> UtilityAssignment:
    cap = spec.cap
    if cap is not None and j >= cap.stage:
        return cap.utility
    row = spec.take[j % spec.period]
    n = j // spec.period
    vals = {a: e.at(n) for a, e in row}
    if cap is not None:
        vals = {a: min(v, cap.utility[a]) for a, v in vals.items()}
    return UtilityAssignment(vals)


@dataclass(frozen=True)
class CombChoiceWord:
    """Eventually periodic word ``prefix (period)^omega`` over ``t``/``p``."""

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        if set(self.prefix + self.period) - {TAKE, PUSH}:
            raise ValueError("choice words use only 't' (take) and 'p' (push)")

    @classmethod
    def parse(cls, text: str) -> CombChoiceWord:
        """Read ``"pp(t)"``-style notation: prefix, then the period in parentheses."""
        text = text.strip()
        if not (text.endswith(")") and "(" in text):
            raise ValueError(f"expected PREFIX(PERIOD), got {text!r}")
        prefix, period = text[:-1].split("(", 1)
        return cls(prefix, period)

    @classmethod
    def all_take(cls) -> CombChoiceWord:
        return cls("", TAKE)

    @classmethod
    def all_push(cls) -> CombChoiceWord:
        return cls("", PUSH)

    def at(self, j: int) -> str:
        if j < len(self.prefix):
            return self.prefix[j]
        return self.period[(j - len(self.prefix)) % len(self.period)]

    @property
    def first_take(self) -> int | None:
        i = (self.prefix + self.period).find(TAKE)
        return None if i < 0 else i

    def __str__(self) -> str:
        return f"{self.prefix}({self.period})"


# -- SPE certificates ------------------------------------------------------------

@dataclass(frozen=True)
class SpeRecord:
    """One PE obligation: at the stages ``stage`` the owner must weakly
    prefer ``chosen`` (utility on the chosen side) to ``other``."""

    stage: str
    owner: Agent
    move: str
    chosen: StageExpr
    other: StageExpr
    verdict: ForAllVerdict


@dataclass(frozen=True)
class SpeCertificate:
    records: tuple[SpeRecord, ...]
    always_convergent: bool

    @property
    def valid(self) -> bool:
        return self.always_convergent and all(r.verdict.ok for r in self.records)

    def __bool__(self) -> bool:
        return self.valid

    def failures(self) -> list[SpeRecord]:
        return [r for r in self.records if not r.verdict.ok]


def _label(base: int, step: int) -> str:
    return str(base) if step == 0 else f"{base}+{step}n"


def _check_word(spec: CombSpec, x: CombChoiceWord, base: int, step: int) -> SpeCertificate:
    """SPE of the profile that plays ``x`` from stage ``base + step*n`` on,
    for every ``n >= 0`` at once (``step == 0``: just the stage ``base``).

    Requires ``step`` to be a multiple of the unrolled period of ``x``.
    """
    if TAKE not in x.period:
        return SpeCertificate((), False)
    P = spec.period
    Lx = lcm(len(x.period), P)
    if step and (step % Lx or base < spec.head):
        raise ValueError(f"stage family {base}+{step}n does not align with {x}")
    prefix = x.prefix
    period = x.period * (Lx // len(x.period))
    # Periodic stages must lie past the concrete head.
    while base + len(prefix) < spec.head:
        prefix += period[0]
        period = period[1:] + period[0]
    px = len(prefix)
    first_take = period.index(TAKE)

    def next_take_family(i: int) -> tuple[int, int]:
        # Stage family of the first take strictly after relative stage i.
        if i + 1 < px:
            rest = prefix[i + 1:].find(TAKE)
            if rest >= 0:
                return base + i + 1 + rest, step
        if i + 1 <= px:
            return base + px + first_take, step
        rho = i - px
        later = period[rho + 1:].find(TAKE)
        if later >= 0:
            return base + px + rho + 1 + later, Lx
        return base + px + Lx + first_take, Lx

    stages = [(i, base + i, step, prefix[i]) for i in range(px)]
    stages += [(px + r, base + px + r, Lx, period[r]) for r in range(Lx)]
    records = []
    for i, b, st, move in stages:
        owner = spec.owner(b)
        here = spec.family(b, st)[owner]
        there = spec.family(*next_take_family(i))[owner]
        chosen, other = (here, there) if move == TAKE else (there, here)
        records.append(SpeRecord(_label(b, st), owner, move, chosen, other,
                                 stage_compare(chosen, other)))
    return SpeCertificate(tuple(records), True)


def comb_spe(spec: CombSpec, w: CombChoiceWord) -> SpeCertificate:
    """Certificate for SPE of the profile playing ``w`` from stage 0.

    Valid exactly when ``w`` takes infinitely often (always-convergence)
    and every stage class satisfies its PE inequality for all rounds.
    """
    return _check_word(spec, w, 0, 0)


def comb_pe(spec: CombSpec, w: CombChoiceWord) -> bool:
    """PE at stage 0 only."""
    if TAKE not in w.period:
        return False
    later = next(j for j in itertools.count(1) if w.at(j) == TAKE)
    o = spec.owner(0)
    here, there = spec.value(0)[o], spec.value(later)[o]
    return here >= there if w.at(0) == TAKE else there >= here


def comb_divergent(spec: CombSpec, w: CombChoiceWord) -> bool:
    return w.first_take is None


def comb_convergent(spec: CombSpec, w: CombChoiceWord) -> bool:
    return w.first_take is not None


def comb_always_convergent(spec: CombSpec, w: CombChoiceWord) -> bool:
    return TAKE in w.period


def to_profile(spec: CombSpec, w: CombChoiceWord) -> Profile:
    """Export a rational comb with its word as a finite cyclic graph.

    Take is choice 1 (down to the leaf), push is choice 2 (along the spine).
    """
    if not spec.rational:
        raise NotRational("only capped or constant combs have a finite graph")
    start = max(spec.head, len(w.prefix))
    loop = lcm(spec.period, len(w.period))
    b = ProfileBuilder()
    spine = [b.internal(spec.owner(j), 1 if w.at(j) == TAKE else 2)
             for j in range(start + loop)]
    for j, node in enumerate(spine):
        nxt = spine[j + 1] if j + 1 < len(spine) else spine[start]
        b.set_children(node, b.leaf(spec.value(j)), nxt)
    return b.build(spine[0])


# -- rationality ---------------------------------------------------------------

def drop_start(spec: CombSpec) -> int | None:
    """Least stage ``m`` from which every owner strictly prefers taking now
    to the next stage's take-leaf, or ``None``.

    From such an ``m`` on, the only SPE takes at every stage: in any SPE,
    the last push before a take would violate PE.
    """
    failing = -1
    h, P = spec.head, spec.period
    for j in range(h):
        o = spec.owner(j)
        if not spec.value(j)[o] > spec.value(j + 1)[o]:
            failing = j
    for c in range(P):
        b = h + c
        o = spec.owner(b)
        n0 = strictly_greater_from(spec.family(b, P)[o], spec.family(b + 1, P)[o])
        if n0 is None:
            return None
        if n0 > 0:
            failing = max(failing, b + P * (n0 - 1))
    return failing + 1


def _relative_words(bound: int, first: str | None = None, prefix: bool = True) -> Iterator[CombChoiceWord]:
    """Words with prefix and period of length at most ``bound``, shortest first."""
    seen = set()
    for total in range(1, 2 * bound + 1):
        for plen in range(0, min(bound, total - 1) + 1 if prefix else 1):
            qlen = total - plen
            if not 1 <= qlen <= bound:
                continue
            for chars in itertools.product((PUSH, TAKE), repeat=total):
                word = CombChoiceWord("".join(chars[:plen]), "".join(chars[plen:]))
                if first is not None and word.at(0) != first:
                    continue
                if TAKE not in word.period:
                    continue
                key = tuple(word.at(j) for j in range(plen + 2 * lcm(*range(1, bound + 1))))
                if key in seen:
                    continue
                seen.add(key)
                yield word


@dataclass
class _RatSearch:
    spec: CombSpec
    bound: int
    _tails: dict[int, frozenset[int]] = field(default_factory=dict)

    def tail_outcomes(self, start: int) -> frozenset[int]:
        """Stages where some SPE with a purely periodic word (period at most
        ``bound``) starting at ``start`` first takes."""
        if start not in self._tails:
            found = set()
            for x in _relative_words(self.bound, prefix=False):
                if _check_word(self.spec, x, start, 0).valid:
                    found.add(start + x.period.index(TAKE))
            self._tails[start] = frozenset(found)
        return self._tails[start]

    def concrete(self, k: int, move: str, stop: int, outcomes: frozenset[int]) -> bool:
        """Whether some SPE of the subgame at stage ``k`` plays ``move`` there,
        over words that are arbitrary on ``(k, stop)`` and continue with an
        SPE whose first take is one of ``outcomes``.

        Backward pass over the set of first-take stages achievable by an SPE
        of each suffix.
        """
        spec = self.spec
        reach = set(outcomes)
        for j in range(stop - 1, k, -1):
            o = spec.owner(j)
            here = spec.value(j)[o]
            nxt = set()
            if any(here >= spec.value(n)[o] for n in reach):
                nxt.add(j)
            nxt.update(n for n in reach if spec.value(n)[o] >= here)
            reach = nxt
        o = spec.owner(k)
        here = spec.value(k)[o]
        if move == TAKE:
            return any(here >= spec.value(n)[o] for n in reach)
        return any(spec.value(n)[o] >= here for n in reach)

    def symbolic(self, base: int, step: int, move: str) -> CombChoiceWord | None:
        for x in _relative_words(self.bound, first=move):
            if _check_word(self.spec, x, base, step).valid:
                return x
        return None


def comb_rat_inf(spec: CombSpec, w: CombChoiceWord, bound: int = DEFAULT_WITNESS_BOUND) -> Verdict:
    """Rat_inf of the profile playing ``w``.

    Every stage on the chosen path needs a same-game SPE of its subgame
    with the same move there.  Witnesses are searched among words that are
    arbitrary up to ``bound`` stages past the concrete part of the comb and
    periodic afterwards (period at most ``bound``).  When the comb has a
    strict one-step drop from some stage on, SPEs past that stage are
    unique and the answer is exact; otherwise an unsuccessful search is
    reported as unknown.
    """
    m = drop_start(spec)
    search = _RatSearch(spec, bound)
    horizon = max(spec.head, len(w.prefix))
    ft = w.first_take
    if ft is not None:
        concrete_stages = range(ft + 1)
        classes: list[int] = []
        step = 0
    else:
        split = max(horizon, m or 0)
        concrete_stages = range(split)
        step = lcm(spec.period, len(w.period), *(lcm(spec.period, q) for q in range(1, bound + 1)))
        classes = [split + r for r in range(step)]

    unknown = None
    for k in concrete_stages:
        move = w.at(k)
        if m is not None and k >= m:
            if move == PUSH:
                return Verdict("fails", reason=f"stage {k}: the only SPE from here takes")
            continue
        if m is not None:
            stop = max(m, k + 1)
            if not search.concrete(k, move, stop, frozenset({stop})):
                return Verdict("fails", reason=f"stage {k}: no SPE of the subgame plays {move}")
            continue
        stop = max(horizon, k + 1) + bound
        if not search.concrete(k, move, stop, search.tail_outcomes(stop)):
            if unknown is None:
                unknown = unknown_at(bound, f"stage {k}: no witness within the bound")
    for base in classes:
        move = w.at(base)
        if m is not None:
            return Verdict("fails", reason=f"stages {_label(base, step)}: the only SPE from here takes")
        if search.symbolic(base, step, move) is None:
            if unknown is None:
                unknown = unknown_at(bound, f"stages {_label(base, step)}: no witness within the bound")
    return HOLDS if unknown is None else unknown
