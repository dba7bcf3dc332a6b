"""Random profile generators shared by the tests and the acceptance run."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from stratprof.core import Internal, Leaf, Profile, UtilityAssignment

AGENTS = ("A", "B")
VALUES = tuple(Fraction(n, d) for n in range(-2, 5) for d in (1, 2, 3))


def random_profile(rng: random.Random, max_internal: int = 6, max_leaves: int = 4,
                   acyclic: bool = False, agents=AGENTS) -> Profile:
    """Internal nodes come first and the root is node 0.  With ``acyclic``
    every edge points to a higher index, so the graph is a DAG."""
    k = rng.randint(0, max_internal)
    m = rng.randint(1, max_leaves)
    nodes: list = []
    for i in range(k):
        lo = i + 1 if acyclic else 0
        c1, c2 = rng.randint(lo, k + m - 1), rng.randint(lo, k + m - 1)
        nodes.append(Internal(rng.choice(agents), rng.choice((1, 2)), c1, c2))
    for _ in range(m):
        nodes.append(Leaf(UtilityAssignment({a: rng.choice(VALUES) for a in agents})))
    return Profile(tuple(nodes), 0)


@st.composite
def profiles(draw, max_internal: int = 6, max_leaves: int = 4, acyclic: bool | None = None):
    k = draw(st.integers(0, max_internal))
    m = draw(st.integers(1, max_leaves))
    dag = draw(st.booleans()) if acyclic is None else acyclic
    nodes: list = []
    for i in range(k):
        lo = i + 1 if dag else 0
        c1 = draw(st.integers(lo, k + m - 1))
        c2 = draw(st.integers(lo, k + m - 1))
        nodes.append(Internal(draw(st.sampled_from(AGENTS)), draw(st.sampled_from((1, 2))), c1, c2))
    for _ in range(m):
        nodes.append(Leaf(UtilityAssignment({a: draw(st.sampled_from(VALUES)) for a in AGENTS})))
    return Profile(tuple(nodes), 0)
