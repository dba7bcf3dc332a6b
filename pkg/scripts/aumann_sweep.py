"""Exhaustive comparison of finite rationality and backward induction.

Sweeps every tree-shaped game with at most --max-internal decision nodes
and leaf utilities from --values, and counts the profiles where the two
predicates disagree under three readings of rationality:

  literal       witnesses checked along the profile's own chosen path
  witness-child only the root needs a witness
  everywhere    every decision node needs a witness, reached or not
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field

from stratprof import finite
from stratprof.textio import serialize_profile

READINGS = ("literal", "witness-child", "everywhere")


@dataclass
class Tally:
    profiles: int = 0
    bad: dict = field(default_factory=lambda: {r: 0 for r in READINGS})
    first: dict = field(default_factory=dict)


def sweep(max_internal: int, values: tuple[int, ...]) -> tuple[int, Tally]:
    t = Tally()
    templates = 0
    for g in finite.all_templates(max_internal, values):
        templates += 1
        table = finite.bi_witness_choices(g)
        ids = g.internal_ids
        for p in finite.enumerate_profiles(g):
            t.profiles += 1
            bi = finite.bi(p)
            got = {
                "literal": finite.rat_f(p),
                "witness-child": finite.rat_f(p, witness_child=True),
                "everywhere": all(p.nodes[i].choice in table[i] for i in ids),
            }
            for r, v in got.items():
                if v != bi:
                    t.bad[r] += 1
                    t.first.setdefault(r, p)
    return templates, t


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-internal", type=int, default=2)
    ap.add_argument("--values", default="0,1,2", help="comma-separated leaf utilities")
    ap.add_argument("--show", action="store_true", help="print the first counterexample per reading")
    args = ap.parse_args()
    values = tuple(int(v) for v in args.values.split(","))
    t0 = time.perf_counter()
    templates, t = sweep(args.max_internal, values)
    print(f"{templates} templates, {t.profiles} profiles, {time.perf_counter() - t0:.1f}s")
    for r in READINGS:
        print(f"  {r:14s} {t.bad[r]:8d} disagreements")
        if args.show and r in t.first:
            print("    " + serialize_profile(t.first[r]).replace("\n", "\n    ").rstrip())


if __name__ == "__main__":
    main()
