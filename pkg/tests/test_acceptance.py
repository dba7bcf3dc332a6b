"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line; conftest prints them at the
end of the session.  ``python tests/test_acceptance.py`` runs them
without pytest.
"""

from __future__ import annotations

import random
import string
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from stratprof import comb, engine, finite  # noqa: E402
from stratprof.comb import CombChoiceWord  # noqa: E402
from stratprof.core import Divergent, same_profile, utility_assignment  # noqa: E402
from stratprof.families import EndingOption, build_family, spine_choices, unfold  # noqa: E402
from stratprof.textio import ParseError, parse_profile, serialize_profile  # noqa: E402
from strategies import random_profile  # noqa: E402

RESULTS: list[str] = []
SEED = 20240613


def report(n: int, title: str, ok: bool, detail: str, elapsed: float, limit: float) -> None:
    ok = ok and elapsed < limit
    line = f"{'PASS' if ok else 'FAIL'} [{n}] {title}: {detail} ({elapsed:.2f}s, limit {limit:g}s)"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_1_aumann_finite():
    t0 = time.perf_counter()
    templates = profiles = count = 0
    first = None
    for g in finite.all_templates(3):
        templates += 1
        profiles += 2 ** len(g.internal_ids)
        found = finite.aumann_counterexamples(g)
        count += len(found)
        if found and first is None:
            first = serialize_profile(found[0]).replace("\n", " ")
    elapsed = time.perf_counter() - t0
    detail = f"{templates} templates, {profiles} profiles, {count} counterexamples"
    if first:
        detail += f"; first: {first}"
    report(1, "rat_f <=> bi on trees with <= 3 decision nodes", count == 0, detail, elapsed, 120)


def test_2_fig1():
    t0 = time.perf_counter()
    fig1 = build_family("fig1")
    box2, one = fig1.profile("s_box2"), fig1.profile("s_1box2")
    got = (engine.divergent(box2), engine.convergent(box2), engine.spe(box2),
           engine.convergent(one), engine.always_convergent(one))
    want = (True, False, False, True, False)
    report(2, "s_box2 div, not conv, not SPE; s_1box2 conv, not always-conv", got == want,
           f"got {got}", time.perf_counter() - t0, 1)


def test_3_small_figures():
    t0 = time.perf_counter()
    alpha = build_family("alpha").profile("s_alpha")
    c = build_family("centipede158")
    u = utility_assignment(alpha)
    ok = (u == {"A": 2, "B": 1}
          and all(finite.bi(c.profile(p)) and engine.spe(c.profile(p)) for p in ("left", "right"))
          and not finite.bi(alpha))
    report(3, "u(s_alpha) = (2,1); both centipede158 profiles BI and SPE; s_alpha not BI", ok,
           f"u(s_alpha) = {u}", time.perf_counter() - t0, 1)


def test_4_infpede():
    t0 = time.perf_counter()
    inf = build_family("infpede")
    cert = comb.comb_spe(inf.game, inf.profile("p0"))
    problems = []
    for k in range(3, 13):
        s = unfold(inf.game, k, EndingOption.CHOICE_2B)
        bis = [spine_choices(p, k) for p in finite.enumerate_profiles(s) if finite.bi(p)]
        if not bis or any(ch[: k - 1] != [1] * (k - 1) for ch in bis):
            problems.append(k)
    rat = comb.comb_rat_inf(inf.game, inf.profile("d0"))
    ok = cert.valid and not problems and rat.status == "fails"
    records = ", ".join(f"{r.stage}:{r.verdict}" for r in cert.records)
    report(4, "all-take SPE for all n; unique BI in truncations; all-push not Rat_inf", ok,
           f"certificate [{records}], bad depths {problems}, rat_inf(all-push) = {rat}",
           time.perf_counter() - t0, 30)


def test_5_omegapede():
    t0 = time.perf_counter()
    rows = []
    ok = True
    for omega in (1, 3, 6):
        b = build_family("omegapede", {"omega": omega})
        w = b.profile("allpush")
        div = comb.comb_divergent(b.game, w)
        rat = comb.comb_rat_inf(b.game, w)
        s = comb.to_profile(b.game, w)
        row = (div, rat.status, engine.divergent(s), engine.rat_inf(s))
        ok = ok and row == (True, "holds", True, True)
        rows.append(f"omega={omega}: {row}")
    report(5, "omegapede all-push divergent and Rat_inf, engine agrees", ok,
           "; ".join(rows), time.perf_counter() - t0, 5)


def test_6_escalation():
    t0 = time.perf_counter()
    zo = build_family("zero_one")
    da = build_family("dollar_auction")
    got = (
        comb.comb_spe(zo.game, zo.profile("a_push_b_take")).valid,
        comb.comb_divergent(zo.game, zo.profile("bothpush")),
        str(comb.comb_rat_inf(zo.game, zo.profile("bothpush"))),
        comb.comb_divergent(da.game, da.profile("bothpush")),
        str(comb.comb_rat_inf(da.game, da.profile("bothpush"))),
    )
    ok = got == (True, True, "true", True, "true")
    report(6, "0,1 comb and dollar auction escalate rationally", ok, f"got {got}",
           time.perf_counter() - t0, 5)


def test_7_engine_properties():
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    violations = []
    acyclic = 0
    for k in range(1000):
        s = random_profile(rng, max_internal=8, max_leaves=4, acyclic=k % 2 == 0)
        conv, aconv = engine.convergent_set(s), engine.always_convergent_set(s)
        div = engine.divergent_set(s)
        spe, pe = engine.spe_set(s), engine.pe_set(s)
        try:
            utility_assignment(s)
            has_u = True
        except Divergent:
            has_u = False
        checks = {
            "always-conv => conv": aconv <= conv,
            "div <=> not conv": div == frozenset(s.reachable) - conv,
            "conv <=> outcome": has_u == (s.root in conv),
            "spe => pe everywhere": spe <= pe,
        }
        if s.is_finite:
            acyclic += 1
            checks["spe <=> bi"] = (s.root in spe) == finite.bi(s)
        violations += [f"#{k} {name}" for name, held in checks.items() if not held]
    report(7, "engine properties on 1000 random profiles", not violations,
           f"{acyclic} acyclic, {len(violations)} violations {violations[:3]}",
           time.perf_counter() - t0, 60)


def test_8_textio():
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    lost = 0
    for k in range(1000):
        s = random_profile(rng, max_internal=10, max_leaves=5, acyclic=k % 3 == 0)
        if not same_profile(s, parse_profile(serialize_profile(s))):
            lost += 1
    crashes = []
    alphabet = string.ascii_letters[:6] + string.digits[:4] + ":;,()=-></.# \n\t" + "é$"
    seed_doc = serialize_profile(build_family("fig1").profile("s_1box2"))
    for k in range(5000):
        if k % 2:
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 60)))
        else:
            chars = list(seed_doc)
            for _ in range(rng.randint(1, 5)):
                chars.insert(rng.randrange(len(chars) + 1), rng.choice(alphabet))
                del chars[rng.randrange(len(chars))]
            text = "".join(chars)
        try:
            parse_profile(text)
        except ParseError:
            pass
        except Exception as exc:  # anything else is a crash
            crashes.append(f"{type(exc).__name__}: {text!r}")
    ok = lost == 0 and not crashes
    report(8, "text round-trip on 1000 profiles; fuzzed parse never crashes", ok,
           f"{lost} round-trip failures, {len(crashes)} crashes in 5000 fuzz inputs {crashes[:1]}",
           time.perf_counter() - t0, 60)


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
