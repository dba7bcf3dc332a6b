"""Print the main facts about the named games, with the certificates."""

from __future__ import annotations

from stratprof import comb, engine, finite
from stratprof.families import EndingOption, build_family, spine_choices, unfold


def show(label: str, value) -> None:
    print(f"  {label:48s} {value}")


def main() -> None:
    fig1 = build_family("fig1")
    print("two-agent loops")
    show("s_box2 divergent", engine.divergent(fig1.profile("s_box2")))
    show("s_box2 SPE", engine.spe(fig1.profile("s_box2")))
    show("s_1box2 convergent", engine.convergent(fig1.profile("s_1box2")))
    show("s_1box2 always convergent", engine.always_convergent(fig1.profile("s_1box2")))

    print("infpede")
    inf = build_family("infpede")
    cert = comb.comb_spe(inf.game, inf.profile("p0"))
    for r in cert.records:
        show(f"stages {r.stage} ({r.owner} {r.move}): {r.chosen} vs {r.other}", r.verdict)
    show("all-take SPE", cert.valid)
    show("all-push Rat_inf", comb.comb_rat_inf(inf.game, inf.profile("d0")))
    for k in (3, 6, 9):
        s = unfold(inf.game, k, EndingOption.CHOICE_2B)
        bis = [spine_choices(p, k + 1) for p in finite.enumerate_profiles(s) if finite.bi(p)]
        show(f"BI profiles of the {k}-stage truncation", bis)

    print("omegapede")
    for omega in (1, 3, 6):
        b = build_family("omegapede", {"omega": omega})
        w = b.profile("allpush")
        show(f"omega={omega}: all-push divergent / Rat_inf",
             f"{comb.comb_divergent(b.game, w)} / {comb.comb_rat_inf(b.game, w)}")
        show(f"omega={omega}: push until omega is SPE", comb.comb_spe(b.game, b.profile("push_until_omega")).valid)

    print("escalation")
    for name in ("zero_one", "dollar_auction"):
        b = build_family(name)
        w = b.profile("bothpush")
        show(f"{name}: both push, Rat_inf", comb.comb_rat_inf(b.game, w))
        for p in ("a_push_b_take", "a_take_b_push", "bothtake"):
            show(f"{name}: {p} SPE", comb.comb_spe(b.game, b.profile(p)).valid)


if __name__ == "__main__":
    main()
