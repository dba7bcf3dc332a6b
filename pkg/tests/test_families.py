import pytest

from stratprof import comb, engine, finite
from stratprof.comb import CombChoiceWord
from stratprof.core import same_game, utility_assignment
from stratprof.families import (
    FAMILY_NAMES,
    BadFamily,
    EndingOption,
    build_family,
    spine_choices,
    truncate,
    unfold,
)


def pairs(spec, n):
    return [tuple(spec.value(j)[a] for a in ("A", "B")) for j in range(n)]


def test_dollar_auction_values():
    spec = build_family("dollar_auction").game
    assert pairs(spec, 6) == [(0, 100), (95, 0), (-5, 95), (90, -5), (-10, 90), (85, -10)]


def test_infpede_values():
    spec = build_family("infpede").game
    for n in range(5):
        assert spec.value(2 * n) == {"A": 2 ** (2 * n + 2), "B": 2 ** (2 * n)}
        assert spec.value(2 * n + 1) == {"A": 2 ** (2 * n + 1), "B": 2 ** (2 * n + 3)}


def test_omegapede_cap():
    spec = build_family("omegapede", {"omega": 3}).game
    assert all(spec.value(j) == {"A": 8, "B": 8} for j in range(3, 10))
    assert pairs(spec, 3) == [(4, 1), (2, 8), (8, 4)]


def test_alpha_outcome():
    s = build_family("alpha").profile("s_alpha")
    assert utility_assignment(s) == {"A": 2, "B": 1}


def test_named_predicates():
    fig1 = build_family("fig1")
    assert engine.divergent(fig1.profile("s_box2"))
    s = fig1.profile("s_1box2")
    assert engine.convergent(s) and not engine.always_convergent(s)
    c = build_family("centipede158")
    assert finite.bi(c.profile("left")) and finite.bi(c.profile("right"))
    inf = build_family("infpede")
    assert comb.comb_spe(inf.game, inf.profile("p0")).valid
    assert comb.comb_divergent(inf.game, inf.profile("d0"))
    for name, params in (("omegapede", {"omega": 2}), ("zero_one", {}), ("dollar_auction", {})):
        b = build_family(name, params)
        w = b.profile("allpush" if name == "omegapede" else "bothpush")
        assert comb.comb_divergent(b.game, w)
        assert str(comb.comb_rat_inf(b.game, w)) == "true"


def test_omegapede_push_until_omega_is_spe():
    b = build_family("omegapede", {"omega": 4})
    assert comb.comb_spe(b.game, b.profile("push_until_omega")).valid


def test_bundle_profiles_share_the_game():
    for name in FAMILY_NAMES:
        b = build_family(name, {"omega": 2} if name == "omegapede" else {})
        if b.game is None or b.is_comb:
            continue
        for p in b.profiles.values():
            assert same_game(p, b.game)


def test_errors():
    with pytest.raises(BadFamily):
        build_family("nosuch")
    with pytest.raises(BadFamily):
        build_family("omegapede")
    with pytest.raises(BadFamily):
        build_family("omegapede", {"omega": 0})
    with pytest.raises(BadFamily):
        build_family("infpede", {"x": 1})
    with pytest.raises(BadFamily):
        build_family("infpede").profile("nosuch")


def test_unfold_shape():
    spec = build_family("dollar_auction").game
    for k in range(1, 6):
        s = unfold(spec, k, EndingOption.TAKE_ALL)
        assert len(spine_choices(s, k)) == k
        assert s.is_finite
        assert len(s.internal_ids) == k
        node = s.root
        for j in range(k):
            n = s.nodes[node]
            assert s.nodes[n.child1].utility == spec.value(j)
            node = n.child2
    assert len(unfold(spec, 1, EndingOption.TAKE_ALL).internal_ids) == 1
    assert len(unfold(spec, 3, EndingOption.CHOICE_2B).internal_ids) == 4


def test_unfold_infpede_bi_takes_first():
    spec = build_family("infpede").game
    s = unfold(spec, 2, EndingOption.CHOICE_2B)
    bis = [p for p in finite.enumerate_profiles(s) if finite.bi(p)]
    assert bis and all(spine_choices(p, 1) == [1] for p in bis)


def test_unfold_omegapede_pushes_through_constant_region():
    spec = build_family("omegapede", {"omega": 3}).game
    s = unfold(spec, 6, EndingOption.NOTHING)
    bis = [spine_choices(p, 6) for p in finite.enumerate_profiles(s) if finite.bi(p)]
    assert any(c[3] == 2 and c[4] == 2 for c in bis)


def test_truncate_file_profiles():
    s = build_family("fig1").profile("s_1box2")
    t = truncate(s, 3, EndingOption.NOTHING)
    assert t.is_finite
    assert utility_assignment(t) == utility_assignment(s)
    c = build_family("centipede158").profile("right")
    assert same_game(truncate(c, 5, EndingOption.TAKE_ALL), c)
    with pytest.raises(ValueError):
        truncate(c, 2, EndingOption.CHOICE_2B)
