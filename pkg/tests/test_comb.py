import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stratprof import engine
from stratprof.comb import (
    ALWAYS_EQ,
    ALWAYS_GE,
    ALWAYS_GT,
    Affine,
    Cap,
    CombChoiceWord,
    CombSpec,
    Const,
    Geo,
    NotRational,
    comb_always_convergent,
    comb_convergent,
    comb_divergent,
    comb_pe,
    comb_rat_inf,
    comb_spe,
    drop_start,
    fails_at,
    stage_compare,
    strictly_greater_from,
    to_profile,
)
from stratprof.families import infpede_spec, omegapede_spec, zero_one_spec


def test_expressions():
    assert Geo(1, 2, 2).at(1) == 16
    assert Affine(95, -5).at(2) == 85
    assert Const("1/2").at(9) == Fraction(1, 2)
    g = Geo(3, 2, 1, 5)
    for start, stride in ((0, 1), (2, 3)):
        h = g.shift(start, stride)
        assert [h.at(n) for n in range(5)] == [g.at(start + stride * n) for n in range(5)]


def test_stage_compare():
    assert stage_compare(Affine(95, -5), Affine(0, -5)) == ALWAYS_GT
    assert stage_compare(Affine(0, -5), Affine(95, -5)) == fails_at(0)
    assert stage_compare(Const(2), Const(2)) == ALWAYS_EQ
    assert stage_compare(Affine(0, 1), Const(0)) == ALWAYS_GE
    # 2^n eventually beats 10n + 3 but not at first
    assert stage_compare(Geo(1, 1, 0), Affine(3, 10)) == fails_at(0)
    assert strictly_greater_from(Geo(1, 1, 0), Affine(3, 10)) == 6
    assert strictly_greater_from(Const(0), Affine(0, 1)) is None


@given(st.integers(-3, 3), st.integers(0, 3), st.integers(-3, 3), st.integers(-4, 4),
       st.integers(-5, 5), st.integers(-3, 3))
def test_stage_compare_agrees_with_evaluation(q, a, b, c, q0, q1):
    lhs, rhs = Geo(q, a, b, c), Affine(q0, q1)
    v = stage_compare(lhs, rhs)
    diffs = [lhs.at(n) - rhs.at(n) for n in range(40)]
    if v.ok:
        assert all(d >= 0 for d in diffs)
        if v == ALWAYS_GT:
            assert all(d > 0 for d in diffs)
    else:
        assert diffs[v.stage] < 0 and all(d >= 0 for d in diffs[: v.stage])


def test_words():
    w = CombChoiceWord.parse("pp(t)")
    assert str(w) == "pp(t)"
    assert [w.at(j) for j in range(4)] == list("pptt")
    assert w.first_take == 2
    assert CombChoiceWord.all_push().first_take is None
    assert comb_divergent(infpede_spec(), CombChoiceWord.all_push())
    assert comb_convergent(infpede_spec(), w)
    assert not comb_always_convergent(infpede_spec(), CombChoiceWord.parse("t(p)"))


def test_infpede_all_take_certificate():
    cert = comb_spe(infpede_spec(), CombChoiceWord.all_take())
    assert cert.valid
    assert {r.stage for r in cert.records} == {"0+2n", "1+2n"}
    assert all(r.verdict == ALWAYS_GT for r in cert.records)
    assert not comb_spe(infpede_spec(), CombChoiceWord.all_push()).valid
    bad = comb_spe(infpede_spec(), CombChoiceWord.parse("p(t)"))
    assert not bad.valid and bad.failures()[0].stage == "0"


def test_infpede_rationality():
    spec = infpede_spec()
    assert drop_start(spec) == 0
    assert str(comb_rat_inf(spec, CombChoiceWord.all_push())) == "false"
    assert str(comb_rat_inf(spec, CombChoiceWord.all_take())) == "true"
    assert comb_pe(spec, CombChoiceWord.all_take())
    assert not comb_pe(spec, CombChoiceWord.parse("p(t)"))


def test_zero_one():
    spec = zero_one_spec()
    assert comb_spe(spec, CombChoiceWord.parse("(pt)")).valid
    # A is indifferent between 0 now and 0 later, so this one is SPE too
    assert comb_spe(spec, CombChoiceWord.parse("(tp)")).valid
    assert not comb_spe(spec, CombChoiceWord.all_take()).valid
    assert str(comb_rat_inf(spec, CombChoiceWord.all_push())) == "true"


def test_non_rational_export_refused():
    with pytest.raises(NotRational):
        to_profile(infpede_spec(), CombChoiceWord.all_take())


def test_export_shape():
    spec = omegapede_spec(3)
    s = to_profile(spec, CombChoiceWord.all_push())
    assert not s.is_finite
    assert engine.divergent(s)
    # 3 head stages, then a 2-stage loop
    assert len(s.internal_ids) == 5


def _words(max_prefix, max_period):
    for p in range(max_prefix + 1):
        for q in range(1, max_period + 1):
            for chars in itertools.product("tp", repeat=p + q):
                yield CombChoiceWord("".join(chars[:p]), "".join(chars[p:]))


CAPPED = [
    omegapede_spec(1),
    omegapede_spec(3),
    zero_one_spec(),
    CombSpec(("A", "B"), [{"A": Affine(0, -1), "B": Affine(4, -1)},
                          {"A": Affine(3, -1), "B": Affine(0, -1)}], Cap(3, {"A": -1, "B": -1})),
    CombSpec(("A", "B", "C"), [{"A": 1, "B": 0, "C": 2}, {"A": 0, "B": 2, "C": 1},
                               {"A": 2, "B": 1, "C": 0}]),
]


@pytest.mark.parametrize("spec", CAPPED, ids=range(len(CAPPED)))
def test_comb_agrees_with_engine(spec):
    for w in _words(4, 2):
        s = to_profile(spec, w)
        assert comb_spe(spec, w).valid == engine.spe(s), w
        assert comb_divergent(spec, w) == engine.divergent(s), w
        assert comb_always_convergent(spec, w) == engine.always_convergent(s), w
        assert comb_pe(spec, w) == engine.pe(s), w


@pytest.mark.parametrize("spec", CAPPED, ids=range(len(CAPPED)))
def test_comb_rat_inf_agrees_with_engine(spec):
    for w in _words(3, 2):
        v = comb_rat_inf(spec, w)
        if v.definite:
            assert bool(v) == engine.rat_inf(to_profile(spec, w)), w
