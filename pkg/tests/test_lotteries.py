from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from finitegames.lotteries import (
    CompoundLottery, LotteryError, Ranking, SimpleLottery, UtilityFunction, affine_relation,
    expected_utility, expected_value, normalize, reduce_compound, represents, risk_attitude,
    vnm_from_continuity,
)


def test_expected_value_examples():
    assert expected_value(SimpleLottery([5, 15, 25], [F(1, 5), F(2, 5), F(2, 5)])) == 17
    assert expected_value(SimpleLottery([30, 45, 90], [F(1, 3), F(5, 9), F(1, 9)])) == 45
    assert expected_value(SimpleLottery.degenerate("12")) == 12


def test_expected_value_rejects_non_money():
    with pytest.raises(LotteryError):
        expected_value(SimpleLottery(["car"], [1]))


def test_simple_lottery_validation():
    with pytest.raises(LotteryError):
        SimpleLottery(["a", "b"], [F(1, 2), F(1, 3)])
    with pytest.raises(LotteryError):
        SimpleLottery(["a", "a"], [F(1, 2), F(1, 2)])
    with pytest.raises(LotteryError):
        SimpleLottery(["a", "b"], [F(3, 2), F(-1, 2)])


MONEY = ["3000", "2000", "1000", "500"]
U_MONEY = UtilityFunction(dict(zip(MONEY, [1, F(5, 6), F(2, 3), 0])))


def test_expected_utility_of_two_money_lotteries():
    L3 = SimpleLottery(MONEY, [F(1, 4)] * 4)
    L4 = SimpleLottery(["2000", "1000"], [F(1, 2), F(1, 2)])
    assert expected_utility(L3, U_MONEY) == F(5, 8)
    assert expected_utility(L4, U_MONEY) == F(3, 4)
    assert expected_utility(SimpleLottery.degenerate("2000"), U_MONEY) == F(5, 6)


def test_reduce_compound_tree():
    o = ["o1", "o2", "o3", "o4"]
    C = CompoundLottery([
        (SimpleLottery(o, [F(1, 3), F(1, 6), F(1, 3), F(1, 6)]), F(1, 2)),
        ("o1", F(1, 4)),
        (SimpleLottery(o, [F(1, 5), 0, F(1, 5), F(3, 5)]), F(1, 4)),
    ])
    assert reduce_compound(C).as_dict() == dict(zip(o, [F(28, 60), F(5, 60), F(13, 60), F(14, 60)]))


def test_reduce_compound_four_branches():
    C = CompoundLottery([
        (SimpleLottery(["o1", "o2", "o3", "o4"], [F(2, 5), F(1, 10), F(3, 10), F(1, 5)]), F(1, 8)),
        ("o2", F(1, 4)),
        (SimpleLottery(["o1", "o3", "o4"], [F(1, 5), F(1, 5), F(3, 5)]), F(1, 8)),
        (SimpleLottery(["o2", "o3"], [F(1, 3), F(2, 3)]), F(1, 2)),
    ])
    got = reduce_compound(C).as_dict()
    assert [got[k] for k in ["o1", "o2", "o3", "o4"]] == [F(18, 240), F(103, 240), F(95, 240), F(24, 240)]


def test_reduce_compound_of_outcomes_only():
    C = CompoundLottery([("x", F(1, 3)), ("y", F(2, 3))])
    assert reduce_compound(C).as_dict() == {"x": F(1, 3), "y": F(2, 3)}


def test_compound_nests_one_level():
    inner = CompoundLottery([("x", 1)])
    with pytest.raises(LotteryError):
        CompoundLottery([(inner, 1)])


def test_normalize_six_outcomes():
    U = UtilityFunction({"o1": 2, "o2": -2, "o3": 8, "o4": 0, "o5": -2, "o6": 8})
    R = Ranking([["o3", "o6"], ["o1"], ["o4"], ["o2", "o5"]])
    N = normalize(U, R)
    assert [N(o) for o in ["o1", "o2", "o3", "o4", "o5", "o6"]] == [F(2, 5), 0, 1, F(1, 5), 0, 1]


def test_normalize_and_affine_relation_agree():
    outs = ["o1", "o2", "o3", "o4", "o5"]
    U = UtilityFunction(dict(zip(outs, [44, 170, -10, 26, 98])))
    V = UtilityFunction(dict(zip(outs, [32, 95, 5, 23, 59])))
    R = Ranking([["o2"], ["o5"], ["o1"], ["o4"], ["o3"]])
    expected = [F(3, 10), 1, 0, F(1, 5), F(3, 5)]
    assert [normalize(U, R)(o) for o in outs] == expected
    assert [normalize(V, R)(o) for o in outs] == expected
    assert affine_relation(U, V) == (F(1, 2), 10)
    assert affine_relation(U, U) == (1, 0)


def test_normalize_requires_representation():
    U = UtilityFunction({"a": 0, "b": 1})
    with pytest.raises(LotteryError):
        normalize(U, Ranking([["a"], ["b"]]))
    with pytest.raises(LotteryError):
        normalize(U, Ranking([["a", "b"]]))


def test_affine_relation_detects_non_affine():
    U = UtilityFunction({"a": 0, "b": 1, "c": 2})
    assert affine_relation(U, UtilityFunction({"a": 0, "b": 1, "c": 5})) is None
    assert affine_relation(U, UtilityFunction({"a": 2, "b": 1, "c": 0})) is None


def test_vnm_from_continuity():
    R = Ranking([["o2"], ["o1", "o5"], ["o3", "o4"]])
    U = vnm_from_continuity(R, {"o1": F(2, 5), "o5": F(2, 5)})
    assert [U(o) for o in ["o1", "o2", "o3", "o4", "o5"]] == [F(2, 5), 1, 0, 0, F(2, 5)]
    R4 = Ranking([["o1"], ["o2"], ["o3"], ["o4"]])
    U4 = vnm_from_continuity(R4, {"o2": F(4, 5), "o3": F(1, 2)})
    assert (U4("o2"), U4("o3")) == (F(4, 5), F(1, 2))
    L1 = SimpleLottery(["o1", "o2", "o3", "o4"], [F(1, 8), F(2, 8), F(3, 8), F(2, 8)])
    L2 = SimpleLottery(["o1", "o2", "o3"], [F(1, 5), F(3, 5), F(1, 5)])
    assert (expected_utility(L1, U4), expected_utility(L2, U4)) == (F(41, 80), F(39, 50))
    two = vnm_from_continuity(Ranking([["w"], ["l"]]), {})
    assert (two("w"), two("l")) == (1, 0)


def test_vnm_rejects_non_monotone_answers():
    R = Ranking([["a"], ["b"], ["c"], ["d"]])
    with pytest.raises(LotteryError):
        vnm_from_continuity(R, {"b": F(1, 3), "c": F(1, 2)})
    with pytest.raises(LotteryError):
        vnm_from_continuity(R, {"b": F(1, 2)})


def test_risk_attitude():
    L = SimpleLottery([10, 50], [F(1, 2), F(1, 2)])
    # square roots tabled to six decimals
    sq = {10: F(3162278, 10**6), 30: F(5477226, 10**6), 50: F(7071068, 10**6)}
    assert risk_attitude(sq, L) == "averse"
    assert risk_attitude({10: 10, 30: 30, 50: 50}, L) == "neutral"
    assert risk_attitude({0: 0, 5: 25, 10: 100}, SimpleLottery([0, 10], [F(1, 2), F(1, 2)])) == "loving"
    with pytest.raises(LotteryError):
        risk_attitude({10: 1, 50: 2}, L)


def test_expected_utility_check_in_lottery_document(doc):
    d = doc("lottery_ranking")
    assert represents(d.body.utility, d.body.ranking)
    assert expected_utility(d.body.lotteries["L3"], d.body.utility) < expected_utility(d.body.lotteries["L4"], d.body.utility)


# -- properties ---------------------------------------------------------------

probs = st.lists(st.integers(min_value=1, max_value=20), min_size=1, max_size=6)


@given(probs, st.lists(st.integers(-50, 50), min_size=6, max_size=6))
def test_expected_utility_is_affine_invariant(weights, vals):
    total = sum(weights)
    outs = [f"o{k}" for k in range(len(weights))]
    L = SimpleLottery(outs, [F(w, total) for w in weights])
    U = UtilityFunction(dict(zip(outs, vals)))
    V = UtilityFunction({o: 3 * U(o) - 7 for o in outs})
    assert expected_utility(L, V) == 3 * expected_utility(L, U) - 7


@given(st.lists(probs, min_size=1, max_size=4), probs)
def test_reduction_preserves_total_probability(inner, outer_w):
    k = min(len(inner), len(outer_w))
    tot = sum(outer_w[:k])
    entries = []
    for ws, w in zip(inner[:k], outer_w[:k]):
        s = sum(ws)
        entries.append((SimpleLottery([f"o{j}" for j in range(len(ws))], [F(x, s) for x in ws]), F(w, tot)))
    L = reduce_compound(CompoundLottery(entries))
    assert sum(L.probs) == 1
    assert all(p >= 0 for p in L.probs)


@given(st.lists(st.integers(-100, 100), min_size=2, max_size=6, unique=True))
def test_normalized_utility_spans_unit_interval(vals):
    outs = [f"o{k}" for k in range(len(vals))]
    U = UtilityFunction(dict(zip(outs, vals)))
    R = Ranking([[o] for o, _ in sorted(zip(outs, vals), key=lambda t: -t[1])])
    N = normalize(U, R)
    assert max(N.values.values()) == 1 and min(N.values.values()) == 0
    assert affine_relation(U, N) is not None
