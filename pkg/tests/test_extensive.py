"""Extensive forms: validation, strategies, backward induction, subgames, SPE, win/lose games."""
import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from finitegames.extensive import (
    CapExceeded, CountingGame, ExtensiveForm, FormError, backward_induction,
    behavioral_from_mixed, bi_profile_labels, expected_payoffs, format_behavior,
    is_nash_behavior, is_spe, outcome_distribution, play_path, profile_from_labels,
    pure_profile, pure_strategies, solve_zermelo, spe, subgames, to_strategic_form,
    validate, verify_guarantee,
)


def ultimatum():
    # Offer an even or an uneven split; the responder accepts or rejects.
    return ExtensiveForm.build(
        ["1", "2"],
        {"()": ("1", ["even", "uneven"]), "even": ("2", ["acc", "rej"]), "uneven": ("2", ["acc", "rej"])},
        {"even.acc": (2, 3), "even.rej": (1, 2), "uneven.acc": (3, 1), "uneven.rej": (1, 2)},
    )


def centipede_frame():
    """Two-stage tree whose strategic form has four strategies per player."""
    return ExtensiveForm.build(
        ["1", "2"],
        {"()": ("1", "ab"), "a": ("2", "cd"), "b": ("2", "ef"), "b.f": ("1", "gh")},
        {"a.c": (2, 1), "a.d": (0, 0), "b.e": (3, 1), "b.f.g": (1, 2), "b.f.h": (1, 0)},
    )


def envelopes():
    """Two envelopes drawn without replacement from 100/200/300; trade or keep."""
    vals = (100, 200, 300)
    pairs = [(x, y) for x in vals for y in vals if x != y]
    deal = {f"{x}-{y}": F(1, 6) for x, y in pairs}
    dec = {"()": ("chance", deal)}
    pays = {}
    p1_sets, p2_set = {}, []
    for x, y in pairs:
        d = f"{x}-{y}"
        dec[d] = ("1", "PT")
        dec[f"{d}.T"] = ("2", "YN")
        p1_sets.setdefault(f"sees{x}", []).append(d)
        p2_set.append(f"{d}.T")
        pays[f"{d}.P"] = (x, y)
        pays[f"{d}.T.Y"] = (y, x)
        pays[f"{d}.T.N"] = (x, y)
    return ExtensiveForm.build(["1", "2"], dec, pays, infosets={**p1_sets, "asked": p2_set})


# ------------------------------------------------------------------ validation


def test_forgetful_player_is_rejected(doc):
    diags = validate(doc("imperfect_recall").body)
    assert diags and all("perfect recall" in d for d in diags)


def test_single_terminal_form_is_valid():
    ef = ExtensiveForm.build(["1"], {}, {"()": (0,)})
    assert validate(ef) == []
    assert ef.terminals == ((),) or list(ef.terminals) == [()]


def test_bad_chance_and_missing_payoff_are_reported():
    ef = ExtensiveForm.build(["1"], {"()": ("chance", {"x": F(1, 2), "y": F(1, 3)})},
                             {"x": (1,)})
    diags = validate(ef)
    assert any("do not sum to 1" in d for d in diags)
    assert any("has no payoff" in d for d in diags)


def test_unknown_player_raises():
    with pytest.raises(FormError):
        ExtensiveForm.build(["1"], {"()": ("9", "ab")}, {"a": (0,), "b": (0,)})


# ------------------------------------------------------------------ strategies


def test_strategy_labels_follow_information_set_order(doc):
    ef = doc("kuhn_outcome").body
    assert [l for l, _ in pure_strategies(ef, 0)] == ["ae", "af", "be", "bf"]
    assert [l for l, _ in pure_strategies(ef, 1)] == ["c", "d"]


def test_mixed_to_behavioral_and_outcome_distribution(doc):
    ef = doc("kuhn_outcome").body
    beh = behavioral_from_mixed(ef, 0, {"ae": F(1, 12), "af": F(4, 12), "be": F(2, 12), "bf": F(5, 12)})
    assert beh == {"1@()": {"a": F(5, 12), "b": F(7, 12)}, "1@b.d": {"e": F(2, 7), "f": F(5, 7)}}
    prof = {**beh, "P2": {"c": F(1, 3), "d": F(2, 3)}}
    dist = outcome_distribution(ef, prof)
    assert [dist[z] for z in ef.terminals] == [F(5, 36), F(10, 36), F(7, 36), F(4, 36), F(10, 36)]


def test_behavioral_at_unreached_set_uses_common_choice(doc):
    ef = doc("kuhn_outcome").body
    beh = behavioral_from_mixed(ef, 0, {"ae": F(1, 3), "af": F(2, 3)})
    assert beh["1@b.d"] == {"e": F(1, 2), "f": F(1, 2)}
    beh = behavioral_from_mixed(ef, 0, {"af": 1})
    assert beh["1@b.d"] == {"e": 0, "f": 1}


def test_behavioral_needs_perfect_recall(doc):
    with pytest.raises(FormError):
        behavioral_from_mixed(doc("imperfect_recall").body, 0, {"ac": 1})


def test_strategic_form_of_two_stage_tree():
    G = to_strategic_form(centipede_frame())
    assert G.strategies == (("ag", "ah", "bg", "bh"), ("ce", "cf", "de", "df"))
    assert G.payoff[("ag", "ce")] == (2, 1)
    assert G.payoff[("ah", "df")] == (0, 0)
    assert G.payoff[("bg", "cf")] == (1, 2)
    assert G.payoff[("bh", "df")] == (1, 0)
    assert G.payoff[("bh", "de")] == (3, 1)


def test_envelope_strategic_form_takes_expectations_over_chance():
    G = to_strategic_form(envelopes())
    assert G.strategies[1] == ("Y", "N")
    assert G.payoff[("PPP", "Y")] == (200, 200)
    assert G.payoff[("TPP", "Y")] == (250, 150)
    assert G.payoff[("PPT", "Y")] == (150, 250)
    assert G.payoff[("TTT", "N")] == (200, 200)


# ---------------------------------------------------------- backward induction


def test_ultimatum_backward_induction():
    ef = ultimatum()
    plans = backward_induction(ef)
    assert len(plans) == 1
    assert plans[0] == {(): "even", ("even",): "acc", ("uneven",): "rej"}
    assert play_path(ef, plans[0]) == ("even", "acc")


def test_ties_give_one_profile_per_choice():
    ef = ExtensiveForm.build(["1"], {"()": ("1", "LR")}, {"L": (1,), "R": (1,)})
    assert sorted(p[()] for p in backward_induction(ef)) == ["L", "R"]
    with pytest.raises(CapExceeded):
        backward_induction(ef, cap=1)


def test_chain_store_outcome(doc):
    ef = doc("chain_store").body
    plans = backward_induction(ef)
    assert len(plans) == 1
    assert play_path(ef, plans[0]) == ("in", "share", "in", "share")
    assert bi_profile_labels(ef, plans[0]) == ("share.share.share.share", "in", "in.in.in")


def test_backward_induction_rejects_imperfect_information(doc):
    with pytest.raises(FormError):
        backward_induction(doc("kuhn_outcome").body)


# -------------------------------------------------------------- subgames & SPE


def three_player_with_subgames():
    return ExtensiveForm.build(
        ["1", "2", "3"],
        {"()": ("1", "ab"), "a": ("2", "cd"), "a.c": ("3", "gh"), "a.d": ("3", "gh"),
         "b": ("2", "ef"), "b.e": ("3", "AB"), "b.f": ("3", "AB"), "b.e.A": ("1", "CD"),
         "b.e.A.C": ("2", "EF"), "b.e.A.D": ("2", "EF")},
        {"a.c.g": (1, 0, 1), "a.c.h": (1, 0, 0), "a.d.g": (0, 1, 0), "a.d.h": (2, 1, 2),
         "b.e.A.C.E": (0, 0, 0), "b.e.A.C.F": (1, 1, 1), "b.e.A.D.E": (0, 0, 0), "b.e.A.D.F": (0, 1, 0),
         "b.e.B": (0, 0, 0), "b.f.A": (3, 2, 1), "b.f.B": (0, 0, 0)},
        infosets={"3x": ["a.c", "a.d"], "3y": ["b.e", "b.f"], "2z": ["b.e.A.C", "b.e.A.D"]},
    )


def test_subgame_roots_and_minimality():
    assert subgames(three_player_with_subgames()) == [(("a",), True), (("b",), False), (("b", "e", "A"), True)]


def test_spe_of_tree_with_nested_subgames():
    ef = three_player_with_subgames()
    eqs = spe(ef)
    assert [format_behavior(ef, s) for s in eqs] == ["1: b, C; 2: d, f, F; 3: h, A"]
    bad = profile_from_labels(ef, ["aC", "dfE", "hB"])
    assert is_nash_behavior(ef, bad) and not is_spe(ef, bad)


def test_spe_with_mixed_play_in_subgames(doc):
    ef = doc("three_player_spe").body
    eqs = spe(ef)
    assert eqs and all(is_spe(ef, s) for s in eqs)


# ------------------------------------------------------------ win/lose/draw


def test_counting_to_48_is_a_second_player_win():
    res = solve_zermelo(CountingGame(48, 7))
    assert res.category == "player 2 wins"


def test_exact_counting_to_100_is_a_first_player_win():
    game = CountingGame(100, 10, True)
    res = solve_zermelo(game)
    assert res.category == "player 1 wins"
    assert res.witness[(0, 0)] == "1"
    assert verify_guarantee(game, 0, res.witness)
    losing = sorted({s[0] for s, v in res.values.items() if game.result(s) is None
                     and v != ("win1" if s[1] == 0 else "win2")})
    assert losing == list(range(1, 100, 11))


def test_guarantee_check_rejects_a_bad_strategy():
    game = CountingGame(100, 10, True)
    always_one = {(t, 0): "1" for t in range(100)}
    assert not verify_guarantee(game, 0, always_one)


def test_tree_game_from_form(doc):
    res = solve_zermelo(doc("nim_four").body)
    assert res.category in ("player 1 wins", "player 2 wins", "draw")


# ------------------------------------------------------------------ properties


def random_pi_tree(seed, n_players=2, generic=True):
    """Random perfect-information tree; ``generic`` makes payoffs injective per player."""
    rng = random.Random(seed)
    dec, leaves = {}, []

    def grow(h, depth):
        if depth == 0 or (h and rng.random() < 0.3):
            leaves.append(h)
            return
        k = rng.randint(2, 3)
        acts = [f"m{j}" for j in range(k)]
        if rng.random() < 0.15:
            dec[".".join(h) or "()"] = ("chance", {a: F(1, k) for a in acts})
        else:
            dec[".".join(h) or "()"] = (str(rng.randrange(n_players)), acts)
        for a in acts:
            grow(h + (a,), depth - 1)

    grow((), 3)
    cols = []
    for _ in range(n_players):
        vals = list(range(len(leaves))) if generic else [rng.randint(0, 2) for _ in leaves]
        rng.shuffle(vals)
        cols.append(vals)
    pays = {".".join(z) or "()": tuple(c[k] for c in cols) for k, z in enumerate(leaves)}
    return ExtensiveForm.build([str(i) for i in range(n_players)], dec, pays)


def support_only(profile):
    return {s: {a: p for a, p in d.items() if p} for s, d in profile.items()}


def plan_profile(ef, plan):
    return pure_profile({ef.infoset_of[h]: a for h, a in plan.items()})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_backward_induction_profiles_are_nash(seed):
    ef = random_pi_tree(seed, generic=False)
    for plan in backward_induction(ef, cap=10**4)[:6]:
        prof = plan_profile(ef, plan)
        assert is_nash_behavior(ef, prof)
        assert is_spe(ef, prof)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_spe_equals_backward_induction_on_generic_trees(seed):
    ef = random_pi_tree(seed, generic=True)
    if any(ef.mover[h] == "chance" for h in ef.actions):
        return  # chance averages can tie even with injective payoffs
    plans = backward_induction(ef)
    assert len(plans) == 1
    assert [support_only(e) for e in spe(ef)] == [plan_profile(ef, plans[0])]


def frames():
    yield ExtensiveForm.build(
        ["1", "2"],
        {"()": ("1", "ab"), "a": ("2", "cd"), "b": ("2", "cd"), "b.d": ("1", "ef")},
        {"a.c": (0, 0), "a.d": (0, 0), "b.c": (0, 0), "b.d.e": (0, 0), "b.d.f": (0, 0)},
        infosets={"P2": ["a", "b"]},
    )
    yield ExtensiveForm.build(
        ["1", "2"],
        {"()": ("chance", {"l": F(1, 3), "r": F(2, 3)}), "l": ("1", "xy"), "r": ("1", "xy"),
         "l.x": ("2", "uv"), "r.x": ("2", "uv"), "l.x.u": ("1", "pq"), "r.y": ("1", "pq")},
        {"l.y": (0, 0), "r.y.p": (0, 0), "r.y.q": (0, 0), "l.x.v": (0, 0), "r.x.u": (0, 0),
         "r.x.v": (0, 0), "l.x.u.p": (0, 0), "l.x.u.q": (0, 0)},
        infosets={"see": ["l.x", "r.x"]},
    )


weights = st.integers(0, 5)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_mixed_and_behavioral_strategies_are_realization_equivalent(data):
    for ef in frames():
        assert validate(ef) == []
        mixes = []
        for i in range(ef.n):
            labels = [l for l, _ in pure_strategies(ef, i)]
            w = data.draw(st.lists(weights, min_size=len(labels), max_size=len(labels)))
            if not any(w):
                w[0] = 1
            tot = sum(w)
            mixes.append({l: F(x, tot) for l, x in zip(labels, w)})
        # realization under the mixture
        mixed_dist = {z: F(0) for z in ef.terminals}
        for combo in itertools.product(*(m.items() for m in mixes)):
            weight = F(1)
            for _, p in combo:
                weight *= p
            if weight:
                d = outcome_distribution(ef, profile_from_labels(ef, [l for l, _ in combo]))
                for z, p in d.items():
                    mixed_dist[z] += weight * p
        prof = {}
        for i, m in enumerate(mixes):
            prof.update(behavioral_from_mixed(ef, i, m))
        assert outcome_distribution(ef, prof) == mixed_dist


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_outcome_distribution_sums_to_one(seed, pseed):
    ef = random_pi_tree(seed)
    rng = random.Random(pseed)
    prof = {}
    for sid in ef.all_infosets():
        acts = ef.infoset_actions(sid)
        w = [rng.randint(0, 3) for _ in acts]
        if not any(w):
            w[0] = 1
        prof[sid] = {a: F(x, sum(w)) for a, x in zip(acts, w)}
    dist = outcome_distribution(ef, prof)
    assert sum(dist.values()) == 1
    assert set(dist) == set(ef.terminals)
    ev = expected_payoffs(ef, prof)
    assert ev == tuple(sum((p * ef.payoffs[z][k] for z, p in dist.items()), F(0)) for k in range(ef.n))
