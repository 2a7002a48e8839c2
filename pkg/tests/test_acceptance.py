"""Release acceptance checks.

Each criterion is one test; every test records a ``PASS``/``FAIL`` line that
is printed in the terminal summary (see ``conftest.py``).  All comparisons
are exact equalities on ``Fraction`` values.
"""
import itertools
import random
from fractions import Fraction as F

import pytest

from conftest import ACCEPTANCE, load
from finitegames import epistemics as ep
from finitegames import extensive as ex
from finitegames import incompleteinfo as ii
from finitegames import refinements as rf
from finitegames import strategic as sg

ASSESSMENTS = [
    "three_player_seqeq", "mixed_assessment", "not_sequentially_rational", "chance_assessment",
    "wse_not_pbe", "cm_not_ub", "seqeq_certificate", "pbe_mixed_third", "pbe_not_se",
    "reputation", "reputation_low_prior",
]


def record(number, title, ok):
    ACCEPTANCE[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}"
    print(ACCEPTANCE[number])
    assert ok, title


# 1 -------------------------------------------------------------------------


def test_01_mixed_nash_of_three_by_three_game():
    G = load("two_by_two_mixed").body
    eqs = [tuple(m.as_dict() for m in eq) for eq in sg.mixed_nash_2p(G)]
    ok = eqs == [({"B": F(1, 5), "C": F(4, 5)}, {"E": F(2, 3), "F": F(1, 3)})]
    record(1, "mixed Nash equilibrium ((B 1/5, C 4/5), (E 2/3, F 1/3))", ok)


# 2 -------------------------------------------------------------------------


def test_02_strict_deletion_and_order_independence():
    G = load("iterated_deletion").body
    trace = sg.iterated_deletion(G, sg.STRICT_PURE)
    ok = trace.survivors == (("b",), ("f",))
    rng = random.Random(2024)
    ok = ok and all(sg.random_strict_deletion(G, rng) == (("b",), ("f",)) for _ in range(20))
    record(2, "strict deletion ends at (b,f) under 20 random deletion orders", ok)


# 3 -------------------------------------------------------------------------


def test_03_mixed_dominance_survivors():
    G = load("mixed_dominance_three").body
    trace = sg.iterated_deletion(G, sg.STRICT_MIXED)
    ok = trace.profiles() == [("A", "D")]
    _, player, removed, dominator = trace.rounds[0]
    ok = ok and (player, removed) == (0, "C") and set(dominator.support) <= {"A", "B"}
    margins = {sg.expected_payoff(G, 0, [dominator, c]) - G.u(0, ("C", c)) for c in G.strategies[1]}
    ok = ok and len(margins) == 1 and min(margins) > 0
    record(3, "mixed-dominance survivors {(A,D)}; C beaten by an A/B mixture by a constant margin", ok)


# 4 -------------------------------------------------------------------------


def test_04_subgame_perfect_equilibrium_with_mixing():
    ef = load("three_player_spe").body
    expected = {
        "1@()": {"L": 1, "R": 0},
        "2@L": {"A": F(1, 2), "B": F(1, 2)}, "2@R": {"E": F(2, 3), "F": F(1, 3)},
        "3L": {"C": F(1, 4), "D": F(3, 4)}, "3R": {"G": F(1, 3), "H": F(2, 3)},
    }
    record(4, "SPE (L, (1/2,1/2 | 2/3,1/3), (1/4,3/4 | 1/3,2/3))", ex.spe(ef) == [expected])


# 5 -------------------------------------------------------------------------


def test_05_mixed_to_behavioral_conversion():
    ef = load("kuhn_outcome").body
    mixed = {"ae": F(1, 12), "af": F(4, 12), "be": F(2, 12), "bf": F(5, 12)}
    beh = ex.behavioral_from_mixed(ef, 0, mixed)
    ok = beh == {"1@()": {"a": F(5, 12), "b": F(7, 12)}, "1@b.d": {"e": F(2, 7), "f": F(5, 7)}}
    p2 = {"P2": {"c": F(1, 3), "d": F(2, 3)}}
    target = [F(5, 36), F(10, 36), F(7, 36), F(4, 36), F(10, 36)]
    behav_dist = ex.outcome_distribution(ef, {**beh, **p2})
    mixed_dist = {z: F(0) for z in ef.terminals}
    for label, w in mixed.items():
        d = ex.outcome_distribution(ef, {**ex.pure_profile(dict(ex.pure_strategies(ef, 0))[label]), **p2})
        for z, p in d.items():
            mixed_dist[z] += w * p
    ok = ok and [behav_dist[z] for z in ef.terminals] == target == [mixed_dist[z] for z in ef.terminals]
    record(5, "mixed (1/12,4/12,2/12,5/12) -> behavioral (5/12,7/12 | 2/7,5/7), same outcome distribution", ok)


# 6 -------------------------------------------------------------------------


def test_06_common_knowledge():
    S = load("three_agent_ck").body.structure
    ok = set(ep.ck_partition(S)) == {frozenset("abcd"), frozenset("efgh")}
    ok = ok and ep.ck(S, "abcdeg") == frozenset("abcd")
    record(6, "CK partition {{a,b,c,d},{e,f,g,h}} and CK{a,b,c,d,e,g} = {a,b,c,d}", ok)


# 7 -------------------------------------------------------------------------


def three_agent_prior(p):
    return ep.EpistemicStructure.build("abcdef", {"1": ["ab", "cd", "ef"], "2": ["a", "bc", "de", "f"],
                                                  "3": ["a", "bf", "cd", "e"]}, {
        "1": [{"a": F(1, 3), "b": F(2, 3)}, {"c": F(1, 2), "d": F(1, 2)}, {"e": F(1, 2), "f": F(1, 2)}],
        "2": [{"a": 1}, {"b": F(1, 4), "c": F(3, 4)}, {"d": F(1, 5), "e": F(4, 5)}, {"f": 1}],
        "3": [{"a": 1}, {"b": p, "f": 1 - p}, {"c": F(1, 2), "d": F(1, 2)}, {"e": 1}],
    })


def test_07_common_priors():
    P = ep.common_prior(load("two_agent_prior").body.structure)
    ok = P == {"a": F(2, 8), "b": F(1, 8), "c": F(1, 8), "d": F(2, 8), "e": F(2, 8)}
    P = ep.common_prior(three_agent_prior(F(1, 13)))
    ok = ok and P == dict(zip("abcdef", [F(1, 63), F(2, 63), F(6, 63), F(6, 63), F(24, 63), F(24, 63)]))
    others = {F(k, 40) for k in range(1, 40)} | {F(1, 5), F(1, 12), F(1, 14)}
    ok = ok and all(ep.common_prior(three_agent_prior(p)) is None for p in others if p != F(1, 13))
    record(7, "priors (2/8,1/8,1/8,2/8,2/8) and, only at p = 1/13, (1/63,2/63,6/63,6/63,24/63,24/63)", ok)


# 8 -------------------------------------------------------------------------


def test_08_agreement_on_random_structures():
    rng = random.Random(8)
    failures = 0
    for _ in range(1000):
        n = rng.randint(1, 6)
        W = [f"w{k}" for k in range(n)]
        parts = {}
        for agent in ("1", "2"):
            cells = {}
            for w in W:
                cells.setdefault(rng.randrange(n), []).append(w)
            parts[agent] = list(cells.values())
        weights = {w: F(rng.randint(1, 9)) for w in W}
        total = sum(weights.values())
        prior = {w: v / total for w, v in weights.items()}
        S = ep.EpistemicStructure.from_prior(W, parts, prior)
        E = {w for w in W if rng.random() < 0.5}
        if not ep.agreement_holds(S, E, prior).holds:
            failures += 1
    record(8, "agreement holds on 1,000 random two-agent structures with a common prior", failures == 0)


# 9 -------------------------------------------------------------------------


def test_09_common_knowledge_of_rationality():
    M = load("game_model").body.model
    ok = ep.rational_states(M) == frozenset({"al", "be"})
    built = ep.build_ckr_model(load("ckr_game").body)
    profiles = {built.profile(w) for w in built.structure.states}
    ok = ok and len(built.structure.states) == 4
    ok = ok and profiles == {("T", "L"), ("T", "C"), ("B", "L"), ("B", "C")}
    ok = ok and ep.ckr_states(built) == built.structure.W
    record(9, "R = {alpha,beta}; CKR model of the 3x3 game has 4 states, CKR everywhere", ok)


# 10 ------------------------------------------------------------------------


def test_10_refinement_ladder():
    b6, b7, b15 = (load(s).body for s in ("pbe_mixed_third", "pbe_not_se", "seqeq_certificate"))
    ok = rf.is_pbe(b6.form, b6.assessment)
    ok = ok and rf.is_pbe(b7.form, b7.assessment) and not rf.is_sequential_equilibrium(b7.form, b7.assessment)
    ef, a = b15.form, b15.assessment
    cert = rf.se_certificate(ef, a)
    ok = ok and cert is not None and rf.check_uniform_prior(ef, a, cert.order, cert.prior)
    nu = {"()": F(9, 40), "b": F(7, 40), "b.B": F(7, 40), "c": F(3, 40), "c.B": F(3, 40),
          "c.B.f": F(3, 40), "d": F(8, 40)}
    order = rf.HistoryPlausibilityOrder([["()", "a"], ["b", "c", "b.T", "c.T"],
                                         ["d", "b.B", "c.B", "c.B.f", "d.L", "b.B.L", "c.B.f.L"],
                                         ["d.R", "b.B.R", "c.B.f.R", "c.B.e"]])
    ok = ok and rf.check_rationalizes(ef, a, order) == [] and rf.check_uniform_prior(ef, a, order, nu)
    record(10, "PBE; PBE but not sequential; sequential with the published uniform prior validating", ok)


# 11 ------------------------------------------------------------------------


def test_11_choice_measurability():
    ef = ex.ExtensiveForm.build(
        ["1", "2"], {"()": ("1", "abcd"), "b": ("2", "ef"), "c": ("2", "ef")},
        {"a": (1, 0), "d": (0, 0), "b.e": (0, 1), "b.f": (0, 0), "c.e": (0, 0), "c.f": (0, 1)},
        infosets={"I": ["b", "c"]})
    accepted = rf.HistoryPlausibilityOrder([["()", "a"], ["b", "b.e"], ["b.f"], ["c", "c.e"], ["d"], ["c.f"]])
    Fp = {"()": 0, "a": 0, "b": 1, "b.e": 1, "b.f": 3, "c": 4, "c.e": 4, "d": 5, "c.f": 6}
    ok = rf.choice_measurable(ef, accepted) is not None
    ok = ok and rf.is_integer_rep(accepted, Fp) and rf.satisfies_cm(ef, Fp)
    b7 = load("pbe_not_se").body
    rejected = rf.HistoryPlausibilityOrder([["()", "c"], ["a", "a.d"], ["b", "b.d"], ["b.e", "b.e.g"],
                                            ["a.e", "a.e.g"], ["b.e.f"], ["a.e.f"]])
    ok = ok and rf.check_order(b7.form, rejected) == [] and rf.choice_measurable(b7.form, rejected) is None
    record(11, "the four-way order is choice measurable (published F validates); the flipped order is not", ok)


# 12 ------------------------------------------------------------------------


def test_12_incomplete_information():
    sc = load("one_sided_uncertainty").body
    eqs = ii.bayesian_nash(sc)
    ok = [ii.format_equilibrium(sc, e) for e in eqs] == ["((T,B),R)", "((B,T),L)"]
    ok = ok and all(ii.classify(sc, e) == ii.SEPARATING for e in eqs)
    two = load("two_sided_uncertainty").body
    ok = ok and ii.harsanyi_transform(two).chance_probs[()] == {"a": F(2, 4), "b": F(1, 4), "g": F(1, 4)}
    base = load("beliefs_with_prior").body
    ok = ok and ii.harsanyi_transform(base).chance_probs[()] == dict(zip("abgd", [F(1, 17), F(4, 17), F(8, 17), F(4, 17)]))
    for p in (F(1, 4), F(1, 3), F(1, 2), F(1, 6)):
        S = base.structure
        beliefs = {a: list(S.beliefs[a].values()) for a in S.agents}
        beliefs["2"] = [{"b": F(1, 3), "g": F(2, 3)}, {"a": p, "d": 1 - p}]
        S2 = ep.EpistemicStructure.build(S.states, {a: list(S.partitions[a]) for a in S.agents}, beliefs)
        sc2 = ii.IncompleteScenario.strategic(S2, {w: base.game_at(w) for w in S.states})
        try:
            ii.harsanyi_transform(sc2)
            ok = False
        except ii.IncompleteInfoError:
            pass
    record(12, "BNE {((T,B),R),((B,T),L)} separating; Nature (2/4,1/4,1/4); no transform unless p = 1/5", ok)


# 13 ------------------------------------------------------------------------


def test_13_type_spaces():
    ts2 = load("two_player_types").body
    P = ii.harsanyi_consistent(ts2)
    ok = [P[t] for t in ts2.profiles()] == [F(2, 21), F(6, 21), 0, F(4, 21), F(3, 21), F(6, 21)]
    ts3 = load("three_player_types").body
    P = ii.harsanyi_consistent(ts3)
    ok = ok and [P[t] for t in ts3.Y()] == [F(1, 2), F(1, 5), F(1, 5), F(1, 10)]
    ok = ok and all(P[t] == 0 for t in ts3.profiles() if t not in ts3.Y())
    for ts in (ts2, ts3):
        sc = ii.type_to_state(ts)
        ok = ok and ii.isomorphism(sc, ii.type_to_state(ii.state_to_type(sc))) is not None
    record(13, "type-space priors (2/21,6/21,0,4/21,3/21,6/21) and (1/2,1/5,1/5,1/10); round trips isomorphic", ok)


# 14 ------------------------------------------------------------------------


def test_14_chain_store_and_reputation():
    ef = load("chain_store").body
    plans = ex.backward_induction(ef)
    ok = [ex.play_path(ef, p) for p in plans] == [("in", "share", "in", "share")]
    b = load("reputation").body
    ok = ok and b.form.chance_probs[()]["H"] == F(1, 2)
    ok = ok and rf.is_sequential_equilibrium(b.form, b.assessment)
    record(14, "both entrants enter and the incumbent shares twice; deterrence at p = 1/2 is sequential", ok)


# 15 ------------------------------------------------------------------------


def test_15_mechanisms():
    r = sg.pivotal_mechanism([3, 2, 5], [-1, 8, 3])
    ok = r.pivotal == {1, 3} and r.taxes == (4, 0, 2)
    grid = range(10, 60, 10)
    ok = ok and sg.verify_truthful_dominance(sg.second_price_auction([30, 50], grid, tie=1), [30, 50])
    c, v, w = [30, 25, 25, 15, 5], [60, 15, 55, -25, -20], [70, 10, 65, -30, 5]
    G = sg.pivotal_game(c, v, [[v[i], w[i], c[i]] for i in range(5)])
    ok = ok and sg.verify_truthful_dominance(G, v)
    ok = ok and not sg.verify_truthful_dominance(
        sg.second_price_auction([30, 50], grid, tie=1, first_price=True), [30, 50])
    record(15, "pivotal {1,3} taxes (4,0,2); truthful bidding dominant in second-price and pivotal, not first-price", ok)


# 16 ------------------------------------------------------------------------


def _knowledge_laws_hold(rng):
    n = rng.randint(1, 6)
    W = [f"w{k}" for k in range(n)]
    parts = {}
    for a in range(rng.randint(1, 3)):
        cells = {}
        for w in W:
            cells.setdefault(rng.randrange(n), []).append(w)
        parts[str(a)] = list(cells.values())
    S = ep.EpistemicStructure.build(W, parts)
    E = {w for w in W if rng.random() < 0.5}
    G = {w for w in W if rng.random() < 0.5}
    for a in S.agents:
        K = lambda X: ep.know(S, a, X)
        if not (K(E) <= E and K(K(E)) == K(E) and K(ep.negate(S, K(E))) == ep.negate(S, K(E))
                and K(E & G) == K(E) & K(G) and K(S.W) == S.W):
            return False
    C = ep.ck(S, E)
    return C <= E and all(ep.know(S, a, C) == C for a in S.agents)


def _chain_holds(ef, a):
    se = rf.is_sequential_equilibrium(ef, a)
    pbe = rf.is_pbe(ef, a)
    wse = rf.is_weak_sequential(ef, a)
    return ((not se or pbe) and (not pbe or (wse and ex.is_spe(ef, a.sigma)))
            and (not wse or ex.is_nash_behavior(ef, a.sigma)))


def _random_behavior(ef, rng):
    prof = {}
    for sid in ef.all_infosets():
        acts = ef.infoset_actions(sid)
        w = [rng.randint(0, 3) for _ in acts]
        if not any(w):
            w[0] = 1
        prof[sid] = {x: F(k, sum(w)) for x, k in zip(acts, w)}
    return prof


def test_16_property_suites():
    rng = random.Random(16)
    violations = sum(not _knowledge_laws_hold(rng) for _ in range(300))
    bodies = [load(s).body for s in ASSESSMENTS]
    violations += sum(not _chain_holds(b.form, b.assessment) for b in bodies)
    forms = [b.form for b in bodies] + [load(s).body for s in ("three_player_spe", "kuhn_outcome", "chain_store")]
    for ef in forms:
        for _ in range(20):
            if sum(ex.outcome_distribution(ef, _random_behavior(ef, rng)).values()) != 1:
                violations += 1
    for b in bodies:
        for order in itertools.islice(rf.rationalizing_orders(b.form, b.assessment, cap=10**5), 30):
            rep = rf.choice_measurable(b.form, order)
            if rep is None:
                continue
            if rf.satisfies_cm(b.form, rep.F) != rf.satisfies_diamond(b.form, rep.F):
                violations += 1
            spread = {h: 3 * k + 1 for h, k in order.ranks().items()}
            if rf.satisfies_cm(b.form, spread) != rf.satisfies_diamond(b.form, spread):
                violations += 1
    record(16, "knowledge laws, implication chain, distribution normalization, CM <=> diamond: zero violations",
           violations == 0)
