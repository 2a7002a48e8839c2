"""Finite games in strategic form.

Players are addressed by 0-based index; their display names live in
``StrategicGame.players``.  A *profile* is a tuple of strategy labels, one per
player.  Payoffs are exact ``Fraction`` vectors.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import linprog
from .lotteries import as_fraction


class GameError(ValueError):
    pass


STRICT = "strict"
WEAK = "weak"
EQUIVALENT = "equivalent"
NONE = "none"


@dataclass(frozen=True)
class StrategicGame:
    players: tuple
    strategies: tuple
    payoff: Mapping = field(repr=False)
    outcome: Mapping | None = field(default=None, repr=False)
    utilities: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        players = tuple(str(p) for p in self.players)
        strategies = tuple(tuple(str(s) for s in ss) for ss in self.strategies)
        object.__setattr__(self, "players", players)
        object.__setattr__(self, "strategies", strategies)
        if len(players) != len(strategies):
            raise GameError("one strategy list per player is required")
        for ss in strategies:
            if not ss:
                raise GameError("every player needs at least one strategy")
            if len(set(ss)) != len(ss):
                raise GameError("strategy labels must be distinct per player")
        pay = {}
        for prof in itertools.product(*strategies):
            if prof not in self.payoff:
                raise GameError(f"missing payoff for profile {prof}")
            vec = tuple(as_fraction(v) for v in self.payoff[prof])
            if len(vec) != len(players):
                raise GameError(f"payoff vector for {prof} has the wrong length")
            pay[prof] = vec
        object.__setattr__(self, "payoff", pay)
        if self.outcome is not None and self.utilities is not None:
            for prof, o in self.outcome.items():
                for i, U in enumerate(self.utilities):
                    if U(o) != pay[prof][i]:
                        raise GameError("payoffs disagree with the outcome map and utilities")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_function(cls, players, strategies, fn: Callable[[tuple], Sequence]) -> "StrategicGame":
        strategies = [list(map(str, ss)) for ss in strategies]
        pay = {prof: tuple(fn(prof)) for prof in itertools.product(*strategies)}
        return cls(tuple(players), tuple(map(tuple, strategies)), pay)

    @classmethod
    def bimatrix(cls, rows: Sequence[str], cols: Sequence[str], cells: Sequence[Sequence[Sequence]],
                 players=("1", "2")) -> "StrategicGame":
        """Two-player game from a row-major grid of payoff pairs."""
        pay = {}
        for r, row in zip(rows, cells):
            if len(row) != len(cols):
                raise GameError("ragged payoff grid")
            for c, cell in zip(cols, row):
                pay[(str(r), str(c))] = tuple(cell)
        return cls(tuple(players), (tuple(rows), tuple(cols)), pay)

    @classmethod
    def from_frame(cls, players, strategies, outcome: Mapping, utilities) -> "StrategicGame":
        pay = {tuple(map(str, prof)): tuple(U(o) for U in utilities) for prof, o in outcome.items()}
        return cls(tuple(players), tuple(map(tuple, strategies)), pay,
                   {tuple(map(str, k)): v for k, v in outcome.items()}, tuple(utilities))

    # -- accessors --------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.players)

    def u(self, i: int, profile: Sequence[str]) -> Fraction:
        return self.payoff[tuple(profile)][i]

    def profiles(self, restriction=None) -> Iterable[tuple]:
        sets = restriction if restriction is not None else self.strategies
        return itertools.product(*sets)

    def player_index(self, who) -> int:
        if isinstance(who, int):
            if not 0 <= who < self.n:
                raise GameError(f"no player with index {who}")
            return who
        try:
            return self.players.index(str(who))
        except ValueError:
            raise GameError(f"unknown player {who!r}") from None

    def check_strategy(self, i: int, s: str) -> None:
        if s not in self.strategies[i]:
            raise GameError(f"unknown strategy {s!r} for player {self.players[i]}")

    def restrict(self, sets: Sequence[Iterable[str]]) -> "StrategicGame":
        keep = [tuple(s for s in self.strategies[i] if s in set(sets[i])) for i in range(self.n)]
        pay = {p: self.payoff[p] for p in itertools.product(*keep)}
        return StrategicGame(self.players, tuple(keep), pay)


def _others(G: StrategicGame, i: int, restriction=None):
    sets = restriction if restriction is not None else G.strategies
    return list(itertools.product(*(sets[j] for j in range(G.n) if j != i)))


def _with(i: int, s: str, rest: tuple) -> tuple:
    return rest[:i] + (s,) + rest[i:]


# ----------------------------------------------------------------- dominance


def dominance(G: StrategicGame, i: int, a: str, b: str, restriction=None) -> str:
    """How ``a`` compares with ``b`` for player ``i``.

    Returns ``strict`` (a better against everything), ``weak`` (never worse,
    sometimes better, not strict), ``equivalent`` (always equal) or ``none``.
    """
    G.check_strategy(i, a)
    G.check_strategy(i, b)
    better = worse = False
    all_better = True
    for rest in _others(G, i, restriction):
        ua, ub = G.u(i, _with(i, a, rest)), G.u(i, _with(i, b, rest))
        if ua > ub:
            better = True
        else:
            all_better = False
            if ua < ub:
                worse = True
    if all_better:
        return STRICT
    if worse:
        return NONE
    return WEAK if better else EQUIVALENT


def dominant_strategies(G: StrategicGame, i: int, mode: str = STRICT) -> set:
    out = set()
    for a in G.strategies[i]:
        ok = True
        for b in G.strategies[i]:
            if a == b:
                continue
            d = dominance(G, i, a, b)
            if mode == STRICT and d != STRICT:
                ok = False
            elif mode == WEAK and d == NONE:
                ok = False
            if not ok:
                break
        if ok:
            out.add(a)
    return out


def dominant_equilibrium(G: StrategicGame):
    """The dominant-strategy equilibrium as ``(profile, "strict"|"weak")``."""
    prof = []
    kind = STRICT
    for i in range(G.n):
        strict = dominant_strategies(G, i, STRICT)
        if strict:
            prof.append(sorted(strict)[0])
            continue
        weak = [s for s in G.strategies[i] if s in dominant_strategies(G, i, WEAK)]
        if not weak:
            return None
        prof.append(weak[0])
        kind = WEAK
    return tuple(prof), kind


def pareto(G: StrategicGame, s: Sequence[str], t: Sequence[str]) -> str:
    """Is ``s`` strictly/weakly Pareto superior to ``t``?"""
    ps, pt = G.payoff[tuple(s)], G.payoff[tuple(t)]
    if all(x > y for x, y in zip(ps, pt)):
        return STRICT
    if all(x >= y for x, y in zip(ps, pt)) and any(x > y for x, y in zip(ps, pt)):
        return WEAK
    return NONE


# ---------------------------------------------------------- mixed strategies


@dataclass(frozen=True)
class MixedStrategy:
    player: int
    probs: tuple  # ((label, prob), ...) in strategy order, zero entries dropped

    def __init__(self, player: int, probs: Mapping | Iterable[tuple]):
        items = probs.items() if isinstance(probs, Mapping) else probs
        clean = [(str(s), as_fraction(p)) for s, p in items]
        if any(p < 0 for _, p in clean):
            raise GameError("negative probability")
        if sum((p for _, p in clean), Fraction(0)) != 1:
            raise GameError("mixed strategy probabilities must sum to 1")
        object.__setattr__(self, "player", player)
        object.__setattr__(self, "probs", tuple((s, p) for s, p in clean if p != 0))

    @classmethod
    def pure(cls, player: int, s: str) -> "MixedStrategy":
        return cls(player, {s: 1})

    def prob(self, s: str) -> Fraction:
        return dict(self.probs).get(s, Fraction(0))

    @property
    def support(self) -> frozenset:
        return frozenset(s for s, _ in self.probs)

    def as_dict(self) -> dict:
        return dict(self.probs)


def _as_mixed(G: StrategicGame, i: int, m) -> MixedStrategy:
    if isinstance(m, MixedStrategy):
        return m
    if isinstance(m, str):
        return MixedStrategy.pure(i, m)
    return MixedStrategy(i, m)


def expected_payoff(G: StrategicGame, i: int, profile: Sequence) -> Fraction:
    """Expected payoff of player ``i`` under independent mixtures."""
    mixes = [_as_mixed(G, j, m) for j, m in enumerate(profile)]
    for j, m in enumerate(mixes):
        for s in m.support:
            G.check_strategy(j, s)
    total = Fraction(0)
    for combo in itertools.product(*(m.probs for m in mixes)):
        pr = Fraction(1)
        for _, p in combo:
            pr *= p
        total += pr * G.u(i, tuple(s for s, _ in combo))
    return total


def best_replies(G: StrategicGame, i: int, opponents: Sequence) -> tuple:
    """Pure best replies of ``i`` against the others' mixtures.

    ``opponents`` lists the mixtures of the other players in player order
    (i.e. without an entry for ``i``).  Returns ``(set, value)``.
    """
    opp = list(opponents)
    if len(opp) != G.n - 1:
        raise GameError("one mixture per opponent expected")
    values = {}
    for s in G.strategies[i]:
        prof = opp[:i] + [s] + opp[i:]
        prof = [_as_mixed(G, j, m) for j, m in enumerate(prof)]
        values[s] = expected_payoff(G, i, prof)
    best = max(values.values())
    return {s for s, v in values.items() if v == best}, best


def is_nash(G: StrategicGame, profile: Sequence) -> bool:
    mixes = [_as_mixed(G, j, m) for j, m in enumerate(profile)]
    for i in range(G.n):
        br, _ = best_replies(G, i, mixes[:i] + mixes[i + 1:])
        if not mixes[i].support <= br:
            return False
    return True


def pure_nash(G: StrategicGame, restriction=None) -> list:
    """All pure Nash equilibria, in profile order."""
    sets = restriction if restriction is not None else G.strategies
    out = []
    for prof in itertools.product(*sets):
        ok = True
        for i in range(G.n):
            ui = G.u(i, prof)
            for s in G.strategies[i]:
                if G.u(i, prof[:i] + (s,) + prof[i + 1:]) > ui:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(prof)
    return out


# --------------------------------------------------- mixed dominance (LP)


def dominated_by_mixed(G: StrategicGame, i: int, s: str, restriction=None):
    """A mixture of ``i``'s other strategies that strictly dominates ``s``.

    Among all dominating mixtures the one maximizing the worst-case
    advantage is returned.  ``None`` means no such mixture exists; in that
    case :func:`best_response_belief` produces the supporting belief.
    """
    sets = [list(x) for x in (restriction if restriction is not None else G.strategies)]
    G.check_strategy(i, s)
    if s not in sets[i]:
        raise GameError(f"{s!r} is not in the restriction for player {G.players[i]}")
    own = [a for a in sets[i] if a != s]
    if not own:
        return None
    rests = _others(G, i, sets)
    n = len(own) + 1  # mixture weights, then the margin t
    cons = [([1] * len(own) + [0], "==", 1)]
    for rest in rests:
        row = [G.u(i, _with(i, a, rest)) for a in own] + [-1]
        cons.append((row, ">=", G.u(i, _with(i, s, rest))))
    res = linprog.solve(n, cons, objective={n - 1: 1}, maximize=True)
    if not res.ok or res.value <= 0:
        return None
    return MixedStrategy(i, list(zip(own, res.x[:-1])))


def best_response_belief(G: StrategicGame, i: int, s: str, restriction=None):
    """A (possibly correlated) belief over opponents' profiles under which ``s``
    is a best reply, as ``{opponent_profile: prob}``; ``None`` if none exists.

    The lexicographically smallest vertex of the belief region is chosen.
    """
    sets = [list(x) for x in (restriction if restriction is not None else G.strategies)]
    rests = _others(G, i, sets)
    n = len(rests)
    cons = [([1] * n, "==", 1)]
    for a in sets[i]:
        if a == s:
            continue
        row = [G.u(i, _with(i, s, r)) - G.u(i, _with(i, a, r)) for r in rests]
        cons.append((row, ">=", 0))
    x = linprog.lexmin(n, cons)
    if x is None:
        return None
    return {r: p for r, p in zip(rests, x) if p != 0}


# ------------------------------------------------------- iterated deletion


@dataclass(frozen=True)
class EliminationTrace:
    rounds: tuple  # ((round, player, deleted, dominator), ...)
    survivors: tuple  # per-player tuples of labels

    def profiles(self) -> list:
        return list(itertools.product(*self.survivors))


STRICT_PURE = "strict_pure"
WEAK_SIMULTANEOUS = "weak_simultaneous"
STRICT_MIXED = "strict_mixed"


def _dominator(G, i, s, sets, mode):
    if mode == STRICT_MIXED:
        pure = next((a for a in sets[i] if a != s and dominance(G, i, a, s, sets) == STRICT), None)
        if pure is not None:
            return pure
        return dominated_by_mixed(G, i, s, sets)
    for a in sets[i]:
        if a == s:
            continue
        d = dominance(G, i, a, s, sets)
        if d == STRICT or (mode == WEAK_SIMULTANEOUS and d == WEAK):
            return a
    return None


def iterated_deletion(G: StrategicGame, mode: str = STRICT_PURE) -> EliminationTrace:
    if mode not in (STRICT_PURE, WEAK_SIMULTANEOUS, STRICT_MIXED):
        raise GameError(f"unknown deletion mode {mode!r}")
    sets = [list(ss) for ss in G.strategies]
    rounds = []
    k = 0
    while True:
        k += 1
        doomed = []
        for i in range(G.n):
            for s in sets[i]:
                dom = _dominator(G, i, s, sets, mode)
                if dom is not None:
                    doomed.append((i, s, dom))
        if not doomed:
            break
        for i, s, dom in doomed:
            rounds.append((k, i, s, dom))
        for i, s, _ in doomed:
            sets[i].remove(s)
    return EliminationTrace(tuple(rounds), tuple(tuple(ss) for ss in sets))


def random_strict_deletion(G: StrategicGame, rng: random.Random) -> tuple:
    """Delete strictly dominated pure strategies one at a time in random order.

    Used to check that the end result does not depend on the order.
    """
    sets = [list(ss) for ss in G.strategies]
    while True:
        cands = [(i, s) for i in range(G.n) for s in sets[i]
                 if _dominator(G, i, s, sets, STRICT_PURE) is not None]
        if not cands:
            return tuple(tuple(ss) for ss in sets)
        i, s = rng.choice(cands)
        sets[i].remove(s)


# ------------------------------------------------------ two-player mixed Nash


@dataclass(frozen=True)
class MixedComponent:
    """A non-isolated set of equilibria sharing one support pair.

    ``constraints`` are human-readable linear conditions in the unknown
    probabilities; ``sample`` is one member of the set.
    """

    supports: tuple
    constraints: tuple
    sample: tuple


def _side(G, i, own_support, other_support):
    """Mixtures of the *other* player over ``other_support`` making ``i``
    indifferent on ``own_support`` and not wanting to leave it.

    Returns (status, point or None, free-dimension) where the unknowns are
    the other player's probabilities followed by i's value.
    """
    j = 1 - i
    k = len(other_support)

    def pay(a, b):
        prof = (a, b) if i == 0 else (b, a)
        return G.u(i, prof)

    A, b = [], []
    for a in own_support:
        A.append([pay(a, o) for o in other_support] + [-1])
        b.append(0)
    A.append([1] * k + [0])
    b.append(1)
    sol = linprog.solve_equations(A, b)
    if sol is None:
        return None
    x0, free = sol
    # Feasibility with strict positivity on the support and best-reply
    # inequalities off it.  The value variable can be negative, so split it.
    n = k + 2
    cons = [([pay(a, o) for o in other_support] + [-1, 1], "==", 0) for a in own_support]
    cons.append(([1] * k + [0, 0], "==", 1))
    for a in G.strategies[i]:
        if a in own_support:
            continue
        cons.append(([pay(a, o) for o in other_support] + [-1, 1], "<=", 0))
    strict = [({t: 1}, ">", 0) for t in range(k)]
    found = linprog.strict_feasible(n, cons, strict)
    if found is None:
        return None
    x, _ = found
    point = tuple(x[:k])
    return point, len(free)


def mixed_nash_2p(G: StrategicGame) -> list:
    """Every equilibrium of a two-player game by support enumeration.

    Isolated equilibria come back as pairs of :class:`MixedStrategy`;
    continua come back as :class:`MixedComponent`.  Ordering is
    lexicographic by (row-support indices, column-support indices).
    """
    if G.n != 2:
        raise GameError("support enumeration needs exactly two players")
    rows, cols = G.strategies

    def subsets(labels):
        idx = range(len(labels))
        for r in range(1, len(labels) + 1):
            for c in itertools.combinations(idx, r):
                yield c

    found = []
    for s1 in subsets(rows):
        for s2 in subsets(cols):
            S1 = [rows[t] for t in s1]
            S2 = [cols[t] for t in s2]
            side2 = _side(G, 0, S1, S2)  # column mixture making row player indifferent
            if side2 is None:
                continue
            side1 = _side(G, 1, S2, S1)
            if side1 is None:
                continue
            (p2, free2), (p1, free1) = side2, side1
            m1 = MixedStrategy(0, list(zip(S1, p1)))
            m2 = MixedStrategy(1, list(zip(S2, p2)))
            key = (s1, s2)
            if free1 == 0 and free2 == 0:
                found.append((key, (m1, m2)))
            else:
                desc = []
                for who, own, other in ((0, S1, S2), (1, S2, S1)):
                    var = "q" if who == 0 else "p"
                    desc.append(f"player {G.players[who]} indifferent on {{{','.join(own)}}} "
                                f"given {var} over {{{','.join(other)}}}")
                found.append((key, MixedComponent((tuple(S1), tuple(S2)), tuple(desc), (m1, m2))))
    found.sort(key=lambda kv: kv[0])
    return [v for _, v in found]


# ---------------------------------------------------------------- mechanisms


def _second_highest(bids: Sequence[Fraction]) -> Fraction:
    srt = sorted(bids, reverse=True)
    return srt[1]


def auction_winner(bids: Sequence, tie="lowest-index") -> int:
    """Index of the winning bidder under the given tie rule.

    ``tie`` is ``"lowest-index"`` or an int naming the player (0-based)
    who wins any tie she is part of; other ties fall back to lowest index.
    """
    top = max(bids)
    tied = [k for k, b in enumerate(bids) if b == top]
    if isinstance(tie, int) and tie in tied:
        return tie
    return tied[0]


def second_price_auction(values: Sequence, bid_grid: Sequence, tie="lowest-index",
                         first_price: bool = False) -> StrategicGame:
    """Sealed-bid auction over a finite bid grid.

    Winner pays the second-highest bid (or her own bid when
    ``first_price``); losers get 0.
    """
    if not bid_grid:
        raise GameError("empty bid grid")
    vals = [as_fraction(v) for v in values]
    if len(vals) < 2:
        raise GameError("an auction needs at least two bidders")
    grid = [as_fraction(b) for b in bid_grid]
    labels = [_num_label(b) for b in grid]
    lookup = dict(zip(labels, grid))

    def fn(prof):
        bids = [lookup[s] for s in prof]
        w = auction_winner(bids, tie)
        price = bids[w] if first_price else _second_highest(bids)
        return [vals[k] - price if k == w else Fraction(0) for k in range(len(vals))]

    return StrategicGame.from_function([str(k + 1) for k in range(len(vals))], [labels] * len(vals), fn)


def _num_label(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PivotalResult:
    decision: bool
    taxes: tuple
    pivotal: frozenset  # 1-based individual numbers


def pivotal_mechanism(costs: Sequence, reports: Sequence) -> PivotalResult:
    c = [as_fraction(x) for x in costs]
    w = [as_fraction(x) for x in reports]
    if len(c) != len(w):
        raise GameError("costs and reports differ in length")
    C = sum(c, Fraction(0))
    W = sum(w, Fraction(0))
    yes = W > C
    taxes, piv = [], set()
    for i in range(len(c)):
        wo = W - w[i]
        co = C - c[i]
        if (wo > co) != yes:
            piv.add(i + 1)
            taxes.append(abs(wo - co))
        else:
            taxes.append(Fraction(0))
    return PivotalResult(yes, tuple(taxes), frozenset(piv))


def pivotal_game(costs: Sequence, values: Sequence, grids: Sequence[Sequence]) -> StrategicGame:
    """Strategic game induced by the pivotal mechanism on finite report grids.

    Payoffs are changes in wealth: ``v_i - c_i - tax_i`` when the project is
    carried out and ``-tax_i`` otherwise.
    """
    c = [as_fraction(x) for x in costs]
    v = [as_fraction(x) for x in values]
    grid_vals = [[as_fraction(x) for x in g] for g in grids]
    labels = [[_num_label(x) for x in dict.fromkeys(g)] for g in grid_vals]

    def fn(prof):
        w = [as_fraction(s) for s in prof]
        r = pivotal_mechanism(c, w)
        return [(v[i] - c[i] if r.decision else Fraction(0)) - r.taxes[i] for i in range(len(c))]

    return StrategicGame.from_function([str(k + 1) for k in range(len(c))], labels, fn)


def verify_truthful_dominance(G: StrategicGame, truths: Sequence) -> bool:
    """True iff every player's truthful report is weakly dominant in ``G``."""
    for i, t in enumerate(truths):
        label = _num_label(as_fraction(t))
        if label not in G.strategies[i]:
            raise GameError(f"truthful report {label} is not on player {G.players[i]}'s grid")
        if label not in dominant_strategies(G, i, WEAK):
            return False
    return True
