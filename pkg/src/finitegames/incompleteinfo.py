"""Incomplete information: state-space scenarios, the Harsanyi transform,
Bayesian Nash equilibria and conversions to and from type spaces.

A scenario pairs an epistemic structure (one agent per player, same order)
with a game per state.  Either all states share strategy sets and carry a
strategic-form payoff table, or they share a game-tree shape and carry
per-state terminal payoffs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import epistemics, extensive, linprog, strategic
from .epistemics import EpistemicStructure
from .extensive import CHANCE, ExtensiveForm
from .lotteries import as_fraction
from .strategic import StrategicGame

POOLING = "pooling"
SEPARATING = "separating"
NEITHER = "neither"


class IncompleteInfoError(ValueError):
    pass


def _simultaneous_shape(players: Sequence[str], strategies: Sequence[Sequence[str]]) -> ExtensiveForm:
    """Players move in index order; each player's single information set
    hides every earlier choice."""
    decisions, infosets = {}, {}
    layer = [()]
    for i, p in enumerate(players):
        members = []
        for h in layer:
            decisions[h] = (p, tuple(strategies[i]))
            members.append(h)
        infosets[f"{p}"] = members
        layer = [h + (s,) for h in layer for s in strategies[i]]
    payoffs = {z: (0,) * len(players) for z in layer}
    return ExtensiveForm.build(players, decisions, payoffs, infosets)


@dataclass(frozen=True, eq=False)
class IncompleteScenario:
    """Epistemic structure + state-dependent game.

    ``payoffs[state]`` maps either strategy profiles (strategic scenarios,
    ``strategies`` set) or terminal histories of ``shape`` (dynamic
    scenarios) to payoff vectors.
    """

    structure: EpistemicStructure
    players: tuple
    payoffs: Mapping
    strategies: tuple | None = None
    shape: ExtensiveForm | None = None
    true_state: str | None = None

    @classmethod
    def strategic(cls, structure: EpistemicStructure, games: Mapping, true_state=None) -> "IncompleteScenario":
        """One :class:`StrategicGame` per state; strategy sets must agree."""
        games = {str(w): g for w, g in games.items()}
        first = next(iter(games.values()))
        for w, g in games.items():
            if g.strategies != first.strategies or g.players != first.players:
                raise IncompleteInfoError(f"the game at state {w} has different players or strategy sets")
        pay = {w: dict(g.payoff) for w, g in games.items()}
        return cls(structure, first.players, pay, first.strategies, None, true_state)

    @classmethod
    def dynamic(cls, structure: EpistemicStructure, shape: ExtensiveForm, payoffs: Mapping,
                true_state=None) -> "IncompleteScenario":
        """A shared tree whose terminal payoffs depend on the state
        (``payoffs[state][terminal]``, terminals as tuples or dotted strings)."""
        pay = {}
        for w, table in payoffs.items():
            pay[str(w)] = {extensive.parse_history(z): tuple(as_fraction(v) for v in vec) for z, vec in table.items()}
        return cls(structure, shape.players, pay, None, shape, true_state)

    def __post_init__(self):
        S = self.structure
        if S.beliefs is None:
            raise IncompleteInfoError("a scenario needs beliefs")
        if len(S.agents) != len(self.players):
            raise IncompleteInfoError("the structure needs one agent per player")
        if (self.strategies is None) == (self.shape is None):
            raise IncompleteInfoError("give either shared strategy sets or a shared tree shape")
        if set(self.payoffs) != set(S.states):
            raise IncompleteInfoError("payoffs must be given for every state and only those")
        if self.true_state is not None and str(self.true_state) not in S.states:
            raise IncompleteInfoError(f"true state {self.true_state!r} is not a state")
        keys = (set(itertools.product(*self.strategies)) if self.shape is None else set(self.shape.terminals))
        for w in S.states:
            table = self.payoffs[w]
            missing = keys - set(table)
            if missing:
                raise IncompleteInfoError(f"state {w} lacks payoffs for {sorted(missing)[:3]}")
            for k, vec in table.items():
                if k not in keys:
                    raise IncompleteInfoError(f"state {w} has a payoff for unknown outcome {k}")
                if len(vec) != len(self.players):
                    raise IncompleteInfoError(f"state {w}: payoff vector for {k} has the wrong length")

    @property
    def dynamic_form(self) -> bool:
        return self.shape is not None

    def tree(self) -> ExtensiveForm:
        """The shared shape (for strategic scenarios: the simultaneous tree)."""
        if self.shape is not None:
            return self.shape
        return _simultaneous_shape(self.players, self.strategies)

    def game_at(self, w: str) -> StrategicGame:
        """The state's game in strategic form."""
        if self.shape is None:
            return StrategicGame(self.players, self.strategies, self.payoffs[w])
        return extensive.to_strategic_form(self._state_tree(w))

    def _state_tree(self, w: str) -> ExtensiveForm:
        sh = self.shape
        return ExtensiveForm(sh.players, sh.actions, sh.mover, sh.chance_probs, sh.infoset_of,
                             sh.infosets, dict(self.payoffs[w]), sh.outcome_labels)

    def terminal_payoff(self, w: str, z: tuple) -> tuple:
        return tuple(as_fraction(v) for v in self.payoffs[w][z])


# ---------------------------------------------------------------- transform


def _cell_name(S: EpistemicStructure, cell) -> str:
    return "+".join(S.order(cell))


def harsanyi_transform(sc: IncompleteScenario) -> ExtensiveForm:
    """Nature draws the state from the common prior, then the shared tree
    is played; each player's information sets join the copies of a shared
    set across the states of one of her cells."""
    S = sc.structure
    prior = epistemics.common_prior(S)
    if prior is None:
        raise IncompleteInfoError("no common prior exists, so the Harsanyi transformation cannot be carried out")
    shape = sc.tree()
    # states the prior rules out get no Nature branch (chance edges carry
    # positive probability); every cell keeps at least one state
    live = [w for w in S.states if prior[w] > 0]
    decisions = {(): (CHANCE, {w: prior[w] for w in live})}
    for w in live:
        for h in shape.decision_histories:
            who = shape.mover[h]
            if who == CHANCE:
                decisions[(w,) + h] = (CHANCE, dict(shape.chance_probs[h]))
            else:
                decisions[(w,) + h] = (shape.players[who], shape.actions[h])
    payoffs = {}
    for w in live:
        for z in shape.terminals:
            payoffs[(w,) + z] = sc.payoffs[w][z]
    infosets = {}
    for sid, members in shape.infosets.items():
        i = shape.infoset_player(sid)
        cells = S.partitions[S.agents[i]]
        for cell in cells:
            states = [w for w in S.order(cell) if prior[w] > 0]
            name = f"{sid}[{_cell_name(S, cell)}]" if len(cells) > 1 else sid
            infosets[name] = [(w,) + h for w in states for h in members]
    ef = ExtensiveForm.build(shape.players, decisions, payoffs, infosets)
    extensive.require_valid(ef)
    return ef


def bayesian_nash(sc: IncompleteScenario) -> list:
    """Pure Bayesian Nash equilibria as strategy-label tuples of the
    transformed game."""
    ef = harsanyi_transform(sc)
    return strategic.pure_nash(extensive.to_strategic_form(ef))


def _plans(sc: IncompleteScenario, ef: ExtensiveForm, labels: Sequence[str]) -> dict:
    """Per player, per cell, the tuple of choices at the shared sets."""
    prof = extensive.profile_from_labels(ef, labels)
    S = sc.structure
    shape = sc.tree()
    out = {}
    for i in range(len(sc.players)):
        sids = shape.player_infosets(i)
        per = {}
        for cell in S.partitions[S.agents[i]]:
            w = next(v for v in S.order(cell) if v in ef.chance_probs[()])
            row = []
            for sid in sids:
                h = (w,) + shape.infosets[sid][0]
                dist = prof[ef.infoset_of[h]]
                row.append(next(a for a, p in dist.items() if p == 1))
            per[cell] = tuple(row)
        out[i] = per
    return out


def format_equilibrium(sc: IncompleteScenario, labels: Sequence[str]) -> str:
    """``((T,B),R)``: a tuple of per-cell choices for players with several
    cells, the plain choice otherwise."""
    ef = harsanyi_transform(sc)
    plans = _plans(sc, ef, labels)
    S = sc.structure
    parts = []
    for i in range(len(sc.players)):
        cells = S.partitions[S.agents[i]]
        chunks = [plan[0] if len(plan) == 1 else f"({','.join(plan)})" for plan in (plans[i][c] for c in cells)]
        parts.append(chunks[0] if len(chunks) == 1 else f"({','.join(chunks)})")
    return f"({','.join(parts)})"


def played_at(sc: IncompleteScenario, labels: Sequence[str], w: str) -> tuple:
    """The shared-game choices made at state ``w`` under an equilibrium."""
    ef = harsanyi_transform(sc)
    plans = _plans(sc, ef, labels)
    S = sc.structure
    return tuple(plans[i][S.cell(i, w)] for i in range(len(sc.players)))


def informed_player(sc: IncompleteScenario) -> int:
    S = sc.structure
    rich = [i for i in range(len(sc.players)) if len(S.partitions[S.agents[i]]) > 1]
    if len(rich) != 1:
        raise IncompleteInfoError("classification needs exactly one player with a non-trivial partition")
    return rich[0]


def classify(sc: IncompleteScenario, labels: Sequence[str], informed=None) -> str:
    """Pooling when the informed player's plan is the same in every cell,
    separating when the plans in distinct cells are pairwise distinct."""
    if informed is None:
        i = informed_player(sc)
    else:
        i = sc.structure.agents.index(sc.structure.agent(informed))
    ef = harsanyi_transform(sc)
    plans = list(_plans(sc, ef, labels)[i].values())
    if len(set(plans)) == 1:
        return POOLING
    if len(set(plans)) == len(plans):
        return SEPARATING
    return NEITHER


# --------------------------------------------------------------- type spaces


@dataclass(frozen=True, eq=False)
class TypeSpace:
    """Finite type space.

    ``utilities[t][s]`` is the payoff vector at type profile ``t`` and
    strategy profile ``s``; ``beliefs[i][t_i]`` maps profiles of the other
    players' types (tuples in player order, ``i`` left out) to
    probabilities.  ``relevant`` is the set Y of relevant type profiles;
    ``None`` means every profile (utilities then cover all of T).
    """

    players: tuple
    types: tuple
    strategies: tuple
    utilities: Mapping
    beliefs: Mapping
    relevant: tuple | None = None

    @classmethod
    def build(cls, players, types, strategies, utilities: Mapping, beliefs: Mapping, relevant=None) -> "TypeSpace":
        players = tuple(str(p) for p in players)
        types = tuple(tuple(str(t) for t in ts) for ts in types)
        strategies = tuple(tuple(str(s) for s in ss) for ss in strategies)
        U = {}
        for t, table in utilities.items():
            U[tuple(map(str, t))] = {tuple(map(str, s)): tuple(as_fraction(v) for v in vec) for s, vec in table.items()}
        B = {}
        for i, per in beliefs.items():
            i = players.index(str(i)) if not isinstance(i, int) else i
            B[i] = {str(ti): {tuple(map(str, o)) if isinstance(o, (tuple, list)) else (str(o),): as_fraction(p)
                              for o, p in d.items()} for ti, d in per.items()}
        Y = None if relevant is None else tuple(tuple(map(str, t)) for t in relevant)
        ts = cls(players, types, strategies, U, B, Y)
        ts.check()
        return ts

    @classmethod
    def own_payoff(cls, players, types, strategies, utilities: Mapping, beliefs: Mapping) -> "TypeSpace":
        """Each player's utility depends on her own type only:
        ``utilities[i][t_i][s]`` is a number."""
        players = tuple(str(p) for p in players)
        U = {}
        for t in itertools.product(*types):
            table = {}
            for s in itertools.product(*strategies):
                table[s] = tuple(utilities[i][t[i]][s] for i in range(len(players)))
            U[t] = table
        return cls.build(players, types, strategies, U, {i: beliefs[i] for i in range(len(players))})

    @property
    def n(self) -> int:
        return len(self.players)

    def profiles(self) -> list:
        return list(itertools.product(*self.types))

    def Y(self) -> tuple:
        return self.relevant if self.relevant is not None else tuple(self.profiles())

    def belief(self, i: int, t: tuple) -> Fraction:
        rest = t[:i] + t[i + 1:]
        return self.beliefs[i][t[i]].get(rest, Fraction(0))

    def check(self) -> None:
        if len(self.types) != self.n or len(self.strategies) != self.n:
            raise IncompleteInfoError("types and strategies need one entry per player")
        Y = set(self.Y())
        T = set(self.profiles())
        if Y - T:
            raise IncompleteInfoError(f"relevant profiles {sorted(Y - T)[:3]} are not type profiles")
        keys = set(itertools.product(*self.strategies))
        for t in Y:
            if t not in self.utilities:
                raise IncompleteInfoError(f"no utilities for type profile {t}")
            if set(self.utilities[t]) != keys:
                raise IncompleteInfoError(f"utilities at {t} do not cover the strategy profiles exactly")
        for i in range(self.n):
            if set(self.beliefs.get(i, {})) != set(self.types[i]):
                raise IncompleteInfoError(f"player {self.players[i]} needs one belief per type")
            others = set(itertools.product(*(self.types[:i] + self.types[i + 1:])))
            for ti, d in self.beliefs[i].items():
                if set(d) - others:
                    raise IncompleteInfoError(f"belief of type {ti} mentions unknown profiles")
                if any(p < 0 for p in d.values()) or sum(d.values(), Fraction(0)) != 1:
                    raise IncompleteInfoError(f"belief of type {ti} is not a distribution")
                for o, p in d.items():
                    t = o[:i] + (ti,) + o[i:]
                    if p > 0 and t not in Y:
                        raise IncompleteInfoError(f"type {ti} believes in irrelevant profile {t}")

    def own_payoff_knowledge(self) -> bool:
        for i in range(self.n):
            seen = {}
            for t in self.Y():
                row = {s: vec[i] for s, vec in self.utilities[t].items()}
                if seen.setdefault(t[i], row) != row:
                    return False
        return True

    def support(self) -> list:
        """Profiles some type assigns positive probability to."""
        return [t for t in self.Y() if any(self.belief(i, t) > 0 for i in range(self.n))]


def profile_label(t: Sequence[str]) -> str:
    """``aab`` for one-letter types, ``x,y,z`` otherwise."""
    return ("" if all(len(x) == 1 for x in t) else ",").join(t)


def state_to_type(sc: IncompleteScenario) -> TypeSpace:
    """One type per cell; Y is the image of the states."""
    S = sc.structure
    n = len(sc.players)
    types = tuple(tuple(_cell_name(S, c) for c in S.partitions[S.agents[i]]) for i in range(n))
    prof_of = {w: tuple(_cell_name(S, S.cell(i, w)) for i in range(n)) for w in S.states}
    games = {w: sc.game_at(w) for w in S.states}
    strategies = games[S.states[0]].strategies
    U, origin = {}, {}
    for w in S.states:
        t = prof_of[w]
        if t in U and U[t] != games[w].payoff:
            raise IncompleteInfoError(
                f"states {origin[t]} and {w} share type profile {profile_label(t)} but differ in payoffs")
        U.setdefault(t, dict(games[w].payoff))
        origin.setdefault(t, w)
    B = {}
    for i in range(n):
        B[i] = {}
        for cell in S.partitions[S.agents[i]]:
            name = _cell_name(S, cell)
            d = {}
            for w in S.order(cell):
                t = prof_of[w]
                rest = t[:i] + t[i + 1:]
                d[rest] = d.get(rest, Fraction(0)) + S.beliefs[S.agents[i]][cell][w]
            B[i][name] = d
    Y = tuple(dict.fromkeys(prof_of[w] for w in S.states))
    return TypeSpace.build(sc.players, types, strategies, U, B, Y)


def type_to_state(ts: TypeSpace) -> IncompleteScenario:
    """States are the relevant type profiles (when Y is left implicit, the
    profiles some type considers possible); a player's cell collects the
    states sharing her type."""
    states = list(ts.Y()) if ts.relevant is not None else ts.support()
    labels = [profile_label(t) for t in states]
    partitions, beliefs = {}, {}
    for i in range(ts.n):
        cells, bels = [], []
        for ti in ts.types[i]:
            cell = [lbl for lbl, t in zip(labels, states) if t[i] == ti]
            if not cell:
                continue
            cells.append(cell)
            bels.append({lbl: ts.belief(i, t) for lbl, t in zip(labels, states) if t[i] == ti})
        partitions[ts.players[i]] = cells
        beliefs[ts.players[i]] = bels
    S = EpistemicStructure.build(labels, partitions, beliefs)
    games = {lbl: StrategicGame(ts.players, ts.strategies, ts.utilities[t]) for lbl, t in zip(labels, states)}
    return IncompleteScenario.strategic(S, games)


def harsanyi_consistent(ts: TypeSpace):
    """A prior on T conditioning to every type's belief, or ``None``."""
    T = ts.profiles()
    idx = {t: k for k, t in enumerate(T)}
    n = len(T)
    cons = [([1] * n, "==", 1)]
    strict = []
    for i in range(ts.n):
        for ti in ts.types[i]:
            block = [t for t in T if t[i] == ti]
            for t in block:
                row = {idx[t]: Fraction(1)}
                p = ts.belief(i, t)
                for s in block:
                    row[idx[s]] = row.get(idx[s], Fraction(0)) - p
                cons.append((row, "==", 0))
            strict.append(({idx[t]: 1 for t in block}, ">", 0))
    res = linprog.strict_feasible(n, cons, strict)
    if res is None:
        return None
    x, _ = res
    return {t: x[idx[t]] for t in T}


# -------------------------------------------------------------- isomorphism


def isomorphism(a: IncompleteScenario, b: IncompleteScenario):
    """A state bijection ``{state of a: state of b}`` preserving partitions,
    beliefs and (strategic-form) payoffs, or ``None``."""
    Sa, Sb = a.structure, b.structure
    if a.players != b.players or len(Sa.states) != len(Sb.states):
        return None
    ga = {w: a.game_at(w) for w in Sa.states}
    gb = {w: b.game_at(w) for w in Sb.states}
    if ga[Sa.states[0]].strategies != gb[Sb.states[0]].strategies:
        return None
    n = len(a.players)

    def compatible(w, v):
        if ga[w].payoff != gb[v].payoff:
            return False
        for i in range(n):
            if sorted(Sa.belief(i, w).values()) != sorted(Sb.belief(i, v).values()):
                return False
            if Sa.belief(i, w)[w] != Sb.belief(i, v)[v]:
                return False
        return True

    cand = {w: [v for v in Sb.states if compatible(w, v)] for w in Sa.states}
    order = sorted(Sa.states, key=lambda w: len(cand[w]))
    mapping: dict = {}
    used: set = set()

    def consistent(w, v):
        for x, y in mapping.items():
            for i in range(n):
                if (Sa.cell(i, w) == Sa.cell(i, x)) != (Sb.cell(i, v) == Sb.cell(i, y)):
                    return False
        return True

    def search(k):
        if k == len(order):
            return True
        w = order[k]
        for v in cand[w]:
            if v in used or not consistent(w, v):
                continue
            mapping[w] = v
            used.add(v)
            if search(k + 1):
                return True
            del mapping[w]
            used.discard(v)
        return False

    return dict(mapping) if search(0) else None
