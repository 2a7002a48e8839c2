"""Partitional knowledge and belief over a finite set of states.

States are string labels, events are ``frozenset``s of states and each
agent's information is a partition of the state set.  Beliefs, when present,
are one exact distribution per information cell.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linprog, strategic
from .lotteries import as_fraction
from .strategic import StrategicGame


class EpistemicError(ValueError):
    pass


def event(states: Iterable[str]) -> frozenset:
    return frozenset(str(s) for s in states)


@dataclass(frozen=True, eq=False)
class EpistemicStructure:
    """States, one partition per agent and optional per-cell beliefs.

    ``partitions`` maps agent name → tuple of cells (frozensets);
    ``beliefs`` maps agent name → {cell: {state: prob}}.
    """

    states: tuple
    agents: tuple
    partitions: Mapping
    beliefs: Mapping | None = None

    @classmethod
    def build(cls, states: Sequence[str], partitions: Mapping, beliefs: Mapping | None = None) -> "EpistemicStructure":
        """``partitions``: agent → list of cells; ``beliefs``: agent → list of
        ``{state: prob}`` dicts aligned with the cells (or keyed by cell)."""
        W = tuple(str(s) for s in states)
        agents = tuple(str(a) for a in partitions)
        parts = {}
        for a, cells in partitions.items():
            parts[str(a)] = tuple(event(c) for c in cells)
        bel = None
        if beliefs is not None:
            bel = {}
            for a, spec in beliefs.items():
                a = str(a)
                if a not in parts:
                    raise EpistemicError(f"beliefs given for unknown agent {a!r}")
                table = {}
                items = spec.items() if isinstance(spec, Mapping) else zip(parts[a], spec)
                for cell, dist in items:
                    cell = event(cell)
                    d = {str(w): as_fraction(p) for w, p in dict(dist).items()}
                    # states of the cell missing from the dict get probability 0
                    table[cell] = {w: d.get(w, Fraction(0)) for w in _ordered(W, cell)}
                    extra = {w for w, p in d.items() if p != 0} - cell
                    if extra:
                        raise EpistemicError(f"belief of {a} on cell {_fmt_set(W, cell)} puts mass outside the cell: {sorted(extra)}")
                bel[a] = table
        s = cls(W, agents, parts, bel)
        s.check()
        return s

    @classmethod
    def from_prior(cls, states: Sequence[str], partitions: Mapping, prior: Mapping) -> "EpistemicStructure":
        """Beliefs obtained by conditioning ``prior`` on every cell."""
        P = {str(w): as_fraction(p) for w, p in prior.items()}
        beliefs = {}
        for a, cells in partitions.items():
            beliefs[a] = [condition(P, event(c)) for c in cells]
        return cls.build(states, partitions, beliefs)

    def check(self) -> None:
        W = set(self.states)
        if len(W) != len(self.states):
            raise EpistemicError("duplicate state labels")
        for a, cells in self.partitions.items():
            seen: set = set()
            for c in cells:
                if not c:
                    raise EpistemicError(f"agent {a} has an empty cell")
                if c - W:
                    raise EpistemicError(f"agent {a} has a cell with unknown states {sorted(c - W)}")
                if seen & c:
                    raise EpistemicError(f"agent {a}'s cells overlap")
                seen |= c
            if seen != W:
                raise EpistemicError(f"agent {a}'s partition misses states {sorted(W - seen)}")
        if self.beliefs is not None:
            for a, table in self.beliefs.items():
                if set(table) != set(self.partitions[a]):
                    raise EpistemicError(f"agent {a} needs exactly one belief per cell")
                for cell, d in table.items():
                    if any(p < 0 for p in d.values()) or sum(d.values(), Fraction(0)) != 1:
                        raise EpistemicError(f"belief of {a} on cell {_fmt_set(self.states, cell)} is not a distribution")

    # ------------------------------------------------------------------

    def agent(self, i) -> str:
        if isinstance(i, int) and not isinstance(i, bool):
            if 0 <= i < len(self.agents):
                return self.agents[i]
        if str(i) in self.partitions:
            return str(i)
        raise EpistemicError(f"unknown agent {i!r}")

    def cell(self, i, w: str) -> frozenset:
        a = self.agent(i)
        for c in self.partitions[a]:
            if w in c:
                return c
        raise EpistemicError(f"unknown state {w!r}")

    def belief(self, i, w: str) -> dict:
        if self.beliefs is None:
            raise EpistemicError("structure has no beliefs")
        a = self.agent(i)
        return self.beliefs[a][self.cell(a, w)]

    @property
    def W(self) -> frozenset:
        return frozenset(self.states)

    def order(self, E: Iterable[str]) -> list:
        """States of ``E`` in the structure's state order."""
        return _ordered(self.states, E)

    def fmt(self, E: Iterable[str]) -> str:
        return _fmt_set(self.states, E)


def _ordered(states: Sequence[str], E: Iterable[str]) -> list:
    E = set(E)
    return [w for w in states if w in E]


def _fmt_set(states: Sequence[str], E: Iterable[str]) -> str:
    return "{" + ",".join(_ordered(states, E)) + "}"


def _check_event(S: EpistemicStructure, E) -> frozenset:
    E = event(E)
    if E - S.W:
        raise EpistemicError(f"event mentions unknown states {sorted(E - S.W)}")
    return E


# ------------------------------------------------------------------ knowledge


def know(S: EpistemicStructure, i, E) -> frozenset:
    """States at which agent ``i``'s information cell lies inside ``E``."""
    E = _check_event(S, E)
    a = S.agent(i)
    out: set = set()
    for c in S.partitions[a]:
        if c <= E:
            out |= c
    return frozenset(out)


def negate(S: EpistemicStructure, E) -> frozenset:
    return S.W - _check_event(S, E)


def ck_partition(S: EpistemicStructure) -> list:
    """Finest common coarsening of all partitions (reachability classes)."""
    parent = {w: w for w in S.states}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for cells in S.partitions.values():
        for c in cells:
            members = list(c)
            for w in members[1:]:
                ra, rb = find(members[0]), find(w)
                if ra != rb:
                    parent[rb] = ra
    groups: dict = {}
    for w in S.states:
        groups.setdefault(find(w), []).append(w)
    return [frozenset(g) for g in sorted(groups.values(), key=lambda g: S.states.index(g[0]))]


def ck(S: EpistemicStructure, E) -> frozenset:
    """States at which ``E`` is common knowledge."""
    E = _check_event(S, E)
    out: set = set()
    for c in ck_partition(S):
        if c <= E:
            out |= c
    return frozenset(out)


# ---------------------------------------------------------------- probability


def prob(P: Mapping, E) -> Fraction:
    return sum((as_fraction(P.get(w, 0)) for w in E), Fraction(0))


def condition(P: Mapping, E) -> dict:
    """Conditional distribution of ``P`` given ``E``.

    Keys are ``P``'s keys (states outside ``E`` get 0) followed by any states
    of ``E`` that ``P`` does not mention.
    """
    E = set(E)
    mass = prob(P, E)
    if mass == 0:
        raise EpistemicError("conditioning on a null event")
    keys = list(P) + sorted(w for w in E if w not in P)
    return {w: (as_fraction(P.get(w, 0)) / mass if w in E else Fraction(0)) for w in keys}


def conditional_prob(P: Mapping, A, E) -> Fraction:
    """P(A | E)."""
    E = set(E)
    mass = prob(P, E)
    if mass == 0:
        raise EpistemicError("conditioning on a null event")
    return prob(P, set(A) & E) / mass


def common_prior(S: EpistemicStructure):
    """A common prior as ``{state: prob}`` or ``None`` when none exists.

    The feasibility problem (proportionality inside every cell, positive
    mass on every cell, total mass 1) is solved exactly; the returned point
    is the one the simplex's canonical pivoting lands on while maximizing
    the smallest cell mass.
    """
    if S.beliefs is None:
        raise EpistemicError("structure has no beliefs")
    idx = {w: k for k, w in enumerate(S.states)}
    n = len(S.states)
    cons = [([1] * n, "==", 1)]
    strict = []
    for a in S.agents:
        for cell, d in S.beliefs[a].items():
            for w in cell:
                row = {idx[w]: Fraction(1)}
                for v in cell:
                    row[idx[v]] = row.get(idx[v], Fraction(0)) - d[w]
                cons.append((row, "==", 0))
            strict.append(({idx[v]: 1 for v in cell}, ">", 0))
    res = linprog.strict_feasible(n, cons, strict)
    if res is None:
        return None
    x, _ = res
    return {w: x[idx[w]] for w in S.states}


def is_common_prior(S: EpistemicStructure, P: Mapping) -> bool:
    if S.beliefs is None:
        raise EpistemicError("structure has no beliefs")
    if sum((as_fraction(v) for v in P.values()), Fraction(0)) != 1:
        return False
    for a in S.agents:
        for cell, d in S.beliefs[a].items():
            if prob(P, cell) == 0:
                return False
            c = condition(P, cell)
            if any(c.get(w, 0) != d[w] for w in cell):
                return False
    return True


def posterior(S: EpistemicStructure, i, E, w: str) -> Fraction:
    d = S.belief(i, w)
    return sum((p for v, p in d.items() if v in E), Fraction(0))


def posterior_event(S: EpistemicStructure, i, E, value) -> frozenset:
    """The event ‖P_i(E) = value‖."""
    E = _check_event(S, E)
    v = as_fraction(value)
    return frozenset(w for w in S.states if posterior(S, i, E, w) == v)


@dataclass(frozen=True)
class AgreementResult:
    holds: bool
    common_posteriors: Mapping = field(default_factory=dict)  # state -> (p, q) commonly known there
    violation: tuple | None = None  # (state, p, q) with p != q commonly known

    def __bool__(self):
        return self.holds


def agreement_holds(S: EpistemicStructure, E, prior: Mapping | None = None) -> AgreementResult:
    """Check that no two distinct posteriors of ``E`` are commonly known.

    Requires two agents and a common prior (given or computed).
    """
    if len(S.agents) != 2:
        raise EpistemicError("agreement checking needs exactly two agents")
    if prior is None:
        prior = common_prior(S)
        if prior is None:
            raise EpistemicError("the structure has no common prior")
    elif not is_common_prior(S, prior):
        raise EpistemicError("the supplied distribution is not a common prior")
    E = _check_event(S, E)
    a1, a2 = S.agents
    vals1 = sorted({posterior(S, a1, E, w) for w in S.states})
    vals2 = sorted({posterior(S, a2, E, w) for w in S.states})
    common: dict = {}
    violation = None
    for p in vals1:
        for q in vals2:
            X = posterior_event(S, a1, E, p) & posterior_event(S, a2, E, q)
            C = ck(S, X)
            for w in S.order(C):
                common[w] = (p, q)
                if p != q and violation is None:
                    violation = (w, p, q)
    common = {w: common[w] for w in S.order(common)}
    return AgreementResult(violation is None, common, violation)


# ----------------------------------------------------------- belief revision


@dataclass(frozen=True)
class StatePlausibilityOrder:
    """Ordered partition of the states; earlier levels are more plausible."""

    levels: tuple

    def __init__(self, levels: Iterable[Iterable[str]]):
        lv = tuple(event(level) for level in levels)
        if any(not level for level in lv):
            raise EpistemicError("plausibility levels must be nonempty")
        seen: set = set()
        for level in lv:
            if seen & level:
                raise EpistemicError("plausibility levels overlap")
            seen |= level
        object.__setattr__(self, "levels", lv)

    @property
    def states(self) -> frozenset:
        return frozenset().union(*self.levels)

    def rank(self, w: str) -> int:
        for k, level in enumerate(self.levels):
            if w in level:
                return k
        raise EpistemicError(f"state {w!r} is not ranked")

    def minima(self, E) -> frozenset:
        E = event(E)
        for level in self.levels:
            hit = level & E
            if hit:
                return hit
        raise EpistemicError("cannot revise by the empty event")


def agm_revise(order: StatePlausibilityOrder, events: Iterable) -> dict:
    """Belief revision function: each event maps to its most plausible states."""
    out = {}
    for E in events:
        E = event(E)
        if not E:
            raise EpistemicError("the family of events may not contain the empty set")
        if E - order.states:
            raise EpistemicError(f"event mentions unranked states {sorted(E - order.states)}")
        out[E] = order.minima(E)
    return out


def check_arrow(f: Mapping) -> bool:
    """Arrow's axiom over all ordered pairs of the domain."""
    for E, fE in f.items():
        for F, fF in f.items():
            if E <= F and E & fF and fE != E & fF:
                return False
    return True


def probabilistic_revision(order: StatePlausibilityOrder, P0: Mapping, events: Iterable) -> dict:
    """Condition a full-support prior on the revised event for each input event."""
    P0 = {str(w): as_fraction(p) for w, p in P0.items()}
    if any(P0.get(w, 0) <= 0 for w in order.states):
        raise EpistemicError("the prior must give every state positive probability")
    f = agm_revise(order, events)
    return {E: condition(P0, fE) for E, fE in f.items()}


# ------------------------------------------------------------ game models


@dataclass(frozen=True, eq=False)
class GameModel:
    """An epistemic structure whose agents are the game's players (same
    order) plus, per player, the strategy played at each state."""

    structure: EpistemicStructure
    game: StrategicGame
    assignment: Mapping  # player index -> {state: strategy}

    def __post_init__(self):
        S, G = self.structure, self.game
        if S.beliefs is None:
            raise EpistemicError("a game model needs beliefs")
        if len(S.agents) != G.n:
            raise EpistemicError("agents and players differ in number")
        for i in range(G.n):
            sig = self.assignment[i]
            for w in S.states:
                G.check_strategy(i, sig[w])
            for c in S.partitions[S.agents[i]]:
                if len({sig[w] for w in c}) != 1:
                    raise EpistemicError(f"player {G.players[i]}'s strategy varies inside cell {S.fmt(c)}")

    def profile(self, w: str) -> tuple:
        return tuple(self.assignment[i][w] for i in range(self.game.n))

    @classmethod
    def from_profiles(cls, structure: EpistemicStructure, game: StrategicGame, profiles: Mapping) -> "GameModel":
        """``profiles``: state → tuple of strategies."""
        assignment = {i: {w: profiles[w][i] for w in structure.states} for i in range(game.n)}
        return cls(structure, game, assignment)


def _expected(model: GameModel, i: int, s: str, belief: Mapping) -> Fraction:
    G = model.game
    total = Fraction(0)
    for v, p in belief.items():
        if p:
            prof = list(model.profile(v))
            prof[i] = s
            total += p * G.u(i, tuple(prof))
    return total


def rationality_event(model: GameModel, i) -> frozenset:
    """States where player ``i``'s strategy maximizes expected payoff given
    her beliefs and the others' strategies at each state."""
    G, S = model.game, model.structure
    i = G.player_index(i) if not isinstance(i, int) else i
    out = set()
    for w in S.states:
        bel = S.belief(i, w)
        own = _expected(model, i, model.assignment[i][w], bel)
        if all(_expected(model, i, s, bel) <= own for s in G.strategies[i]):
            out.add(w)
    return frozenset(out)


def rational_states(model: GameModel) -> frozenset:
    R = model.structure.W
    for i in range(model.game.n):
        R &= rationality_event(model, i)
    return R


def ckr_states(model: GameModel) -> frozenset:
    """States where rationality is common knowledge."""
    return ck(model.structure, rational_states(model))


def _state_label(profile: Sequence[str]) -> str:
    """``TL`` for one-letter strategies, ``Top-Left`` otherwise."""
    return ("" if all(len(s) == 1 for s in profile) else "-").join(profile)


def build_ckr_model(G: StrategicGame) -> GameModel:
    """A model whose states are the profiles surviving iterated deletion of
    strictly dominated (possibly by mixtures) strategies, in which
    rationality is common knowledge everywhere.

    Each player's cells group states by her own strategy; her belief there is
    the lexicographically-first vertex of the set of beliefs over surviving
    opponent profiles that make the strategy a best reply.
    """
    trace = strategic.iterated_deletion(G, strategic.STRICT_MIXED)
    surv = [list(s) for s in trace.survivors]
    profiles = list(itertools.product(*surv))
    labels = [_state_label(p) for p in profiles]
    by_label = dict(zip(labels, profiles))
    partitions, beliefs = {}, {}
    for i in range(G.n):
        cells, bels = [], []
        for s in surv[i]:
            cell = [lbl for lbl, p in by_label.items() if p[i] == s]
            b = strategic.best_response_belief(G, i, s, surv)
            if b is None:
                raise EpistemicError(f"no supporting belief for {G.players[i]}'s {s}")
            dist = {}
            for lbl in cell:
                p = by_label[lbl]
                rest = tuple(x for k, x in enumerate(p) if k != i)
                dist[lbl] = b.get(rest, Fraction(0))
            cells.append(cell)
            bels.append(dist)
        partitions[G.players[i]] = cells
        beliefs[G.players[i]] = bels
    S = EpistemicStructure.build(labels, partitions, beliefs)
    return GameModel.from_profiles(S, G, by_label)
