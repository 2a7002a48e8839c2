"""History-based extensive forms.

A history is a tuple of action labels; the empty tuple is the root.  Every
non-terminal history belongs either to a player (0-based index) or to
chance.  Information sets have string ids and are listed per player in the
order they are first met on a depth-first walk of the tree, which fixes the
order of choices inside pure-strategy labels.

Behavior profiles are plain dicts ``{infoset_id: {action: prob}}`` covering
every player's information sets (chance is read from the form itself).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import strategic
from .lotteries import as_fraction
from .strategic import StrategicGame

CHANCE = "chance"
DEFAULT_CAP = 64


class FormError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """Raised when an enumeration passes its configured bound."""


class SolverError(RuntimeError):
    pass


def fmt_history(h: Sequence[str]) -> str:
    return ".".join(h) if h else "()"


def parse_history(s) -> tuple:
    if isinstance(s, tuple):
        return s
    if isinstance(s, list):
        return tuple(s)
    s = str(s).strip()
    if s in ("", "()", "root"):
        return ()
    return tuple(s.split("."))


def _default_infoset_id(player_name: str, h: tuple) -> str:
    return f"{player_name}@{fmt_history(h)}"


@dataclass(frozen=True, eq=False)
class ExtensiveForm:
    players: tuple
    actions: Mapping  # decision history -> tuple of actions
    mover: Mapping  # decision history -> player index or CHANCE
    chance_probs: Mapping  # chance history -> {action: prob}
    infoset_of: Mapping  # player decision history -> infoset id
    infosets: Mapping  # infoset id -> tuple of histories
    payoffs: Mapping  # terminal history -> payoff tuple
    outcome_labels: Mapping | None = None
    order: tuple = field(default=(), repr=False)  # all histories, DFS preorder

    # -- construction ---------------------------------------------------------

    @classmethod
    def build(cls, players: Sequence[str], decisions: Mapping, payoffs: Mapping,
              infosets: Mapping | None = None, outcome_labels: Mapping | None = None) -> "ExtensiveForm":
        """Assemble a form.

        ``decisions`` maps a history to ``(mover, actions)`` where ``mover`` is a
        player name or ``"chance"``; for chance ``actions`` is a mapping
        ``{action: prob}``.  ``infosets`` maps an id to a list of histories;
        decision histories not mentioned get a singleton set.  Histories may be
        tuples or dotted strings (``"a.b"``; root is ``"()"``).
        """
        players = tuple(str(p) for p in players)
        pindex = {p: k for k, p in enumerate(players)}
        acts, mover, cprobs = {}, {}, {}
        for hs, (who, av) in decisions.items():
            h = parse_history(hs)
            if str(who) == CHANCE:
                dist = {str(a): as_fraction(p) for a, p in dict(av).items()}
                acts[h] = tuple(dist)
                mover[h] = CHANCE
                cprobs[h] = dist
            else:
                if str(who) not in pindex:
                    raise FormError(f"unknown player {who!r} at history {fmt_history(h)}")
                acts[h] = tuple(str(a) for a in av)
                mover[h] = pindex[str(who)]
        pays = {}
        for hs, vec in payoffs.items():
            pays[parse_history(hs)] = tuple(as_fraction(v) for v in vec)
        info_of, sets = {}, {}
        for sid, members in (infosets or {}).items():
            hs = tuple(parse_history(m) for m in members)
            sets[str(sid)] = hs
            for h in hs:
                if h in info_of:
                    raise FormError(f"history {fmt_history(h)} is in two information sets")
                info_of[h] = str(sid)
        for h, who in mover.items():
            if who != CHANCE and h not in info_of:
                sid = _default_infoset_id(players[who], h)
                info_of[h] = sid
                sets[sid] = (h,)
        labels = None
        if outcome_labels is not None:
            labels = {parse_history(k): str(v) for k, v in outcome_labels.items()}
        return cls(players, acts, mover, cprobs, info_of, sets, pays, labels)

    def __post_init__(self):
        order = []
        stack = [()]
        seen = set()
        while stack:
            h = stack.pop()
            if h in seen:
                continue
            seen.add(h)
            order.append(h)
            if h in self.actions:
                for a in reversed(self.actions[h]):
                    stack.append(h + (a,))
        object.__setattr__(self, "order", tuple(order))
        # canonical in-set ordering follows the DFS order
        pos = {h: k for k, h in enumerate(order)}
        sets = {sid: tuple(sorted(hs, key=lambda h: pos.get(h, len(pos)))) for sid, hs in self.infosets.items()}
        object.__setattr__(self, "infosets", sets)

    # -- basic queries ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def histories(self) -> tuple:
        return self.order

    @property
    def decision_histories(self) -> tuple:
        return tuple(h for h in self.order if h in self.actions)

    @property
    def terminals(self) -> tuple:
        return tuple(h for h in self.order if h not in self.actions)

    def is_terminal(self, h) -> bool:
        return h not in self.actions

    def player_infosets(self, i: int) -> list:
        """Info-set ids of player ``i`` in first-visit order."""
        out = []
        for h in self.order:
            if self.mover.get(h) == i:
                sid = self.infoset_of[h]
                if sid not in out:
                    out.append(sid)
        return out

    def all_infosets(self) -> list:
        out = []
        for h in self.order:
            if h in self.infoset_of and self.infoset_of[h] not in out:
                out.append(self.infoset_of[h])
        return out

    def infoset_player(self, sid: str) -> int:
        return self.mover[self.infosets[sid][0]]

    def infoset_actions(self, sid: str) -> tuple:
        return self.actions[self.infosets[sid][0]]

    def active_players(self) -> list:
        return sorted({w for w in self.mover.values() if w != CHANCE})

    def player_index(self, who) -> int:
        if isinstance(who, int):
            return who
        try:
            return self.players.index(str(who))
        except ValueError:
            raise FormError(f"unknown player {who!r}") from None

    # -- structural operations ----------------------------------------------

    def subgame(self, root: tuple) -> "ExtensiveForm":
        """The form rooted at ``root`` (histories re-based, set ids kept)."""
        k = len(root)
        keep = [h for h in self.order if h[:k] == root]
        acts = {h[k:]: self.actions[h] for h in keep if h in self.actions}
        mover = {h[k:]: self.mover[h] for h in keep if h in self.mover}
        cprobs = {h[k:]: self.chance_probs[h] for h in keep if h in self.chance_probs}
        info_of = {h[k:]: self.infoset_of[h] for h in keep if h in self.infoset_of}
        sets: dict = {}
        for h, sid in info_of.items():
            sets.setdefault(sid, []).append(h)
        pays = {h[k:]: self.payoffs[h] for h in keep if h in self.payoffs}
        labels = None
        if self.outcome_labels is not None:
            labels = {h[k:]: v for h, v in self.outcome_labels.items() if h[:k] == root}
        return ExtensiveForm(self.players, acts, mover, cprobs, info_of,
                             {s: tuple(v) for s, v in sets.items()}, pays, labels)

    def collapse(self, values: Mapping) -> "ExtensiveForm":
        """Replace each history in ``values`` (and its subtree) by a terminal
        carrying the given payoff vector."""
        roots = list(values)

        def under(h):
            return any(h[:len(r)] == r and h != r for r in roots)

        acts = {h: a for h, a in self.actions.items() if h not in values and not under(h)}
        mover = {h: w for h, w in self.mover.items() if h in acts}
        cprobs = {h: p for h, p in self.chance_probs.items() if h in acts}
        info_of = {h: s for h, s in self.infoset_of.items() if h in acts}
        sets: dict = {}
        for h, sid in info_of.items():
            sets.setdefault(sid, []).append(h)
        pays = {h: v for h, v in self.payoffs.items() if not under(h)}
        for r, v in values.items():
            pays[r] = tuple(v)
        return ExtensiveForm(self.players, acts, mover, cprobs, info_of,
                             {s: tuple(v) for s, v in sets.items()}, pays, None)


# ---------------------------------------------------------------- validation


def validate(ef: ExtensiveForm) -> list:
    """Structural diagnostics; an empty list means the form is well formed."""
    diags = []
    hist = set(ef.order)
    for h in list(ef.actions) + list(ef.payoffs):
        if h not in hist:
            diags.append(f"history {fmt_history(h)} is not reachable from the root (prefix closure)")
    if () not in ef.actions and () not in ef.payoffs:
        diags.append("the tree has no root")
    for h in ef.order:
        if h in ef.actions:
            if not ef.actions[h]:
                diags.append(f"decision history {fmt_history(h)} has no actions")
            if len(set(ef.actions[h])) != len(ef.actions[h]):
                diags.append(f"duplicate action at {fmt_history(h)}")
        elif h not in ef.payoffs:
            diags.append(f"terminal history {fmt_history(h)} has no payoff")
        elif len(ef.payoffs[h]) != ef.n:
            diags.append(f"payoff at {fmt_history(h)} has {len(ef.payoffs[h])} entries, expected {ef.n}")
    for h, dist in ef.chance_probs.items():
        if any(p <= 0 for p in dist.values()):
            diags.append(f"chance at {fmt_history(h)} has a non-positive probability")
        if sum(dist.values(), Fraction(0)) != 1:
            diags.append(f"chance probabilities at {fmt_history(h)} do not sum to 1")
    for sid, hs in ef.infosets.items():
        owners = {ef.mover.get(h) for h in hs}
        if len(owners) != 1 or CHANCE in owners or None in owners:
            diags.append(f"information set {sid} mixes movers or contains non-decision histories")
            continue
        acts = {ef.actions[h] for h in hs}
        if len({frozenset(a) for a in acts}) != 1:
            diags.append(f"information set {sid} has histories with different available actions")
    if diags:
        return diags
    diags.extend(perfect_recall_violations(ef))
    return diags


def perfect_recall_violations(ef: ExtensiveForm) -> list:
    """Check: if ``h1·a`` is a prefix of ``h2`` (both of player i), then every
    ``h'`` in ``I(h2)`` extends some ``h·a`` with ``h`` in ``I(h1)``."""
    out = []
    for i in range(ef.n):
        mine = [h for h in ef.order if ef.mover.get(h) == i]
        for h1 in mine:
            for h2 in mine:
                if len(h2) <= len(h1) or h2[:len(h1)] != h1:
                    continue
                a = h2[len(h1)]
                for hp in ef.infosets[ef.infoset_of[h2]]:
                    ok = any(len(hp) > len(h) and hp[:len(h) + 1] == h + (a,)
                             for h in ef.infosets[ef.infoset_of[h1]])
                    if not ok:
                        msg = (f"perfect recall fails for player {ef.players[i]}: "
                               f"{fmt_history(hp)} in information set {ef.infoset_of[h2]} does not "
                               f"follow action {a} at information set {ef.infoset_of[h1]}")
                        if msg not in out:
                            out.append(msg)
    return out


def require_valid(ef: ExtensiveForm) -> None:
    d = validate(ef)
    if d:
        raise FormError("; ".join(d))


# ----------------------------------------------------------------- strategies


@dataclass(frozen=True)
class BehavioralStrategy:
    player: int
    mix: Mapping  # infoset id -> {action: prob}


def _strategy_label(ef: ExtensiveForm, i: int, choice: Mapping) -> str:
    sids = ef.player_infosets(i)
    if not sids:
        return "-"
    acts = [choice[s] for s in sids]
    sep = "" if all(len(a) == 1 for s in sids for a in ef.infoset_actions(s)) else "."
    return sep.join(acts)


def pure_strategies(ef: ExtensiveForm, i: int) -> list:
    """``[(label, {infoset: action})]`` in lexicographic action order."""
    sids = ef.player_infosets(i)
    if not sids:
        return [("-", {})]
    out = []
    for combo in itertools.product(*(ef.infoset_actions(s) for s in sids)):
        ch = dict(zip(sids, combo))
        out.append((_strategy_label(ef, i, ch), ch))
    return out


def pure_profile(choices: Mapping) -> dict:
    """Behavior profile from ``{infoset: action}``."""
    return {sid: {a: Fraction(1)} for sid, a in choices.items()}


def edge_prob(ef: ExtensiveForm, profile: Mapping, h: tuple, a: str) -> Fraction:
    if ef.mover[h] == CHANCE:
        return ef.chance_probs[h][a]
    dist = profile.get(ef.infoset_of[h])
    if dist is None:
        raise FormError(f"behavior profile has no entry for information set {ef.infoset_of[h]}")
    return as_fraction(dist.get(a, 0))


def reach_probabilities(ef: ExtensiveForm, profile: Mapping, start: tuple = ()) -> dict:
    """Probability of reaching each history from ``start`` under ``profile``."""
    out = {start: Fraction(1)}
    for h in ef.order:
        if h[:len(start)] != start or h not in out:
            continue
        if h in ef.actions:
            for a in ef.actions[h]:
                out[h + (a,)] = out[h] * edge_prob(ef, profile, h, a)
    return out


def outcome_distribution(ef: ExtensiveForm, profile: Mapping, start: tuple = ()) -> dict:
    """Distribution over terminal histories (every terminal listed)."""
    reach = reach_probabilities(ef, profile, start)
    return {z: reach.get(z, Fraction(0)) for z in ef.terminals if z[:len(start)] == start}


def expected_payoffs(ef: ExtensiveForm, profile: Mapping, start: tuple = ()) -> tuple:
    dist = outcome_distribution(ef, profile, start)
    tot = [Fraction(0)] * ef.n
    for z, p in dist.items():
        if p:
            for k in range(ef.n):
                tot[k] += p * ef.payoffs[z][k]
    return tuple(tot)


def _own_path(ef: ExtensiveForm, i: int, h: tuple) -> list:
    """Player i's (infoset, action) pairs along history ``h``."""
    out = []
    for k in range(len(h)):
        p = h[:k]
        if ef.mover.get(p) == i:
            out.append((ef.infoset_of[p], h[k]))
    return out


def behavioral_from_mixed(ef: ExtensiveForm, i: int, mixed: Mapping) -> dict:
    """Realization-equivalent behavior strategy of a mixed strategy.

    ``mixed`` maps pure-strategy labels (see :func:`pure_strategies`) to
    probabilities.  At an information set that the player's own mixture
    rules out, the support's common choice is used if all support strategies
    agree, otherwise the uniform distribution.
    """
    if perfect_recall_violations(ef):
        raise FormError("behavioral conversion requires perfect recall")
    strat = dict(pure_strategies(ef, i))
    weights = {lbl: as_fraction(p) for lbl, p in mixed.items() if as_fraction(p) != 0}
    for lbl in weights:
        if lbl not in strat:
            raise FormError(f"unknown pure strategy {lbl!r} for player {ef.players[i]}")
    out = {}
    for sid in ef.player_infosets(i):
        path = _own_path(ef, i, ef.infosets[sid][0])
        consistent = [lbl for lbl in weights if all(strat[lbl][s] == a for s, a in path)]
        total = sum((weights[lbl] for lbl in consistent), Fraction(0))
        acts = ef.infoset_actions(sid)
        if total > 0:
            dist = {a: Fraction(0) for a in acts}
            for lbl in consistent:
                dist[strat[lbl][sid]] += weights[lbl]
            out[sid] = {a: v / total for a, v in dist.items()}
        else:
            choices = {strat[lbl][sid] for lbl in weights}
            if len(choices) == 1:
                c = choices.pop()
                out[sid] = {a: Fraction(int(a == c)) for a in acts}
            else:
                out[sid] = {a: Fraction(1, len(acts)) for a in acts}
    return out


def to_strategic_form(ef: ExtensiveForm) -> StrategicGame:
    """Induced strategic form; payoffs are expectations over chance."""
    per = [pure_strategies(ef, i) for i in range(ef.n)]
    pay = {}
    for combo in itertools.product(*per):
        prof = {}
        for _, ch in combo:
            prof.update(pure_profile(ch))
        pay[tuple(lbl for lbl, _ in combo)] = expected_payoffs(ef, prof)
    return StrategicGame(ef.players, tuple(tuple(l for l, _ in ss) for ss in per), pay)


def profile_from_labels(ef: ExtensiveForm, labels: Sequence[str]) -> dict:
    """Behavior profile from one pure-strategy label per player."""
    prof = {}
    for i, lbl in enumerate(labels):
        table = dict(pure_strategies(ef, i))
        if lbl not in table:
            raise FormError(f"unknown pure strategy {lbl!r} for player {ef.players[i]}")
        prof.update(pure_profile(table[lbl]))
    return prof


# --------------------------------------------------------- backward induction


def _perfect_information(ef: ExtensiveForm) -> bool:
    return all(len(hs) == 1 for hs in ef.infosets.values())


def backward_induction(ef: ExtensiveForm, cap: int = DEFAULT_CAP) -> list:
    """Every backward-induction profile over all tie-breaking choices.

    Returns a list of ``{history: action}`` dicts (one entry per player
    decision history).  Raises :class:`CapExceeded` past ``cap`` profiles.
    """
    require_valid(ef)
    if not _perfect_information(ef):
        raise FormError("backward induction needs perfect information")

    memo: dict = {}

    def solve(h):
        if h in memo:
            return memo[h]
        if h not in ef.actions:
            res = [({}, ef.payoffs[h])]
        elif ef.mover[h] == CHANCE:
            acts = ef.actions[h]
            res = []
            for combo in itertools.product(*(solve(h + (a,)) for a in acts)):
                plan, val = {}, [Fraction(0)] * ef.n
                for a, (sub, v) in zip(acts, combo):
                    plan.update(sub)
                    p = ef.chance_probs[h][a]
                    for k in range(ef.n):
                        val[k] += p * v[k]
                res.append((plan, tuple(val)))
                if len(res) > cap:
                    raise CapExceeded(f"more than {cap} backward-induction profiles")
        else:
            i = ef.mover[h]
            acts = ef.actions[h]
            res = []
            for combo in itertools.product(*(solve(h + (a,)) for a in acts)):
                best = max(v[i] for _, v in combo)
                base = {}
                for sub, _ in combo:
                    base.update(sub)
                for a, (sub, v) in zip(acts, combo):
                    if v[i] == best:
                        plan = dict(base)
                        plan[h] = a
                        res.append((plan, v))
                        if len(res) > cap:
                            raise CapExceeded(f"more than {cap} backward-induction profiles")
        memo[h] = res
        return res

    return [plan for plan, _ in solve(())]


def bi_profile_labels(ef: ExtensiveForm, plan: Mapping) -> tuple:
    """Pure-strategy labels of a backward-induction plan."""
    out = []
    for i in range(ef.n):
        ch = {ef.infoset_of[h]: a for h, a in plan.items() if ef.mover[h] == i}
        out.append(_strategy_label(ef, i, ch))
    return tuple(out)


def play_path(ef: ExtensiveForm, plan: Mapping) -> tuple:
    """The terminal history reached by a pure plan (chance must be absent)."""
    h = ()
    while h in ef.actions:
        if ef.mover[h] == CHANCE:
            raise FormError("play path is random at a chance node")
        h = h + (plan[h],)
    return h


# ------------------------------------------------------------------ subgames


def _subtree(ef: ExtensiveForm, root: tuple) -> list:
    return [h for h in ef.order if h[:len(root)] == root]


def is_subgame_root(ef: ExtensiveForm, root: tuple) -> bool:
    if root not in ef.actions:
        return False
    if root in ef.infoset_of and len(ef.infosets[ef.infoset_of[root]]) != 1:
        return False
    k = len(root)
    for h in _subtree(ef, root):
        if h in ef.infoset_of:
            if any(x[:k] != root for x in ef.infosets[ef.infoset_of[h]]):
                return False
    return True


def subgames(ef: ExtensiveForm) -> list:
    """Proper subgames as ``[(root, minimal)]`` in tree order."""
    roots = [h for h in ef.decision_histories if h != () and is_subgame_root(ef, h)]
    out = []
    for r in roots:
        minimal = not any(o != r and o[:len(r)] == r for o in roots)
        out.append((r, minimal))
    return out


# ---------------------------------------------------------------------- SPE


def _nash_behaviors(ef: ExtensiveForm, cap: int) -> list:
    """Nash equilibria of a form with no proper subgames, as behavior profiles."""
    active = ef.active_players()
    G = to_strategic_form(ef)
    results = []
    if len(active) == 2:
        i, j = active
        fixed = {k: G.strategies[k][0] for k in range(G.n) if k not in active}

        def fn(prof):
            full = [None] * G.n
            full[i], full[j] = prof
            for k, s in fixed.items():
                full[k] = s
            v = G.payoff[tuple(full)]
            return (v[i], v[j])

        G2 = StrategicGame.from_function(
            (G.players[i], G.players[j]), (G.strategies[i], G.strategies[j]), fn)
        for eq in strategic.mixed_nash_2p(G2):
            if isinstance(eq, strategic.MixedComponent):
                raise SolverError("a subgame has a continuum of equilibria; no isolated profile to select")
            m1, m2 = eq
            beh = {}
            beh.update(behavioral_from_mixed(ef, i, m1.as_dict()))
            beh.update(behavioral_from_mixed(ef, j, m2.as_dict()))
            results.append(beh)
    else:
        proj = [k for k in range(G.n)]
        for prof in strategic.pure_nash(G):
            beh = {}
            for k in proj:
                beh.update(behavioral_from_mixed(ef, k, {prof[k]: 1}))
            results.append(beh)
        if not results:
            raise SolverError("no equilibrium found at subgame (no pure Nash with more than two players)")
    if len(results) > cap:
        raise CapExceeded(f"more than {cap} equilibria in a subgame")
    return results


def spe(ef: ExtensiveForm, cap: int = DEFAULT_CAP) -> list:
    """Subgame-perfect equilibria by repeated minimal-subgame reduction.

    Each element is a behavior profile ``{infoset: {action: prob}}``.
    """
    require_valid(ef)
    out = _spe(ef, cap)
    uniq = []
    for b in out:
        if b not in uniq:
            uniq.append(b)
    return uniq


def _spe(ef: ExtensiveForm, cap: int) -> list:
    mins = [r for r, m in subgames(ef) if m]
    if not mins:
        return _nash_behaviors(ef, cap)
    per_root = []
    for r in mins:
        sub = ef.subgame(r)
        sols = []
        for beh in _nash_behaviors(sub, cap):
            sols.append((beh, expected_payoffs(sub, beh)))
        per_root.append(sols)
    results = []
    for combo in itertools.product(*per_root):
        values = {r: v for r, (_, v) in zip(mins, combo)}
        reduced = ef.collapse(values)
        for rest in _spe(reduced, cap):
            beh = dict(rest)
            for b, _ in combo:
                beh.update(b)
            results.append(beh)
            if len(results) > cap:
                raise CapExceeded(f"more than {cap} subgame-perfect profiles")
    return results


def _best_deviation_value(ef: ExtensiveForm, profile: Mapping, i: int) -> Fraction:
    best = None
    for _, ch in pure_strategies(ef, i):
        prof = dict(profile)
        prof.update(pure_profile(ch))
        v = expected_payoffs(ef, prof)[i]
        if best is None or v > best:
            best = v
    return best


def is_nash_behavior(ef: ExtensiveForm, profile: Mapping) -> bool:
    vals = expected_payoffs(ef, profile)
    for i in ef.active_players():
        if _best_deviation_value(ef, profile, i) > vals[i]:
            return False
    return True


def is_spe(ef: ExtensiveForm, profile: Mapping) -> bool:
    """Nash in the whole game and in every proper subgame."""
    require_valid(ef)
    roots = [()] + [r for r, _ in subgames(ef)]
    for r in roots:
        sub = ef.subgame(r) if r else ef
        restricted = {sid: d for sid, d in profile.items() if sid in sub.infosets}
        if not is_nash_behavior(sub, restricted):
            return False
    return True


def format_behavior(ef: ExtensiveForm, profile: Mapping) -> str:
    """Render a behavior profile as ``(p1 | p2 | ...)`` with exact rationals."""
    parts = []
    for i in range(ef.n):
        sids = ef.player_infosets(i)
        if not sids:
            continue
        cells = []
        for sid in sids:
            dist = profile[sid]
            nz = [(a, p) for a, p in dist.items() if p != 0]
            if len(nz) == 1:
                cells.append(nz[0][0])
            else:
                cells.append(" ".join(f"{a}@{_frac(p)}" for a, p in nz))
        parts.append(f"{ef.players[i]}: " + ", ".join(cells))
    return "; ".join(parts)


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ------------------------------------------------------------- win/lose/draw


WIN1, WIN2, DRAW = "win1", "win2", "draw"


class PositionGame:
    """Interface for two-player win/lose(/draw) games given implicitly.

    Subclasses provide ``initial``, ``mover`` (0 or 1), ``moves`` (list of
    ``(action, next_state)``) and ``result`` (``None`` for non-terminal
    states, else one of ``win1``/``win2``/``draw``).
    """

    def initial(self):
        raise NotImplementedError

    def mover(self, state) -> int:
        raise NotImplementedError

    def moves(self, state) -> list:
        raise NotImplementedError

    def result(self, state):
        raise NotImplementedError


@dataclass(frozen=True)
class CountingGame(PositionGame):
    """Players alternately add a number in ``1..max_pick`` to a running sum.

    With ``exact`` the sum may not pass ``target`` and hitting it wins;
    otherwise reaching ``target`` or more wins.
    """

    target: int
    max_pick: int
    exact: bool = False

    def initial(self):
        return (0, 0)

    def mover(self, state):
        return state[1]

    def moves(self, state):
        total, who = state
        picks = range(1, self.max_pick + 1)
        if self.exact:
            picks = [k for k in picks if total + k <= self.target]
        return [(str(k), (total + k, 1 - who)) for k in picks]

    def result(self, state):
        total, who = state
        if total >= self.target:
            return WIN2 if who == 0 else WIN1  # the previous mover reached it
        return None


class TreeGame(PositionGame):
    """Adapter exposing a two-player perfect-information form as a position game.

    Terminal outcomes come from ``outcome_labels`` when present, otherwise
    from payoffs: (1,0) → win1, (0,1) → win2, equal entries → draw.
    """

    def __init__(self, ef: ExtensiveForm):
        require_valid(ef)
        if ef.n != 2:
            raise FormError("win/lose/draw solving needs exactly two players")
        if not _perfect_information(ef) or ef.chance_probs:
            raise FormError("win/lose/draw solving needs perfect information without chance")
        self.ef = ef

    def initial(self):
        return ()

    def mover(self, state):
        return self.ef.mover[state]

    def moves(self, state):
        return [(a, state + (a,)) for a in self.ef.actions[state]]

    def result(self, state):
        if state in self.ef.actions:
            return None
        if self.ef.outcome_labels and state in self.ef.outcome_labels:
            lab = self.ef.outcome_labels[state]
            if lab not in (WIN1, WIN2, DRAW):
                raise FormError(f"unknown outcome label {lab!r}")
            return lab
        u1, u2 = self.ef.payoffs[state]
        if u1 > u2:
            return WIN1
        if u2 > u1:
            return WIN2
        return DRAW


@dataclass(frozen=True)
class ZermeloResult:
    category: str  # "player 1 wins" | "player 2 wins" | "draw"
    values: Mapping = field(repr=False)  # state -> win1/win2/draw under optimal play
    witness: Mapping = field(repr=False)  # state -> action for the guaranteeing side(s)

    def losing_states(self) -> list:
        """Non-terminal states whose mover loses under optimal play."""
        return [s for s, v in self.values.items()
                if v in (WIN1, WIN2) and s in self.witness_movers and self.witness_movers[s] != v]

    witness_movers: Mapping = field(default_factory=dict, repr=False)


def _rank(v, who):
    good = WIN1 if who == 0 else WIN2
    return 2 if v == good else (1 if v == DRAW else 0)


def solve_zermelo(game) -> ZermeloResult:
    """Classify a finite two-player win/lose/draw game and give witnesses.

    ``game`` is a :class:`PositionGame` or a two-player perfect-information
    :class:`ExtensiveForm`.  Positions are memoized, so games given by a
    counting rule (huge trees, few positions) are cheap.
    """
    if isinstance(game, ExtensiveForm):
        game = TreeGame(game)
    values: dict = {}
    witness: dict = {}
    movers: dict = {}
    import sys
    sys.setrecursionlimit(max(10000, sys.getrecursionlimit()))

    def solve(s):
        if s in values:
            return values[s]
        r = game.result(s)
        if r is not None:
            values[s] = r
            return r
        who = game.mover(s)
        best_a, best_v = None, None
        for a, nxt in game.moves(s):
            v = solve(nxt)
            if best_v is None or _rank(v, who) > _rank(best_v, who):
                best_a, best_v = a, v
        values[s] = best_v
        witness[s] = best_a
        movers[s] = WIN1 if who == 0 else WIN2
        return best_v

    v0 = solve(game.initial())
    cat = {WIN1: "player 1 wins", WIN2: "player 2 wins", DRAW: "draw"}[v0]
    return ZermeloResult(cat, values, witness, movers)


def verify_guarantee(game, player: int, strategy: Mapping, at_least_draw: bool = False) -> bool:
    """Check that ``strategy`` (state → action) wins for ``player`` (0/1)
    against every opponent line (or never loses, with ``at_least_draw``)."""
    if isinstance(game, ExtensiveForm):
        game = TreeGame(game)
    good = {WIN1 if player == 0 else WIN2}
    if at_least_draw:
        good.add(DRAW)
    seen: dict = {}

    def check(s):
        if s in seen:
            return seen[s]
        r = game.result(s)
        if r is not None:
            ok = r in good
        elif game.mover(s) == player:
            a = strategy.get(s)
            nxt = dict(game.moves(s)).get(a)
            ok = nxt is not None and check(nxt)
        else:
            ok = all(check(n) for _, n in game.moves(s))
        seen[s] = ok
        return ok

    return check(game.initial())
