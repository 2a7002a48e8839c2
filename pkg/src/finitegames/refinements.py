"""Assessments and the equilibrium refinements built on them.

An *assessment* pairs a behavior profile ``sigma`` (``{infoset: {action: p}}``)
with a system of beliefs ``mu`` (``{decision history: p}``).  This module
checks, in increasing strength:

* sequential rationality and Bayesian updating at reached sets (weak
  sequential equilibrium);
* rationalization by a plausibility order on histories, Bayesian consistency
  relative to it (perfect Bayesian equilibrium) and the independence
  properties;
* choice measurability and uniform Bayesian consistency, which together with
  the above characterize sequential equilibrium without any limit argument.

Plausibility orders are total pre-orders on histories given as levels, most
plausible first.  The search over orders is avoided where possible: the
supports of ``sigma`` and ``mu`` force a set of equalities and strict
inequalities, and each of the existence questions below reduces to an exact
linear feasibility problem over that forced structure.  An explicit, capped
enumeration of order completions is kept for cross-checking.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from .extensive import (
    CHANCE,
    CapExceeded,
    ExtensiveForm,
    FormError,
    SolverError,
    expected_payoffs,
    fmt_history,
    parse_history,
    reach_probabilities,
    require_valid,
)
from .linprog import LogSpan, solve, strict_feasible
from .lotteries import as_fraction

DEFAULT_ORDER_CAP = 10_000


# ------------------------------------------------------------------ assessment


@dataclass(frozen=True, eq=False)
class Assessment:
    sigma: Mapping  # infoset id -> {action: Fraction}
    mu: Mapping  # player decision history -> Fraction

    @classmethod
    def make(cls, ef: ExtensiveForm, sigma: Mapping, mu: Mapping | None = None) -> "Assessment":
        """Normalize user input into a full assessment and validate it.

        ``sigma`` keys are information-set ids or any history in the set
        (tuple or dotted string); values are an action name (pure choice) or
        an ``{action: prob}`` mapping.  ``mu`` keys are histories; entries
        missing from a singleton set default to 1 and from a larger set to 0.
        """
        sig: dict = {}
        for key, val in sigma.items():
            sid = _resolve_infoset(ef, key)
            acts = ef.infoset_actions(sid)
            if isinstance(val, str):
                if val not in acts:
                    raise FormError(f"action {val!r} not available at {sid}")
                dist = {a: Fraction(int(a == val)) for a in acts}
            else:
                dist = {a: Fraction(0) for a in acts}
                for a, p in dict(val).items():
                    if a not in dist:
                        raise FormError(f"action {a!r} not available at {sid}")
                    dist[a] = as_fraction(p)
            sig[sid] = dist
        given = {}
        for key, p in (mu or {}).items():
            h = parse_history(key)
            if h not in ef.infoset_of:
                raise FormError(f"belief given for {fmt_history(h)}, which is not a player decision history")
            given[h] = as_fraction(p)
        full = {}
        for sid, hs in ef.infosets.items():
            for h in hs:
                full[h] = given.get(h, Fraction(1) if len(hs) == 1 else Fraction(0))
        a = cls(sig, full)
        diags = check_assessment(ef, a)
        if diags:
            raise FormError("; ".join(diags))
        return a

    def belief(self, h: tuple) -> Fraction:
        """``mu(h)``; chance histories count as singleton sets (belief 1)."""
        return self.mu.get(h, Fraction(1))

    def support(self, ef: ExtensiveForm) -> frozenset:
        """``D+``: decision histories with positive belief."""
        return frozenset(h for h in ef.decision_histories if self.belief(h) > 0)

    def prob(self, ef: ExtensiveForm, h: tuple, a: str) -> Fraction:
        if ef.mover[h] == CHANCE:
            return ef.chance_probs[h][a]
        return self.sigma[ef.infoset_of[h]][a]


def _resolve_infoset(ef: ExtensiveForm, key) -> str:
    if isinstance(key, str) and key in ef.infosets:
        return key
    h = parse_history(key)
    if h not in ef.infoset_of:
        raise FormError(f"unknown information set {key!r}")
    return ef.infoset_of[h]


def check_assessment(ef: ExtensiveForm, a: Assessment) -> list:
    diags = []
    for sid in ef.infosets:
        dist = a.sigma.get(sid)
        if dist is None:
            diags.append(f"no behavior given at information set {sid}")
            continue
        if any(p < 0 for p in dist.values()) or sum(dist.values(), Fraction(0)) != 1:
            diags.append(f"behavior at {sid} is not a probability distribution")
        hs = ef.infosets[sid]
        ps = [a.mu.get(h, Fraction(0)) for h in hs]
        if any(p < 0 for p in ps) or sum(ps, Fraction(0)) != 1:
            diags.append(f"beliefs at {sid} do not sum to 1")
    return diags


def pure_assessment(ef: ExtensiveForm, choices: Mapping, mu: Mapping | None = None) -> Assessment:
    """Shorthand for an assessment whose behavior is pure."""
    return Assessment.make(ef, dict(choices), mu)


# ------------------------------------------------------ sequential rationality


def sequential_value(ef: ExtensiveForm, a: Assessment, i, sid: str, sigma: Mapping | None = None) -> Fraction:
    """Player ``i``'s expected payoff at information set ``sid`` given beliefs."""
    i = ef.player_index(i)
    if sid not in ef.infosets:
        raise FormError(f"unknown information set {sid!r}")
    if ef.infoset_player(sid) != i:
        raise FormError(f"information set {sid} does not belong to {ef.players[i]}")
    prof = a.sigma if sigma is None else sigma
    total = Fraction(0)
    for x in ef.infosets[sid]:
        w = a.mu.get(x, Fraction(0))
        if w:
            total += w * expected_payoffs(ef, prof, start=x)[i]
    return total


def following_infosets(ef: ExtensiveForm, sid: str) -> list:
    """The owner's information sets weakly following ``sid`` (``sid`` first)."""
    i = ef.infoset_player(sid)
    roots = ef.infosets[sid]
    out = [sid]
    for other in ef.player_infosets(i):
        if other == sid:
            continue
        if any(h[:len(r)] == r and len(h) > len(r) for h in ef.infosets[other] for r in roots):
            out.append(other)
    return out


@dataclass(frozen=True)
class Deviation:
    """An improving pure continuation plan at one information set."""

    player: int
    infoset: str
    plan: Mapping  # infoset -> action
    current: Fraction
    improved: Fraction

    def actions(self) -> tuple:
        return tuple(self.plan.values())


def find_improvement(ef: ExtensiveForm, a: Assessment) -> Deviation | None:
    """First information set (in tree order) where a pure continuation plan
    beats the assessment's behavior; ``None`` when sequentially rational.

    Pure plans suffice because the conditional payoff is multilinear in the
    player's behavior at the sets concerned.
    """
    for sid in ef.all_infosets():
        i = ef.infoset_player(sid)
        cur = sequential_value(ef, a, i, sid)
        sets = following_infosets(ef, sid)
        best = None
        for combo in itertools.product(*(ef.infoset_actions(s) for s in sets)):
            prof = dict(a.sigma)
            for s, act in zip(sets, combo):
                prof[s] = {x: Fraction(int(x == act)) for x in ef.infoset_actions(s)}
            v = sequential_value(ef, a, i, sid, prof)
            if v > cur and (best is None or v > best[0]):
                best = (v, dict(zip(sets, combo)))
        if best is not None:
            return Deviation(i, sid, best[1], cur, best[0])
    return None


def is_sequentially_rational(ef: ExtensiveForm, a: Assessment) -> bool:
    return find_improvement(ef, a) is None


def bayes_updating_reached(ef: ExtensiveForm, a: Assessment) -> bool:
    """Beliefs equal conditional reach probabilities wherever a set is reached."""
    reach = reach_probabilities(ef, a.sigma)
    for hs in ef.infosets.values():
        tot = sum((reach.get(h, Fraction(0)) for h in hs), Fraction(0))
        if tot == 0:
            continue
        for h in hs:
            if a.mu.get(h, Fraction(0)) != reach.get(h, Fraction(0)) / tot:
                return False
    return True


def is_weak_sequential(ef: ExtensiveForm, a: Assessment) -> bool:
    return is_sequentially_rational(ef, a) and bayes_updating_reached(ef, a)


# ---------------------------------------------------------- plausibility orders


@dataclass(frozen=True)
class HistoryPlausibilityOrder:
    """Levels of histories, most plausible first."""

    levels: tuple

    def __init__(self, levels: Iterable[Iterable]):
        lv = tuple(frozenset(parse_history(h) for h in level) for level in levels)
        if any(not level for level in lv):
            raise FormError("plausibility levels must be nonempty")
        object.__setattr__(self, "levels", lv)

    @property
    def histories(self) -> frozenset:
        return frozenset().union(*self.levels)

    def rank(self, h) -> int:
        h = parse_history(h)
        for k, level in enumerate(self.levels):
            if h in level:
                return k
        raise FormError(f"history {fmt_history(h)} not in the order")

    def ranks(self) -> dict:
        return {h: k for k, level in enumerate(self.levels) for h in level}

    def geq(self, h, g) -> bool:
        """``h`` is at least as plausible as ``g``."""
        return self.rank(h) <= self.rank(g)

    def level_of(self, h) -> frozenset:
        return self.levels[self.rank(h)]

    def format(self, ef: ExtensiveForm | None = None) -> str:
        pos = {h: k for k, h in enumerate(ef.order)} if ef is not None else None
        rows = []
        for level in self.levels:
            hs = sorted(level, key=(lambda h: pos[h]) if pos else (lambda h: (len(h), h)))
            rows.append(", ".join(fmt_history(h) for h in hs))
        return " | ".join(rows)


def check_order(ef: ExtensiveForm, order: HistoryPlausibilityOrder) -> list:
    """Partition and PL1–PL3 diagnostics (empty when valid)."""
    diags = []
    seen: set = set()
    for level in order.levels:
        if seen & level:
            diags.append("a history appears at two levels")
        seen |= level
    if seen != set(ef.order):
        missing = set(ef.order) - seen
        extra = seen - set(ef.order)
        if missing:
            diags.append("histories missing from the order: " + ", ".join(fmt_history(h) for h in sorted(missing)))
        if extra:
            diags.append("unknown histories in the order: " + ", ".join(fmt_history(h) for h in sorted(extra)))
        return diags
    r = order.ranks()
    for h in ef.decision_histories:
        acts = ef.actions[h]
        for x in acts:
            if r[h + (x,)] < r[h]:
                diags.append(f"PL1: {fmt_history(h + (x,))} is more plausible than {fmt_history(h)}")
        if not any(r[h + (x,)] == r[h] for x in acts):
            diags.append(f"PL2: no plausibility-preserving action at {fmt_history(h)}")
        if ef.mover[h] == CHANCE:
            for x in acts:
                if r[h + (x,)] != r[h]:
                    diags.append(f"PL3: chance action {x} at {fmt_history(h)} is not plausibility preserving")
        else:
            for x in acts:
                if r[h + (x,)] == r[h]:
                    for g in ef.infosets[ef.infoset_of[h]]:
                        if r[g + (x,)] != r[g]:
                            diags.append(f"PL2: {x} preserves plausibility at {fmt_history(h)} but not at {fmt_history(g)}")
    return sorted(set(diags))


def check_rationalizes(ef: ExtensiveForm, a: Assessment, order: HistoryPlausibilityOrder) -> list:
    """Order diagnostics plus the two support conditions linking it to ``a``."""
    diags = check_order(ef, order)
    if diags:
        return diags
    r = order.ranks()
    for h in ef.decision_histories:
        if ef.mover[h] == CHANCE:
            continue
        for x in ef.actions[h]:
            if (a.prob(ef, h, x) > 0) != (r[h + (x,)] == r[h]):
                diags.append(f"P1: action {x} at {fmt_history(h)}")
        best = min(r[g] for g in ef.infosets[ef.infoset_of[h]])
        if (a.belief(h) > 0) != (r[h] == best):
            diags.append(f"P2: belief at {fmt_history(h)}")
    return diags


@dataclass(frozen=True)
class ForcedStructure:
    """Equivalence classes and strict edges every rationalizing order obeys.

    ``classes`` is in a topological order of the strict edges; ``edges``
    holds index pairs ``(i, j)`` meaning class ``i`` is strictly more
    plausible than class ``j``.
    """

    classes: tuple
    edges: frozenset

    def index_of(self) -> dict:
        return {h: k for k, c in enumerate(self.classes) for h in c}

    def depths(self) -> list:
        d = [0] * len(self.classes)
        for k in range(len(self.classes)):
            for i, j in self.edges:
                if j == k:
                    d[k] = max(d[k], d[i] + 1)
        return d


def forced_structure(ef: ExtensiveForm, a: Assessment) -> ForcedStructure | None:
    """The relations forced by the supports of ``a``; ``None`` if contradictory."""
    parent = {h: h for h in ef.order}

    def find(h):
        while parent[h] != h:
            parent[h] = parent[parent[h]]
            h = parent[h]
        return h

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    strict = []
    for h in ef.decision_histories:
        for x in ef.actions[h]:
            if a.prob(ef, h, x) > 0:
                union(h, h + (x,))
            else:
                strict.append((h, h + (x,)))
    for hs in ef.infosets.values():
        pos = [h for h in hs if a.belief(h) > 0]
        zero = [h for h in hs if a.belief(h) == 0]
        for h in pos[1:]:
            union(pos[0], h)
        for z in zero:
            strict.append((pos[0], z))
    groups: dict = {}
    for h in ef.order:
        groups.setdefault(find(h), []).append(h)
    roots = list(groups)  # first-visit order
    cid = {r: k for k, r in enumerate(roots)}
    edges = set()
    for x, y in strict:
        i, j = cid[find(x)], cid[find(y)]
        if i == j:
            return None
        edges.add((i, j))
    # Kahn's algorithm, smallest index first for determinism
    indeg = [0] * len(roots)
    for _, j in edges:
        indeg[j] += 1
    ready = [k for k in range(len(roots)) if indeg[k] == 0]
    topo = []
    while ready:
        ready.sort()
        k = ready.pop(0)
        topo.append(k)
        for i, j in edges:
            if i == k:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
    if len(topo) != len(roots):
        return None
    new = {old: n for n, old in enumerate(topo)}
    classes = tuple(frozenset(groups[roots[k]]) for k in topo)
    return ForcedStructure(classes, frozenset((new[i], new[j]) for i, j in edges))


def rationalize(ef: ExtensiveForm, a: Assessment) -> HistoryPlausibilityOrder | None:
    """A plausibility order rationalizing ``a`` or ``None`` if none exists.

    Forced classes at the same strict-path depth share a level, which gives
    the coarsest layering of the forced structure.
    """
    fs = forced_structure(ef, a)
    if fs is None:
        return None
    depth = fs.depths()
    levels: dict = {}
    for k, c in enumerate(fs.classes):
        levels.setdefault(depth[k], set()).update(c)
    return HistoryPlausibilityOrder([levels[d] for d in sorted(levels)])


def finest_order(ef: ExtensiveForm, a: Assessment) -> HistoryPlausibilityOrder | None:
    """The rationalizing order with one level per forced class."""
    fs = forced_structure(ef, a)
    if fs is None:
        return None
    return HistoryPlausibilityOrder(fs.classes)


def rationalizing_orders(ef: ExtensiveForm, a: Assessment, cap: int = DEFAULT_ORDER_CAP):
    """Enumerate every order rationalizing ``a`` (weak orders extending the
    forced structure).  Raises :class:`CapExceeded` after ``cap`` candidates."""
    fs = forced_structure(ef, a)
    if fs is None:
        return
    n = len(fs.classes)
    preds = {k: {i for i, j in fs.edges if j == k} for k in range(n)}
    count = 0

    def rec(placed: frozenset, levels: list):
        nonlocal count
        if len(placed) == n:
            count += 1
            if count > cap:
                raise CapExceeded(f"more than {cap} candidate plausibility orders")
            yield HistoryPlausibilityOrder([set().union(*(fs.classes[k] for k in lv)) for lv in levels])
            return
        avail = [k for k in range(n) if k not in placed and preds[k] <= placed]
        for size in range(1, len(avail) + 1):
            for group in itertools.combinations(avail, size):
                yield from rec(placed | set(group), levels + [group])

    yield from rec(frozenset(), [])


# ------------------------------------------------------------- Bayes witness


def _prefix_factor(a: Assessment, ef: ExtensiveForm, h: tuple, g: tuple) -> Fraction:
    p = Fraction(1)
    for k in range(len(h), len(g)):
        p *= a.prob(ef, g[:k], g[k])
    return p


def _class_witness(ef: ExtensiveForm, a: Assessment, members: Sequence[tuple]) -> dict | None:
    idx = {h: k for k, h in enumerate(members)}
    n = len(members)
    cons = [([1] * n, "==", 1)]
    for h in members:
        for g in members:
            if g != h and g[:len(h)] == h:
                cons.append(({idx[g]: 1, idx[h]: -_prefix_factor(a, ef, h, g)}, "==", 0))
    done = set()
    for h in members:
        if ef.mover[h] == CHANCE:
            continue
        sid = ef.infoset_of[h]
        if sid in done:
            continue
        done.add(sid)
        inside = [g for g in ef.infosets[sid] if g in idx]
        for g in ef.infosets[sid]:
            row: dict = {}
            for x in inside:
                row[idx[x]] = row.get(idx[x], 0) - a.belief(g)
            if g in idx:
                row[idx[g]] = row.get(idx[g], 0) + 1
            cons.append((row, "==", 0))
    res = strict_feasible(n, cons, [({k: 1}, ">", 0) for k in range(n)])
    if res is None:
        return None
    return dict(zip(members, res[0]))


def bayes_witness(ef: ExtensiveForm, a: Assessment, order: HistoryPlausibilityOrder) -> dict | None:
    """Distributions ``{level index: {history: p}}`` meeting B1–B3, one per
    level that contains a positive-belief history, or ``None``."""
    diags = check_rationalizes(ef, a, order)
    if diags:
        raise FormError("order does not rationalize the assessment: " + "; ".join(diags))
    dplus = a.support(ef)
    pos = {h: k for k, h in enumerate(ef.order)}
    out = {}
    for k, level in enumerate(order.levels):
        members = sorted(level & dplus, key=pos.get)
        if not members:
            continue
        nu = _class_witness(ef, a, members)
        if nu is None:
            return None
        out[k] = nu
    return out


def check_bayes_witness(ef: ExtensiveForm, a: Assessment, order: HistoryPlausibilityOrder,
                        family: Mapping) -> bool:
    """Verify B1–B3 for a family ``{level index: {history: p}}``."""
    if check_rationalizes(ef, a, order):
        return False
    dplus = a.support(ef)
    needed = {k for k, level in enumerate(order.levels) if level & dplus}
    if set(family) != needed:
        return False
    for k, raw in family.items():
        nu = {parse_history(h): as_fraction(p) for h, p in raw.items()}
        E = order.levels[k]
        target = E & dplus
        if sum(nu.values(), Fraction(0)) != 1 or any(p < 0 for p in nu.values()):
            return False
        if {h for h, p in nu.items() if p > 0} != target:
            return False
        for h in target:
            for g in target:
                if g != h and g[:len(h)] == h and nu[g] != nu[h] * _prefix_factor(a, ef, h, g):
                    return False
        for h in target:
            if ef.mover[h] == CHANCE:
                continue
            hs = ef.infosets[ef.infoset_of[h]]
            tot = sum((nu.get(g, Fraction(0)) for g in hs), Fraction(0))
            for g in hs:
                if a.belief(g) != nu.get(g, Fraction(0)) / tot:
                    return False
    return True


@dataclass(frozen=True)
class PBECertificate:
    order: HistoryPlausibilityOrder
    witness: dict


def pbe_certificate(ef: ExtensiveForm, a: Assessment, exhaustive: bool = False,
                    cap: int = DEFAULT_ORDER_CAP) -> PBECertificate | None:
    """Order and Bayes witness proving ``a`` is a perfect Bayesian equilibrium.

    Refining levels never breaks B1–B3 (conditioning a witness on a sub-level
    yields a witness), so the finest rationalizing order decides the
    question; ``exhaustive`` walks all completions instead (capped).
    """
    require_valid(ef)
    if not is_sequentially_rational(ef, a):
        return None
    candidates = rationalizing_orders(ef, a, cap) if exhaustive else [finest_order(ef, a)]
    for order in candidates:
        if order is None:
            return None
        w = bayes_witness(ef, a, order)
        if w is not None:
            return PBECertificate(order, w)
    return None


def is_pbe(ef: ExtensiveForm, a: Assessment, exhaustive: bool = False, cap: int = DEFAULT_ORDER_CAP) -> bool:
    return pbe_certificate(ef, a, exhaustive, cap) is not None


# ----------------------------------------------------------------- independence


def independence_checks(ef: ExtensiveForm, order: HistoryPlausibilityOrder, mu) -> tuple:
    """``(IND1, IND2, IND3)`` for an order and a belief system.

    ``mu`` is an :class:`Assessment` or a ``{history: p}`` mapping (missing
    entries count as 0).
    """
    if isinstance(mu, Assessment):
        beliefs = dict(mu.mu)
    else:
        beliefs = {parse_history(h): as_fraction(p) for h, p in mu.items()}
    r = order.ranks()
    ind1 = ind2 = ind3 = True
    for hs in ef.infosets.values():
        acts = ef.actions[hs[0]]
        for h in hs:
            for g in hs:
                for x in acts:
                    if (r[h] <= r[g]) != (r[h + (x,)] <= r[g + (x,)]):
                        ind1 = False
                for x in acts:
                    for y in acts:
                        if (r[h + (x,)] <= r[h + (y,)]) != (r[g + (x,)] <= r[g + (y,)]):
                            ind2 = False
                for x in acts:
                    hx, gx = h + (x,), g + (x,)
                    if hx not in ef.infoset_of or gx not in ef.infoset_of:
                        continue
                    if ef.infoset_of[hx] != ef.infoset_of[gx]:
                        continue
                    vals = [beliefs.get(v, Fraction(0)) for v in (h, g, hx, gx)]
                    if all(v > 0 for v in vals) and vals[0] * vals[3] != vals[1] * vals[2]:
                        ind3 = False
    return ind1, ind2, ind3


# ---------------------------------------------------------- choice measurability


@dataclass(frozen=True)
class IntegerRep:
    """Integer plausibility values ``F`` (lower = more plausible).

    ``lam`` maps ``(infoset id, action)`` to the integer step an action adds
    when the representation comes from the action decomposition.
    """

    F: Mapping
    lam: Mapping | None = None


def canonical_rep(order: HistoryPlausibilityOrder) -> IntegerRep:
    """Each history's level index."""
    return IntegerRep(order.ranks())


def is_integer_rep(order: HistoryPlausibilityOrder, F: Mapping) -> bool:
    vals = {parse_history(h): as_fraction(v) for h, v in F.items()}
    r = order.ranks()
    if set(vals) != set(r):
        return False
    if any(v < 0 or v.denominator != 1 for v in vals.values()):
        return False
    hs = list(r)
    return all((vals[h] <= vals[g]) == (r[h] <= r[g]) for h in hs for g in hs)


def satisfies_cm(ef: ExtensiveForm, F: Mapping) -> bool:
    """``F(h) - F(h') = F(ha) - F(h'a)`` across every information set."""
    vals = {parse_history(h): as_fraction(v) for h, v in F.items()}
    for hs in ef.infosets.values():
        for h in hs:
            for g in hs:
                for x in ef.actions[h]:
                    if vals[h] - vals[g] != vals[h + (x,)] - vals[g + (x,)]:
                        return False
    return True


def satisfies_diamond(ef: ExtensiveForm, F: Mapping) -> bool:
    """``F(hb) - F(ha) = F(h'b) - F(h'a)`` across every information set."""
    vals = {parse_history(h): as_fraction(v) for h, v in F.items()}
    for hs in ef.infosets.values():
        acts = ef.actions[hs[0]]
        for h in hs:
            for g in hs:
                for x in acts:
                    for y in acts:
                        if vals[h + (y,)] - vals[h + (x,)] != vals[g + (y,)] - vals[g + (x,)]:
                            return False
    return True


def _action_keys(ef: ExtensiveForm) -> list:
    """One key per (information set, action); actions at different sets are
    treated as distinct even when they share a label."""
    keys = []
    for sid in ef.all_infosets():
        for x in ef.infoset_actions(sid):
            keys.append((sid, x))
    return keys


def _path_row(ef: ExtensiveForm, h: tuple, kidx: Mapping) -> dict:
    row: dict = {}
    for k in range(len(h)):
        p = h[:k]
        if ef.mover[p] != CHANCE:
            j = kidx[(ef.infoset_of[p], h[k])]
            row[j] = row.get(j, 0) + 1
    return row


def _diff(r1: dict, r2: dict) -> dict:
    out = dict(r1)
    for j, v in r2.items():
        out[j] = out.get(j, 0) - v
    return out


def _cm_lp(ef: ExtensiveForm, equal_pairs, strict_pairs) -> IntegerRep | None:
    keys = _action_keys(ef)
    kidx = {k: j for j, k in enumerate(keys)}
    rows = {h: _path_row(ef, h, kidx) for h in ef.order}
    cons = []
    for x, y in equal_pairs:
        cons.append((_diff(rows[y], rows[x]), "==", 0))
    for x, y in strict_pairs:
        cons.append((_diff(rows[y], rows[x]), ">=", 1))
    res = solve(len(keys), cons, objective=[1] * len(keys))
    if not res.ok:
        return None
    scale = lcm(*(v.denominator for v in res.x)) if keys else 1
    lam = {k: int(v * scale) for k, v in zip(keys, res.x)}
    F = {h: sum(lam[keys[j]] * c for j, c in rows[h].items()) for h in ef.order}
    return IntegerRep(F, lam)


def choice_measurable(ef: ExtensiveForm, order: HistoryPlausibilityOrder) -> IntegerRep | None:
    """A CM integer representation of ``order`` or ``None``.

    Any CM representation with ``F(root) = 0`` is a sum of per-action steps
    along the history, so the question is linear in those steps: equal
    values within a level, gaps of at least one between consecutive levels.
    The step vector minimizing the total is scaled to integers.
    """
    diags = check_order(ef, order)
    if diags:
        raise FormError("; ".join(diags))
    pos = {h: k for k, h in enumerate(ef.order)}
    reps = [min(level, key=pos.get) for level in order.levels]
    eq = [(reps[k], h) for k, level in enumerate(order.levels) for h in level if h != reps[k]]
    st = [(reps[k], reps[k + 1]) for k in range(len(reps) - 1)]
    return _cm_lp(ef, eq, st)


def _order_from_values(F: Mapping) -> HistoryPlausibilityOrder:
    by: dict = {}
    for h, v in F.items():
        by.setdefault(v, set()).add(h)
    return HistoryPlausibilityOrder([by[v] for v in sorted(by)])


def cm_rationalizing_order(ef: ExtensiveForm, a: Assessment):
    """``(order, rep)`` for some choice-measurable order rationalizing ``a``.

    Every weak order extending the forced structure rationalizes ``a``, and
    any CM representation respecting the forced relations induces such an
    order, so one linear program answers the existence question.
    """
    fs = forced_structure(ef, a)
    if fs is None:
        return None
    pos = {h: k for k, h in enumerate(ef.order)}
    reps = [min(c, key=pos.get) for c in fs.classes]
    eq = [(reps[k], h) for k, c in enumerate(fs.classes) for h in c if h != reps[k]]
    st = [(reps[i], reps[j]) for i, j in sorted(fs.edges)]
    rep = _cm_lp(ef, eq, st)
    if rep is None:
        return None
    return _order_from_values(rep.F), rep


# ----------------------------------------------------------- uniform Bayesian


def uniformly_bayesian(ef: ExtensiveForm, a: Assessment, order: HistoryPlausibilityOrder) -> dict | None:
    """A full-support prior on decision histories meeting UB1–UB2 whose
    conditionals on each level's positive-belief histories satisfy B1–B3.

    UB2 makes ``nu(ha)/nu(h)`` depend only on the action (per information
    set), so ``nu`` is a product of per-action factors: ``sigma(a)`` when
    positive, otherwise an unknown in ``(0, 1]``.  The belief ratios within
    each information set then become linear equations in the logarithms of
    the unknowns, solved exactly.  Returns ``None`` when no prior exists.
    """
    diags = check_rationalizes(ef, a, order)
    if diags:
        raise FormError("order does not rationalize the assessment: " + "; ".join(diags))
    D = ef.decision_histories
    Dset = set(D)
    keys = []  # free factors: zero-probability player actions leading to D
    for sid in ef.all_infosets():
        for x in ef.infoset_actions(sid):
            if a.sigma[sid][x] == 0 and any(h + (x,) in Dset for h in ef.infosets[sid]):
                keys.append((sid, x))
    kidx = {k: j for j, k in enumerate(keys)}

    def decompose(h):
        row: dict = {}
        known = LogSpan()
        for k in range(len(h)):
            p, x = h[:k], h[k]
            q = a.prob(ef, p, x)
            if q > 0:
                known = known + LogSpan.log(q)
            else:
                j = kidx[(ef.infoset_of[p], x)]
                row[j] = row.get(j, 0) + 1
        return row, known

    parts = {h: decompose(h) for h in D}
    cons = []
    for hs in ef.infosets.values():
        pos = [h for h in hs if a.belief(h) > 0]
        for g in pos[1:]:
            h = pos[0]
            rg, kg = parts[g]
            rh, kh = parts[h]
            # log nu(g) - log nu(h) = log mu(g) - log mu(h); unknowns are -u_j
            row = {j: -v for j, v in _diff(rg, rh).items() if v}
            rhs = LogSpan.log(a.belief(g) / a.belief(h)) - (kg - kh)
            cons.append((row, "==", rhs))
    res = solve(len(keys), cons) if cons else None
    if res is not None and not res.ok:
        return None
    u = res.x if res is not None else (LogSpan(),) * len(keys)
    factor = {}
    try:
        for k, v in zip(keys, u):
            factor[k] = (-LogSpan._lift(v)).exp()
    except ValueError:
        raise SolverError("a uniform prior exists but the computed one is not rational") from None
    raw = {}
    for h in D:
        p = Fraction(1)
        for k in range(len(h)):
            q = a.prob(ef, h[:k], h[k])
            p *= q if q > 0 else factor[(ef.infoset_of[h[:k]], h[k])]
        raw[h] = p
    tot = sum(raw.values(), Fraction(0))
    return {h: v / tot for h, v in raw.items()}


def check_uniform_prior(ef: ExtensiveForm, a: Assessment, order: HistoryPlausibilityOrder,
                        nu: Mapping) -> bool:
    """Verify that ``nu`` is a full-support common prior meeting UB1–UB2."""
    nu = {parse_history(h): as_fraction(p) for h, p in nu.items()}
    D = ef.decision_histories
    if set(nu) != set(D) or any(p <= 0 or p > 1 for p in nu.values()):
        return False
    if sum(nu.values(), Fraction(0)) != 1:
        return False
    for h in D:
        for x in ef.actions[h]:
            hx = h + (x,)
            if hx in nu:
                if nu[hx] > nu[h]:
                    return False
                q = a.prob(ef, h, x)
                if q > 0 and nu[hx] != nu[h] * q:
                    return False
    for hs in ef.infosets.values():
        for h in hs:
            for g in hs:
                for x in ef.actions[h]:
                    hx, gx = h + (x,), g + (x,)
                    if hx in nu and gx in nu and nu[h] * nu[gx] != nu[g] * nu[hx]:
                        return False
    dplus = a.support(ef)
    family = {}
    for k, level in enumerate(order.levels):
        target = level & dplus
        if target:
            tot = sum((nu[h] for h in target), Fraction(0))
            family[k] = {h: nu[h] / tot for h in target}
    return check_bayes_witness(ef, a, order, family)


# ---------------------------------------------------------- sequential equilibrium


@dataclass(frozen=True)
class SECertificate:
    order: HistoryPlausibilityOrder
    rep: IntegerRep
    prior: dict


def se_certificate(ef: ExtensiveForm, a: Assessment, exhaustive: bool = False,
                   cap: int = DEFAULT_ORDER_CAP) -> SECertificate | None:
    """Evidence that ``a`` is a sequential equilibrium, or ``None``.

    Uses the characterization: sequentially rational, and rationalized by a
    choice-measurable order relative to which it is uniformly Bayesian.  The
    uniform-prior conditions only involve the forced structure, so the
    default path needs no search; ``exhaustive`` enumerates completions and
    raises :class:`CapExceeded` past ``cap`` (reported as undecided).
    """
    require_valid(ef)
    if not is_sequentially_rational(ef, a):
        return None
    if exhaustive:
        for order in rationalizing_orders(ef, a, cap):
            rep = choice_measurable(ef, order)
            if rep is None:
                continue
            nu = uniformly_bayesian(ef, a, order)
            if nu is not None:
                return SECertificate(order, rep, nu)
        return None
    found = cm_rationalizing_order(ef, a)
    if found is None:
        return None
    order, rep = found
    nu = uniformly_bayesian(ef, a, order)
    if nu is None:
        return None
    return SECertificate(order, rep, nu)


def is_sequential_equilibrium(ef: ExtensiveForm, a: Assessment, exhaustive: bool = False,
                              cap: int = DEFAULT_ORDER_CAP) -> bool:
    return se_certificate(ef, a, exhaustive, cap) is not None
