"""Lotteries, expected utility and von Neumann–Morgenstern utilities.

Everything here is exact: probabilities and utilities are ``Fraction``s and
outcome labels are plain strings.  A "money lottery" is simply a lottery
whose labels parse as rationals (``"30"``, ``"$45"``, ``"2/3"``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union


class LotteryError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` or ``"$15"`` and Fractions."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a Fraction or a 'p/q' string")
    if isinstance(x, str):
        s = x.strip().lstrip("$").replace(",", "")
        return Fraction(s)
    return Fraction(x)


@dataclass(frozen=True)
class SimpleLottery:
    outcomes: tuple
    probs: tuple

    def __init__(self, outcomes: Sequence[str], probs: Sequence):
        outs = tuple(str(o) for o in outcomes)
        ps = tuple(as_fraction(p) for p in probs)
        if len(outs) != len(ps):
            raise LotteryError("outcomes and probabilities differ in length")
        if len(set(outs)) != len(outs):
            raise LotteryError("outcome labels must be distinct")
        if any(p < 0 or p > 1 for p in ps):
            raise LotteryError("probabilities must lie in [0, 1]")
        if sum(ps, Fraction(0)) != 1:
            raise LotteryError(f"probabilities sum to {sum(ps, Fraction(0))}, not 1")
        object.__setattr__(self, "outcomes", outs)
        object.__setattr__(self, "probs", ps)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple]) -> "SimpleLottery":
        pairs = list(pairs)
        return cls([o for o, _ in pairs], [p for _, p in pairs])

    @classmethod
    def degenerate(cls, outcome: str) -> "SimpleLottery":
        return cls([outcome], [1])

    def prob(self, outcome: str) -> Fraction:
        try:
            return self.probs[self.outcomes.index(outcome)]
        except ValueError:
            return Fraction(0)

    def as_dict(self) -> dict:
        return dict(zip(self.outcomes, self.probs))

    def __iter__(self):
        return iter(zip(self.outcomes, self.probs))


@dataclass(frozen=True)
class CompoundLottery:
    """A lottery whose prizes are outcomes or simple lotteries (depth one)."""

    entries: tuple

    def __init__(self, entries: Iterable[tuple]):
        ents = []
        for item, p in entries:
            if isinstance(item, CompoundLottery):
                raise LotteryError("compound lotteries nest exactly one level deep")
            if not isinstance(item, SimpleLottery):
                item = str(item)
            ents.append((item, as_fraction(p)))
        ps = [p for _, p in ents]
        if any(p < 0 or p > 1 for p in ps):
            raise LotteryError("probabilities must lie in [0, 1]")
        if sum(ps, Fraction(0)) != 1:
            raise LotteryError("compound probabilities must sum to 1")
        object.__setattr__(self, "entries", tuple(ents))


@dataclass(frozen=True)
class UtilityFunction:
    values: Mapping[str, Fraction] = field(default_factory=dict)

    def __init__(self, values: Union[Mapping, Iterable[tuple]]):
        items = values.items() if isinstance(values, Mapping) else values
        object.__setattr__(self, "values", {str(k): as_fraction(v) for k, v in items})

    def __call__(self, outcome: str) -> Fraction:
        try:
            return self.values[outcome]
        except KeyError:
            raise LotteryError(f"no utility value for outcome {outcome!r}") from None

    @property
    def outcomes(self) -> tuple:
        return tuple(self.values)

    def __hash__(self):
        return hash(tuple(sorted(self.values.items())))


@dataclass(frozen=True)
class Ranking:
    """Ordered indifference classes, best first."""

    levels: tuple

    def __init__(self, levels: Iterable[Iterable[str]]):
        lv = tuple(frozenset(str(o) for o in level) for level in levels)
        if any(not level for level in lv):
            raise LotteryError("ranking levels must be nonempty")
        seen: set = set()
        for level in lv:
            if seen & level:
                raise LotteryError("ranking levels must be disjoint")
            seen |= level
        object.__setattr__(self, "levels", lv)

    @property
    def outcomes(self) -> frozenset:
        return frozenset().union(*self.levels) if self.levels else frozenset()

    def rank(self, outcome: str) -> int:
        for k, level in enumerate(self.levels):
            if outcome in level:
                return k
        raise LotteryError(f"outcome {outcome!r} not ranked")

    def best(self) -> frozenset:
        return self.levels[0]

    def worst(self) -> frozenset:
        return self.levels[-1]


# ---------------------------------------------------------------- operations


def expected_value(L: SimpleLottery) -> Fraction:
    total = Fraction(0)
    for o, p in L:
        try:
            x = as_fraction(o)
        except (ValueError, ZeroDivisionError):
            raise LotteryError(f"outcome {o!r} is not a money amount") from None
        total += x * p
    return total


def expected_utility(L: SimpleLottery, U: UtilityFunction) -> Fraction:
    return sum((p * U(o) for o, p in L), Fraction(0))


def reduce_compound(C: CompoundLottery) -> SimpleLottery:
    """Collapse a compound lottery to the simple lottery it induces.

    Outcomes appear in order of first mention.
    """
    order: list[str] = []
    acc: dict[str, Fraction] = {}

    def add(o: str, q: Fraction) -> None:
        if o not in acc:
            order.append(o)
            acc[o] = Fraction(0)
        acc[o] += q

    for item, p in C.entries:
        if isinstance(item, SimpleLottery):
            for o, q in item:
                add(o, p * q)
        else:
            add(item, p)
    return SimpleLottery(order, [acc[o] for o in order])


def represents(U: UtilityFunction, R: Ranking) -> bool:
    """True iff ``U`` orders the outcomes exactly as ``R`` does."""
    outs = list(R.outcomes)
    for a in outs:
        for b in outs:
            ra, rb = R.rank(a), R.rank(b)
            ua, ub = U(a), U(b)
            if (ra < rb) != (ua > ub) or (ra == rb) != (ua == ub):
                return False
    return True


def normalize(U: UtilityFunction, R: Ranking) -> UtilityFunction:
    """Affinely rescale ``U`` so the best outcome gets 1 and the worst 0."""
    if len(R.levels) < 2:
        raise LotteryError("ranking has a single indifference class; cannot normalize")
    if not represents(U, R):
        raise LotteryError("utility function does not represent the ranking")
    hi = U(next(iter(R.best())))
    lo = U(next(iter(R.worst())))
    span = hi - lo
    return UtilityFunction({o: (v - lo) / span for o, v in U.values.items()})


def affine_relation(U: UtilityFunction, V: UtilityFunction):
    """Return ``(a, b)`` with ``a > 0`` and ``V = aU + b``, else ``None``."""
    if set(U.values) != set(V.values):
        raise LotteryError("utility functions are defined on different outcomes")
    outs = list(U.values)
    first = outs[0]
    other = next((o for o in outs if U(o) != U(first)), None)
    if other is None:
        raise LotteryError("U is constant; the affine relation is underdetermined")
    a = (V(other) - V(first)) / (U(other) - U(first))
    b = V(first) - a * U(first)
    if a <= 0:
        return None
    if all(V(o) == a * U(o) + b for o in outs):
        return a, b
    return None


def vnm_from_continuity(R: Ranking, p: Mapping[str, object]) -> UtilityFunction:
    """Build the normalized utility ``U(o) = p(o)`` from indifference probabilities.

    ``p[o]`` is the probability on the best outcome that makes the
    best/worst lottery as good as ``o``.  Best outcomes get 1, worst get 0.
    """
    if len(R.levels) < 2:
        raise LotteryError("need at least two indifference classes")
    vals: dict[str, Fraction] = {}
    level_value: list[Fraction] = []
    for k, level in enumerate(R.levels):
        if k == 0:
            v = Fraction(1)
            for o in level:
                vals[o] = v
        elif k == len(R.levels) - 1:
            v = Fraction(0)
            for o in level:
                vals[o] = v
        else:
            missing = [o for o in level if o not in p]
            if missing:
                raise LotteryError(f"no indifference probability for {sorted(missing)}")
            vs = {as_fraction(p[o]) for o in level}
            if len(vs) != 1:
                raise LotteryError("indifferent outcomes must share the same probability")
            v = vs.pop()
            if not 0 < v < 1:
                raise LotteryError("intermediate outcomes need probabilities strictly between 0 and 1")
            for o in level:
                vals[o] = v
        level_value.append(v)
    if any(level_value[k] <= level_value[k + 1] for k in range(len(level_value) - 1)):
        raise LotteryError("probabilities are not strictly decreasing down the ranking")
    return UtilityFunction(vals)


def risk_attitude(U: Mapping, L: SimpleLottery) -> str:
    """Classify risk attitude at ``L``: ``averse``, ``neutral`` or ``loving``.

    ``U`` maps money amounts (anything ``as_fraction`` accepts) to utilities
    and must include the expected value of ``L``.
    """
    table = {as_fraction(k): as_fraction(v) for k, v in dict(U).items()}
    ev = expected_value(L)
    if ev not in table:
        raise LotteryError(f"utility not tabled at the expected value {ev}")
    eu = Fraction(0)
    for o, pr in L:
        x = as_fraction(o)
        if x not in table:
            raise LotteryError(f"utility not tabled at {x}")
        eu += pr * table[x]
    if eu < table[ev]:
        return "averse"
    if eu == table[ev]:
        return "neutral"
    return "loving"
