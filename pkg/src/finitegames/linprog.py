"""Exact linear programming over the rationals.

A small dense two-phase simplex that works on :class:`fractions.Fraction`
entries and pivots with Bland's rule, so it always terminates and never
loses precision.  Every variable is implicitly non-negative.

Constraints are written as ``(coeffs, op, rhs)`` triples where ``coeffs`` is
a sequence (or a ``{index: coeff}`` mapping) and ``op`` is one of ``"<="``,
``">="``, ``"=="``.  Strict inequalities are handled by :func:`strict_feasible`,
which introduces a shared margin variable and maximizes it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

Coeffs = Union[Sequence, Mapping[int, object]]
Constraint = tuple  # (Coeffs, str, rhs)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple = ()
    value: Fraction | None = None

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def _dense(coeffs: Coeffs, n: int) -> list[Fraction]:
    row = [Fraction(0)] * n
    if isinstance(coeffs, Mapping):
        for j, v in coeffs.items():
            if not 0 <= j < n:
                raise IndexError(f"variable index {j} out of range (n={n})")
            row[j] += Fraction(v)
    else:
        if len(coeffs) > n:
            raise ValueError("constraint has more coefficients than variables")
        for j, v in enumerate(coeffs):
            row[j] = Fraction(v)
    return row


def _rhs(v):
    """Right-hand sides may be any ordered Q-vector-space element (see
    :class:`LogSpan`); plain numbers are coerced to ``Fraction``."""
    if isinstance(v, (int, str, Fraction)):
        return Fraction(v)
    return v


class _Tableau:
    """Row-major simplex tableau; the last column holds the right-hand side."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        p = prow[c]
        if p != 1:
            prow = [v / p for v in prow]
            self.rows[r] = prow
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(row, prow)]
        self.basis[r] = c

    def run(self, cost: list[Fraction], allowed: int) -> str:
        """Minimize ``cost·x`` over columns ``< allowed`` (Bland's rule).

        ``cost`` is the original cost vector; reduced costs are recomputed
        from the basis each iteration, which is cheap at our sizes and keeps
        the tableau free of an objective row.
        """
        while True:
            m = len(self.rows)
            reduced = list(cost[:allowed])
            for i in range(m):
                cb = cost[self.basis[i]]
                if cb:
                    row = self.rows[i]
                    for j in range(allowed):
                        if row[j]:
                            reduced[j] -= cb * row[j]
            enter = next((j for j in range(allowed) if reduced[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i in range(m):
                a = self.rows[i][enter]
                if a > 0:
                    ratio = self.rows[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], enter)


def solve(
    n: int,
    constraints: Iterable[Constraint],
    objective: Coeffs | None = None,
    maximize: bool = False,
) -> LPResult:
    """Optimize a linear objective over ``{x >= 0 : constraints}``.

    With no objective this is a pure feasibility check and the returned point
    is whatever basic feasible solution phase one lands on.
    """
    rows: list[list[Fraction]] = []
    kinds: list[str] = []
    for coeffs, op, rhs in constraints:
        row = _dense(coeffs, n)
        b = _rhs(rhs)
        if op not in ("<=", ">=", "=="):
            raise ValueError(f"unsupported relation {op!r}")
        if b < 0:
            row = [-v for v in row]
            b = -b
            op = {"<=": ">=", ">=": "<=", "==": "=="}[op]
        rows.append(row + [b])
        kinds.append(op)

    m = len(rows)
    n_slack = sum(1 for k in kinds if k != "==")
    width = n + n_slack + m  # structural | slack | artificial
    table: list[list[Fraction]] = []
    basis: list[int] = []
    s = n
    for i, (row, kind) in enumerate(zip(rows, kinds)):
        full = row[:n] + [Fraction(0)] * (n_slack + m) + [row[n]]
        if kind == "<=":
            full[s] = Fraction(1)
            s += 1
        elif kind == ">=":
            full[s] = Fraction(-1)
            s += 1
        full[n + n_slack + i] = Fraction(1)
        table.append(full)
        basis.append(n + n_slack + i)

    tab = _Tableau(table, basis)
    phase1 = [Fraction(0)] * (n + n_slack) + [Fraction(1)] * m
    tab.run(phase1, width)
    infeas = Fraction(0)
    for i in range(m):
        if tab.basis[i] >= n + n_slack:
            infeas = tab.rows[i][-1] + infeas
    if infeas > 0:
        return LPResult(INFEASIBLE)

    # Drive zero-valued artificials out of the basis; drop redundant rows.
    keep: list[int] = []
    for i in range(m):
        if tab.basis[i] < n + n_slack:
            keep.append(i)
            continue
        col = next((j for j in range(n + n_slack) if tab.rows[i][j] != 0), None)
        if col is None:
            continue
        tab.pivot(i, col)
        keep.append(i)
    tab.rows = [tab.rows[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    cost = [Fraction(0)] * width
    if objective is not None:
        obj = _dense(objective, n)
        sign = -1 if maximize else 1
        for j in range(n):
            cost[j] = sign * obj[j]
        status = tab.run(cost, n + n_slack)
        if status == UNBOUNDED:
            return LPResult(UNBOUNDED)

    x = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        if j < n:
            x[j] = tab.rows[i][-1]
    value = None
    if objective is not None:
        obj = _dense(objective, n)
        value = sum((a * b for a, b in zip(obj, x)), Fraction(0))
    return LPResult(OPTIMAL, tuple(x), value)


def feasible_point(n: int, constraints: Iterable[Constraint]) -> tuple | None:
    """Return some non-negative solution of the constraints, or ``None``."""
    res = solve(n, list(constraints))
    return res.x if res.ok else None


def strict_feasible(
    n: int,
    constraints: Iterable[Constraint],
    strict: Iterable[tuple],
    cap: Fraction = Fraction(1),
) -> tuple | None:
    """Find ``x >= 0`` meeting ``constraints`` and every strict row.

    ``strict`` holds ``(coeffs, op, rhs)`` with ``op`` in ``"<"`` / ``">"``.
    A margin ``t`` (capped at ``cap``) is added to each strict row and
    maximized; the system is strictly feasible exactly when the optimum
    margin is positive.  Returns ``(x, t)`` or ``None``.
    """
    cons = []
    for coeffs, op, rhs in constraints:
        row = _dense(coeffs, n)
        cons.append((row + [Fraction(0)], op, rhs))
    for coeffs, op, rhs in strict:
        row = _dense(coeffs, n)
        if op == "<":
            cons.append((row + [Fraction(1)], "<=", rhs))
        elif op == ">":
            cons.append((row + [Fraction(-1)], ">=", rhs))
        else:
            raise ValueError(f"strict relation expected, got {op!r}")
    cons.append(({n: 1}, "<=", cap))
    res = solve(n + 1, cons, objective={n: 1}, maximize=True)
    if not res.ok or res.value <= 0:
        return None
    return res.x[:n], res.value


def lexmin(n: int, constraints: Iterable[Constraint], order: Sequence[int] | None = None) -> tuple | None:
    """Lexicographically smallest feasible point (a vertex of the region).

    Minimizes the variables one at a time in ``order`` (default: index
    order), freezing each optimum before moving on.
    """
    cons = list(constraints)
    if solve(n, cons).status != OPTIMAL:
        return None
    for j in (order if order is not None else range(n)):
        res = solve(n, cons, objective={j: 1})
        if not res.ok:
            return None
        cons.append(({j: 1}, "==", res.value))
    return solve(n, cons).x


def solve_equations(A: Sequence[Sequence], b: Sequence):
    """Exact Gauss–Jordan solve of ``A x = b``.

    Returns ``(x0, free)`` where ``x0`` is the particular solution with all
    free variables set to zero and ``free`` lists the free column indices,
    or ``None`` when the system is inconsistent.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(A, b)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [v / pv for v in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    free = [c for c in range(n) if c not in pivots]
    return tuple(x), free


# ------------------------------------------------------ logarithms of rationals


def _factor(n: int) -> dict:
    """Prime factorization of a positive integer by trial division."""
    out: dict = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class LogSpan:
    """An exact element ``sum_p c_p * log(p)`` with rational ``c_p``.

    Logarithms of distinct primes are linearly independent over the
    rationals, so these values can be added, scaled by rationals and compared
    exactly (the sign of ``sum c_p log p`` is the sign of ``log prod p^c_p``).
    This lets the simplex above decide multiplicative feasibility questions
    ``prod x_j^{a_ij} = q_i`` by working with ``log x_j``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {p: Fraction(c) for p, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def log(cls, q) -> "LogSpan":
        q = Fraction(q)
        if q <= 0:
            raise ValueError("logarithm of a non-positive number")
        c: dict = {}
        for p, e in _factor(q.numerator).items():
            c[p] = c.get(p, 0) + e
        for p, e in _factor(q.denominator).items():
            c[p] = c.get(p, 0) - e
        return cls(c)

    @staticmethod
    def _lift(other) -> "LogSpan":
        if isinstance(other, LogSpan):
            return other
        if other == 0:
            return LogSpan()
        raise TypeError("only zero can be mixed with a LogSpan value")

    def __add__(self, other):
        o = self._lift(other)
        c = dict(self.coeffs)
        for p, v in o.coeffs.items():
            c[p] = c.get(p, 0) + v
        return LogSpan(c)

    __radd__ = __add__

    def __neg__(self):
        return LogSpan({p: -v for p, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, k):
        if isinstance(k, LogSpan):
            raise TypeError("LogSpan values only scale by rationals")
        k = Fraction(k)
        return LogSpan({p: v * k for p, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / Fraction(k))

    def sign(self) -> int:
        if not self.coeffs:
            return 0
        den = 1
        for v in self.coeffs.values():
            den = den * v.denominator // gcd(den, v.denominator)
        num, dnm = 1, 1
        for p, v in self.coeffs.items():
            e = int(v * den)
            if e > 0:
                num *= p ** e
            else:
                dnm *= p ** (-e)
        return (num > dnm) - (num < dnm)

    def _cmp(self, other) -> int:
        return (self - self._lift(other)).sign() if isinstance(other, LogSpan) or other == 0 else _bad()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def exp(self) -> Fraction:
        """The rational ``prod p^c_p``; raises if some exponent is fractional."""
        out = Fraction(1)
        for p, v in self.coeffs.items():
            if v.denominator != 1:
                raise ValueError("value is not the logarithm of a rational")
            out *= Fraction(p) ** int(v)
        return out

    def __repr__(self):
        terms = " + ".join(f"{v}*log({p})" for p, v in sorted(self.coeffs.items()))
        return f"LogSpan({terms or '0'})"


def _bad():
    raise TypeError("LogSpan values compare only with LogSpan values or zero")
