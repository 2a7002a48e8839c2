"""Line-oriented, sectioned text format for games and related objects.

A document starts with ``[document kind=KIND]`` and continues with
sections ``[name attr=value ...]`` (header attributes are split like a
shell command line, so values may be quoted).  ``#`` starts a comment at
the beginning of a line or after whitespace.  Every number is an integer or
``p/q``.

Sections by kind::

    strategic   [players] "name: s1 s2 ..."   [payoffs] "s1 s2 = v1 v2"
    extensive   [players] "name"   [tree] indentation-encoded nodes
    epistemic   [states] [partition agent=A] [prior] [plausibility]
                [players]/[payoffs]/[play] for a game model
    scenario    epistemic sections + [players] + [payoffs state=W]
                (strategic) or [players] + [tree] + [payoffs state=W]
                (dynamic) + [scenario] "true_state = W"
    typespace   [players] [types] [relevant] [utilities types=a,b]
                [beliefs player=P type=T]
    assessment  extensive sections + [behavior] + [beliefs]
    lottery     [lottery name=L] [utility] [ranking]

Any document may carry ``[meta]`` (``key = value``) and ``[expect
command=CMD ...]`` sections; the latter hold expected report lines, each
written ``| text``.

Tree lines are ``EDGE : OWNER [in SET]`` for decision nodes,
``EDGE = v1 v2 ...`` for terminals and a bare ``EDGE`` for payoff-less
terminals of a scenario shape.  The root's edge is ``*``; edges below a
chance node read ``action @ prob``.
"""
from __future__ import annotations

import itertools
import re
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .. import epistemics, extensive, incompleteinfo, lotteries, refinements, strategic
from ..epistemics import EpistemicStructure, GameModel, StatePlausibilityOrder
from ..extensive import CHANCE, ExtensiveForm, fmt_history
from ..incompleteinfo import IncompleteScenario, TypeSpace
from ..lotteries import Ranking, SimpleLottery, UtilityFunction
from ..refinements import Assessment
from ..strategic import StrategicGame

KINDS = ("strategic", "extensive", "epistemic", "scenario", "typespace", "assessment", "lottery")


class ParseError(ValueError):
    """Syntax or semantic error with a 1-based location."""

    def __init__(self, message: str, line: int = 0, col: int = 0, expected=(), source: str = "<text>"):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = f"{self.source}:{self.line}:{self.col}"
        tail = f" (expected {', '.join(self.expected)})" if self.expected else ""
        return f"{where}: {self.message}{tail}"


# ----------------------------------------------------------------- values


@dataclass
class Expectation:
    command: str
    args: tuple = ()
    lines: tuple = ()
    cite: str = ""
    provenance: str = ""
    exit: int = 0


@dataclass(frozen=True, eq=False)
class EpistemicBody:
    structure: EpistemicStructure
    plausibility: StatePlausibilityOrder | None = None
    model: GameModel | None = None


@dataclass(frozen=True, eq=False)
class AssessmentBody:
    form: ExtensiveForm
    assessment: Assessment


@dataclass(frozen=True, eq=False)
class LotteryBody:
    lotteries: Mapping  # name -> SimpleLottery
    utility: UtilityFunction | None = None
    ranking: Ranking | None = None


@dataclass(eq=False)
class Document:
    kind: str
    body: object
    name: str = ""
    meta: dict = field(default_factory=dict)
    expects: list = field(default_factory=list)

    def __eq__(self, other):
        if not isinstance(other, Document):
            return NotImplemented
        return (self.kind == other.kind and self.name == other.name and self.meta == other.meta
                and self.expects == other.expects and canonical(self.body) == canonical(other.body))


def canonical(body):
    """A comparable snapshot of a document body."""
    if isinstance(body, StrategicGame):
        return ("strategic", body.players, body.strategies, dict(body.payoff))
    if isinstance(body, ExtensiveForm):
        return ("extensive", body.players, dict(body.actions), dict(body.mover), dict(body.chance_probs),
                dict(body.infoset_of), {k: tuple(v) for k, v in body.infosets.items()}, dict(body.payoffs))
    if isinstance(body, EpistemicStructure):
        return ("epistemic", body.states, dict(body.partitions),
                None if body.beliefs is None else {a: dict(t) for a, t in body.beliefs.items()})
    if isinstance(body, EpistemicBody):
        model = None
        if body.model is not None:
            model = (canonical(body.model.game), {i: dict(d) for i, d in body.model.assignment.items()})
        return ("epistemic-doc", canonical(body.structure),
                None if body.plausibility is None else body.plausibility.levels, model)
    if isinstance(body, IncompleteScenario):
        return ("scenario", canonical(body.structure), body.players, body.strategies,
                None if body.shape is None else canonical(body.shape)[:7],
                {w: dict(t) for w, t in body.payoffs.items()}, body.true_state)
    if isinstance(body, TypeSpace):
        return ("typespace", body.players, body.types, body.strategies,
                {t: dict(u) for t, u in body.utilities.items()},
                {i: {t: dict(d) for t, d in per.items()} for i, per in body.beliefs.items()}, body.relevant)
    if isinstance(body, AssessmentBody):
        return ("assessment", canonical(body.form), {k: dict(v) for k, v in body.assessment.sigma.items()},
                dict(body.assessment.mu))
    if isinstance(body, LotteryBody):
        return ("lottery", {k: (L.outcomes, L.probs) for k, L in body.lotteries.items()},
                None if body.utility is None else dict(body.utility.values),
                None if body.ranking is None else body.ranking.levels)
    raise TypeError(f"cannot canonicalize {type(body).__name__}")


# ---------------------------------------------------------------- numbers


_NUM = re.compile(r"^-?\d+(/-?\d+)?$")


def fmt_num(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ------------------------------------------------------------------ lexing


@dataclass
class Line:
    no: int
    indent: int
    text: str  # comment-stripped, right-stripped, without indentation
    raw: str

    def tokens(self):
        """``[(token, column)]`` with 1-based columns."""
        return [(m.group(), self.indent + m.start() + 1) for m in re.finditer(r"\S+", self.text)]


@dataclass
class Section:
    name: str
    attrs: dict
    line: int
    lines: list


def _strip_comment(s: str) -> str:
    if s.lstrip().startswith("#"):
        return ""
    m = re.search(r"\s#", s)
    return s[:m.start()] if m else s


class _Reader:
    def __init__(self, text: str, source: str):
        self.source = source
        self.sections: list = []
        cur = None
        for no, raw in enumerate(text.splitlines(), start=1):
            body = raw.rstrip("\n")
            stripped = body.strip()
            if cur is not None and cur.name == "expect" and stripped.startswith("|"):
                cur.lines.append(Line(no, len(body) - len(body.lstrip()), stripped, raw))
                continue
            body = _strip_comment(body).rstrip()
            if not body.strip():
                continue
            if "\t" in body[: len(body) - len(body.lstrip())]:
                raise self.error("tabs are not allowed in indentation", no, 1)
            indent = len(body) - len(body.lstrip())
            text_ = body.strip()
            if text_.startswith("["):
                if not text_.endswith("]"):
                    raise self.error("unterminated section header", no, len(body) + 1, ["]"])
                try:
                    parts = shlex.split(text_[1:-1])
                except ValueError as e:
                    raise self.error(f"bad section header: {e}", no, indent + 1)
                if not parts:
                    raise self.error("empty section header", no, indent + 2, ["section name"])
                attrs = {}
                for p in parts[1:]:
                    if "=" not in p:
                        raise self.error(f"header attribute {p!r} lacks '='", no, indent + 1 + text_.find(p), ["key=value"])
                    k, v = p.split("=", 1)
                    attrs[k] = v
                cur = Section(parts[0], attrs, no, [])
                self.sections.append(cur)
                continue
            if cur is None:
                raise self.error("text before the first section", no, indent + 1, ["[document kind=...]"])
            cur.lines.append(Line(no, indent, text_, raw))

    def error(self, msg, line=0, col=0, expected=()):
        return ParseError(msg, line, col, expected, self.source)


# ----------------------------------------------------------------- parsing


class _Parser:
    def __init__(self, text: str, source: str = "<text>"):
        self.r = _Reader(text, source)
        self.source = source

    def err(self, msg, line=0, col=0, expected=()):
        return ParseError(msg, line, col, expected, self.source)

    def num(self, tok: str, line: int, col: int) -> Fraction:
        if not _NUM.match(tok):
            raise self.err(f"malformed number {tok!r}", line, col, ["integer", "p/q"])
        if "/" in tok:
            p, q = tok.split("/")
            if int(q) == 0:
                raise self.err(f"zero denominator in {tok!r}", line, col)
            return Fraction(int(p), int(q))
        return Fraction(int(tok))

    def prob(self, tok, line, col) -> Fraction:
        p = self.num(tok, line, col)
        if p < 0 or p > 1:
            raise self.err(f"probability {tok} outside [0, 1]", line, col)
        return p

    # -- generic helpers -------------------------------------------------

    def sections(self, name):
        return [s for s in self.r.sections if s.name == name]

    def one(self, name, required=True):
        found = self.sections(name)
        if len(found) > 1:
            raise self.err(f"section [{name}] given twice", found[1].line, 1)
        if not found:
            if required:
                raise self.err(f"missing section [{name}]", 0, 0, [f"[{name}]"])
            return None
        return found[0]

    def split_eq(self, ln: Line, sep="="):
        """``(left tokens, right tokens)`` around a standalone separator."""
        toks = ln.tokens()
        idx = [k for k, (t, _) in enumerate(toks) if t == sep]
        if len(idx) != 1:
            raise self.err(f"expected exactly one '{sep}'", ln.no, ln.indent + 1, [sep])
        k = idx[0]
        return toks[:k], toks[k + 1:]

    def numbers(self, toks, ln):
        return tuple(self.num(t, ln.no, c) for t, c in toks)

    def kv(self, sec):
        out = {}
        for ln in sec.lines:
            if "=" not in ln.text:
                raise self.err("expected 'key = value'", ln.no, ln.indent + 1, ["="])
            k, v = ln.text.split("=", 1)
            out[k.strip()] = v.strip()
        return out

    def wrap(self, fn, sec_or_line, *args):
        """Run a library constructor, turning its errors into located ones."""
        try:
            return fn(*args)
        except (ValueError, KeyError) as e:
            if isinstance(e, ParseError):
                raise
            no = sec_or_line.line if isinstance(sec_or_line, Section) else sec_or_line.no
            raise self.err(str(e).strip("'\""), no, 1) from None

    # -- document --------------------------------------------------------

    def document(self) -> Document:
        secs = self.r.sections
        if not secs or secs[0].name != "document":
            line = secs[0].line if secs else 0
            raise self.err("a document starts with a [document] header", line, 1, ["[document kind=...]"])
        head = secs[0]
        kind = head.attrs.get("kind")
        if kind not in KINDS:
            raise self.err(f"unknown document kind {kind!r}", head.line, 2, KINDS)
        known = {
            "strategic": {"players", "payoffs"},
            "extensive": {"players", "tree"},
            "epistemic": {"states", "partition", "prior", "plausibility", "players", "payoffs", "play"},
            "scenario": {"states", "partition", "prior", "players", "payoffs", "tree", "scenario"},
            "typespace": {"players", "types", "relevant", "utilities", "beliefs"},
            "assessment": {"players", "tree", "behavior", "beliefs"},
            "lottery": {"lottery", "utility", "ranking"},
        }[kind] | {"document", "meta", "expect"}
        for s in secs[1:]:
            if s.name == "document":
                raise self.err("only one [document] header is allowed", s.line, 1)
            if s.name not in known:
                raise self.err(f"section [{s.name}] is not valid in a {kind} document", s.line, 2, sorted(known - {"document"}))
        body = getattr(self, f"_{kind}")()
        meta = self.kv(self.one("meta", False)) if self.one("meta", False) else {}
        expects = []
        for s in self.sections("expect"):
            if "command" not in s.attrs:
                raise self.err("[expect] needs command=...", s.line, 2, ["command="])
            lines = []
            for ln in s.lines:
                if not ln.text.startswith("|"):
                    raise self.err("expected output lines start with '|'", ln.no, ln.indent + 1, ["|"])
                t = ln.text[1:]
                lines.append(t[1:] if t.startswith(" ") else t)
            try:
                ex = int(s.attrs.get("exit", "0"))
            except ValueError:
                raise self.err("exit=... must be an integer", s.line, 1) from None
            expects.append(Expectation(s.attrs["command"], tuple(shlex.split(s.attrs.get("args", ""))),
                                       tuple(lines), s.attrs.get("cite", ""), s.attrs.get("provenance", ""), ex))
        return Document(kind, body, head.attrs.get("name", ""), meta, expects)

    # -- strategic -------------------------------------------------------

    def _players_with_strategies(self):
        sec = self.one("players")
        names, strats = [], []
        for ln in sec.lines:
            if ":" not in ln.text:
                raise self.err("expected 'name: strategy ...'", ln.no, ln.indent + 1, [":"])
            name, rest = ln.text.split(":", 1)
            ss = rest.split()
            if not name.strip() or not ss:
                raise self.err("a player needs a name and at least one strategy", ln.no, ln.indent + 1)
            names.append(name.strip())
            strats.append(tuple(ss))
        if not names:
            raise self.err("no players", sec.line, 1, ["name: strategies"])
        return names, strats, sec

    def _payoff_table(self, sec, strats, n):
        pay = {}
        for ln in sec.lines:
            left, right = self.split_eq(ln)
            prof = tuple(t for t, _ in left)
            if len(prof) != n:
                raise self.err(f"profile needs {n} strategies", ln.no, ln.indent + 1)
            for k, (t, c) in enumerate(left):
                if t not in strats[k]:
                    raise self.err(f"unknown strategy {t!r}", ln.no, c, strats[k])
            vec = self.numbers(right, ln)
            if len(vec) != n:
                raise self.err(f"payoff vector needs {n} numbers", ln.no, right[0][1] if right else ln.indent + 1)
            if prof in pay:
                raise self.err(f"duplicate profile {' '.join(prof)}", ln.no, ln.indent + 1)
            pay[prof] = vec
        for prof in itertools.product(*strats):
            if prof not in pay:
                raise self.err(f"missing payoffs for profile {' '.join(prof)}", sec.line, 1)
        return pay

    def _strategic(self):
        names, strats, sec = self._players_with_strategies()
        pay = self._payoff_table(self.one("payoffs"), strats, len(names))
        return self.wrap(StrategicGame, sec, tuple(names), tuple(strats), pay)

    # -- trees ------------------------------------------------------------

    def _player_names(self):
        sec = self.one("players")
        names = []
        for ln in sec.lines:
            names.extend(t for t, _ in ln.tokens())
        if not names:
            raise self.err("no players", sec.line, 1, ["player name"])
        return names

    def _tree(self, names, shape=False):
        sec = self.one("tree")
        if not sec.lines:
            raise self.err("empty tree", sec.line, 1, ["* : owner"])
        decisions, payoffs, sets = {}, {}, {}
        stack = []  # (indent, history, is_chance, child_indent)
        for ln in sec.lines:
            text = ln.text
            m = re.match(r"^(\S+)(\s+@\s+(\S+))?\s*(.*)$", text)
            edge, prob, rest = m.group(1), m.group(3), m.group(4).strip()
            while stack and stack[-1][0] >= ln.indent:
                stack.pop()
            if not stack:
                if edge != "*" or decisions or payoffs:
                    raise self.err("the tree has exactly one root, written '*'", ln.no, ln.indent + 1, ["*"])
                h = ()
            else:
                parent_indent, ph, pchance, kids = stack[-1]
                if kids is not None and kids != ln.indent:
                    raise self.err("inconsistent indentation among siblings", ln.no, ln.indent + 1)
                stack[-1] = (parent_indent, ph, pchance, ln.indent)
                if ph not in decisions:
                    raise self.err("a terminal node cannot have children", ln.no, ln.indent + 1)
                h = ph + (edge,)
                who, acts = decisions[ph]
                if edge in (acts if not pchance else acts):
                    raise self.err(f"duplicate action {edge!r}", ln.no, ln.indent + 1)
                if pchance:
                    if prob is None:
                        raise self.err("edges below chance need '@ prob'", ln.no, ln.indent + len(edge) + 1, ["@"])
                    acts[edge] = self.prob(prob, ln.no, ln.indent + text.index(prob) + 1)
                else:
                    if prob is not None:
                        raise self.err("only chance edges carry probabilities", ln.no, ln.indent + text.index("@") + 1)
                    acts.append(edge)
            if rest.startswith(":"):
                owner = rest[1:].split()
                if not owner:
                    raise self.err("missing node owner", ln.no, ln.indent + len(text) + 1, ["player name", "chance"])
                who = owner[0]
                if who != CHANCE and who not in names:
                    raise self.err(f"unknown player {who!r}", ln.no, ln.indent + text.index(who, len(edge)) + 1,
                                   names + [CHANCE])
                if len(owner) == 3 and owner[1] == "in" and who != CHANCE:
                    sets.setdefault(owner[2], []).append(h)
                elif len(owner) != 1:
                    raise self.err("expected 'in SET' after the owner", ln.no, ln.indent + 1, ["in"])
                decisions[h] = (who, {} if who == CHANCE else [])
                stack.append((ln.indent, h, who == CHANCE, None))
            elif rest.startswith("="):
                vec = self.numbers([(t, ln.indent + text.index(t, len(edge)) + 1) for t in rest[1:].split()], ln)
                if len(vec) != len(names):
                    raise self.err(f"payoff vector needs {len(names)} numbers", ln.no, ln.indent + 1)
                payoffs[h] = vec
                stack.append((ln.indent, h, False, None))
            elif rest == "" and shape:
                payoffs[h] = (0,) * len(names)
                stack.append((ln.indent, h, False, None))
            else:
                raise self.err("expected ': owner' or '= payoffs'", ln.no, ln.indent + len(edge) + 2, [":", "="])
        for h, (who, acts) in decisions.items():
            if not acts:
                raise self.err(f"decision node {fmt_history(h)} has no children", sec.line, 1)
            if who == CHANCE and sum(acts.values(), Fraction(0)) != 1:
                raise self.err(f"chance probabilities at {fmt_history(h)} sum to {fmt_num(sum(acts.values(), Fraction(0)))}",
                               sec.line, 1)
        ef = self.wrap(ExtensiveForm.build, sec, names, decisions, payoffs, sets)
        return ef, sec

    def _extensive(self):
        ef, _ = self._tree(self._player_names())
        return ef

    # -- epistemic --------------------------------------------------------

    def _structure(self):
        sec = self.one("states")
        states = [t for ln in sec.lines for t, _ in ln.tokens()]
        if not states:
            raise self.err("no states", sec.line, 1, ["state label"])
        known = set(states)
        partitions, beliefs = {}, {}
        parts = self.sections("partition")
        if not parts:
            raise self.err("missing section [partition agent=...]", 0, 0, ["[partition agent=...]"])
        for ps in parts:
            agent = ps.attrs.get("agent")
            if agent is None:
                raise self.err("[partition] needs agent=...", ps.line, 2, ["agent="])
            if agent in partitions:
                raise self.err(f"agent {agent} has two partitions", ps.line, 1)
            cells, bels, any_p, all_p = [], [], False, True
            for ln in ps.lines:
                cell, dist = [], {}
                for t, c in ln.tokens():
                    w, _, p = t.partition(":")
                    if w not in known:
                        raise self.err(f"unknown state {w!r}", ln.no, c, sorted(known))
                    cell.append(w)
                    if p:
                        any_p = True
                        dist[w] = self.prob(p, ln.no, c + len(w) + 1)
                    else:
                        all_p = False
                if dist and sum(dist.values(), Fraction(0)) != 1:
                    raise self.err(f"cell probabilities sum to {fmt_num(sum(dist.values(), Fraction(0)))}, not 1",
                                   ln.no, ln.indent + 1)
                cells.append(cell)
                bels.append(dist)
            if any_p and not all_p:
                raise self.err("give a probability for every state of every cell, or none", ps.line, 1)
            partitions[agent] = cells
            if any_p:
                beliefs[agent] = bels
        prior_sec = self.one("prior", False)
        if beliefs and len(beliefs) != len(partitions):
            raise self.err("either every agent has cell probabilities or none does", parts[0].line, 1)
        if prior_sec is not None:
            if beliefs:
                raise self.err("give cell probabilities or a [prior], not both", prior_sec.line, 1)
            prior = {}
            for ln in prior_sec.lines:
                left, right = self.split_eq(ln)
                if len(left) != 1 or len(right) != 1:
                    raise self.err("expected 'state = prob'", ln.no, ln.indent + 1)
                if left[0][0] not in known:
                    raise self.err(f"unknown state {left[0][0]!r}", ln.no, left[0][1], sorted(known))
                prior[left[0][0]] = self.prob(right[0][0], ln.no, right[0][1])
            if sum(prior.values(), Fraction(0)) != 1:
                raise self.err("prior probabilities do not sum to 1", prior_sec.line, 1)
            return self.wrap(EpistemicStructure.from_prior, prior_sec, states, partitions, prior)
        return self.wrap(EpistemicStructure.build, sec, states, partitions, beliefs or None)

    def _epistemic(self):
        S = self._structure()
        order = None
        ps = self.one("plausibility", False)
        if ps is not None:
            levels = []
            for ln in ps.lines:
                lv = [t for t, _ in ln.tokens()]
                for t, c in ln.tokens():
                    if t not in S.states:
                        raise self.err(f"unknown state {t!r}", ln.no, c, S.states)
                levels.append(lv)
            order = self.wrap(StatePlausibilityOrder, ps, levels)
            if order.states != S.W:
                raise self.err("the plausibility order must rank every state", ps.line, 1)
        model = None
        if self.one("players", False) is not None:
            names, strats, sec = self._players_with_strategies()
            G = self.wrap(StrategicGame, sec, tuple(names), tuple(strats), self._payoff_table(self.one("payoffs"), strats, len(names)))
            play = self.one("play")
            prof = {}
            for ln in play.lines:
                left, right = self.split_eq(ln)
                if len(left) != 1 or left[0][0] not in S.states:
                    raise self.err("expected 'state = strategies'", ln.no, ln.indent + 1, S.states)
                prof[left[0][0]] = tuple(t for t, _ in right)
            missing = [w for w in S.states if w not in prof]
            if missing:
                raise self.err(f"no play given for states {missing}", play.line, 1)
            model = self.wrap(GameModel.from_profiles, play, S, G, prof)
        return EpistemicBody(S, order, model)

    # -- scenario ---------------------------------------------------------

    def _scenario(self):
        S = self._structure()
        true_state = None
        sc_sec = self.one("scenario", False)
        if sc_sec is not None:
            true_state = self.kv(sc_sec).get("true_state")
        tables = {}
        for ps in self.sections("payoffs"):
            w = ps.attrs.get("state")
            if w is None or w not in S.states:
                raise self.err("[payoffs] needs state=<known state>", ps.line, 2, S.states)
            tables[w] = ps
        missing = [w for w in S.states if w not in tables]
        if missing:
            raise self.err(f"no [payoffs state=...] for states {missing}", 0, 0)
        if self.one("tree", False) is not None:
            names = self._player_names()
            shape, tsec = self._tree(names, shape=True)
            pays = {}
            for w, ps in tables.items():
                table = {}
                for ln in ps.lines:
                    left, right = self.split_eq(ln)
                    if len(left) != 1:
                        raise self.err("expected 'history = payoffs'", ln.no, ln.indent + 1)
                    z = extensive.parse_history(left[0][0])
                    if z not in shape.terminals:
                        raise self.err(f"{left[0][0]} is not a terminal history", ln.no, left[0][1])
                    table[z] = self.numbers(right, ln)
                pays[w] = table
            return self.wrap(IncompleteScenario.dynamic, tsec, S, shape, pays, true_state)
        names, strats, sec = self._players_with_strategies()
        games = {}
        for w in S.states:
            games[w] = self.wrap(StrategicGame, tables[w], tuple(names), tuple(strats),
                                 self._payoff_table(tables[w], strats, len(names)))
        return self.wrap(IncompleteScenario.strategic, sec, S, games, true_state)

    # -- type spaces ------------------------------------------------------

    def _typespace(self):
        names, strats, psec = self._players_with_strategies()
        tsec = self.one("types")
        types = {}
        for ln in tsec.lines:
            if ":" not in ln.text:
                raise self.err("expected 'player: type ...'", ln.no, ln.indent + 1, [":"])
            p, rest = ln.text.split(":", 1)
            if p.strip() not in names:
                raise self.err(f"unknown player {p.strip()!r}", ln.no, ln.indent + 1, names)
            types[p.strip()] = tuple(rest.split())
        if set(types) != set(names):
            raise self.err("every player needs a [types] line", tsec.line, 1)
        T = tuple(types[p] for p in names)
        rel = None
        rsec = self.one("relevant", False)
        if rsec is not None:
            rel = []
            for ln in rsec.lines:
                t = tuple(x for x, _ in ln.tokens())
                if len(t) != len(names) or any(t[k] not in T[k] for k in range(len(names))):
                    raise self.err("expected one type per player", ln.no, ln.indent + 1)
                rel.append(t)
        U = {}
        for us in self.sections("utilities"):
            t = tuple(us.attrs.get("types", "").split(","))
            if len(t) != len(names) or any(t[k] not in T[k] for k in range(len(names))):
                raise self.err("[utilities] needs types=<one type per player, comma-separated>", us.line, 2)
            U[t] = self._payoff_table(us, strats, len(names))
        B = {}
        for bs in self.sections("beliefs"):
            p, ti = bs.attrs.get("player"), bs.attrs.get("type")
            if p not in names or ti not in types.get(p, ()):
                raise self.err("[beliefs] needs player=<name> type=<type>", bs.line, 2)
            i = names.index(p)
            d = {}
            for ln in bs.lines:
                left, right = self.split_eq(ln)
                if len(left) != 1 or len(right) != 1:
                    raise self.err("expected 'types = prob'", ln.no, ln.indent + 1)
                o = tuple(left[0][0].split(","))
                others = T[:i] + T[i + 1:]
                if len(o) != len(others) or any(o[k] not in others[k] for k in range(len(o))):
                    raise self.err(f"bad profile of other types {left[0][0]!r}", ln.no, left[0][1])
                d[o] = self.prob(right[0][0], ln.no, right[0][1])
            if sum(d.values(), Fraction(0)) != 1:
                raise self.err("belief probabilities do not sum to 1", bs.line, 1)
            B.setdefault(i, {})[ti] = d
        return self.wrap(TypeSpace.build, psec, names, T, strats, U, B, rel)

    # -- assessments ------------------------------------------------------

    def _assessment(self):
        ef, tsec = self._tree(self._player_names())
        bsec = self.one("behavior")
        sigma = {}
        for ln in bsec.lines:
            if ":" not in ln.text:
                raise self.err("expected 'set: action' or 'set: a=p b=q'", ln.no, ln.indent + 1, [":"])
            sid, rest = ln.text.split(":", 1)
            sid = sid.strip()
            if sid not in ef.infosets:
                raise self.err(f"unknown information set {sid!r}", ln.no, ln.indent + 1, sorted(ef.infosets))
            toks = rest.split()
            if len(toks) == 1 and "=" not in toks[0]:
                sigma[sid] = toks[0]
            else:
                d = {}
                for t in toks:
                    a, _, p = t.partition("=")
                    d[a] = self.prob(p, ln.no, ln.indent + ln.text.index(t) + len(a) + 2)
                if sum(d.values(), Fraction(0)) != 1:
                    raise self.err(f"behavior at {sid} does not sum to 1", ln.no, ln.indent + 1)
                sigma[sid] = d
        missing = [s for s in ef.all_infosets() if s not in sigma]
        if missing:
            raise self.err(f"no behavior for information sets {missing}", bsec.line, 1)
        mu = {}
        msec = self.one("beliefs", False)
        if msec is not None:
            for ln in msec.lines:
                left, right = self.split_eq(ln)
                if len(left) != 1 or len(right) != 1:
                    raise self.err("expected 'history = prob'", ln.no, ln.indent + 1)
                mu[left[0][0]] = self.prob(right[0][0], ln.no, right[0][1])
        a = self.wrap(Assessment.make, msec or bsec, ef, sigma, mu)
        return AssessmentBody(ef, a)

    # -- lotteries --------------------------------------------------------

    def _lottery(self):
        lots = {}
        for ls in self.sections("lottery"):
            name = ls.attrs.get("name", f"L{len(lots) + 1}")
            pairs = []
            for ln in ls.lines:
                left, right = self.split_eq(ln)
                if len(left) != 1 or len(right) != 1:
                    raise self.err("expected 'outcome = prob'", ln.no, ln.indent + 1)
                pairs.append((left[0][0], self.prob(right[0][0], ln.no, right[0][1])))
            lots[name] = self.wrap(SimpleLottery.from_pairs, ls, pairs)
        if not lots:
            raise self.err("no [lottery] sections", 0, 0, ["[lottery name=...]"])
        U = None
        us = self.one("utility", False)
        if us is not None:
            vals = {}
            for ln in us.lines:
                left, right = self.split_eq(ln)
                vals[left[0][0]] = self.num(right[0][0], ln.no, right[0][1])
            U = UtilityFunction(vals)
        R = None
        rs = self.one("ranking", False)
        if rs is not None:
            R = self.wrap(Ranking, rs, [[t for t, _ in ln.tokens()] for ln in rs.lines])
        return LotteryBody(lots, U, R)


def parse(text: str, source: str = "<text>") -> Document:
    """Parse a document; raises :class:`ParseError` with a location."""
    return _Parser(text, source).document()


def parse_file(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), str(path))


# ---------------------------------------------------------------- printing


def _attr(v: str) -> str:
    return shlex.quote(v) if v == "" or re.search(r"[\s\"'\]#]", v) else v


def _print_tree(ef: ExtensiveForm, out: list, with_payoffs: bool = True) -> None:
    out.append("[tree]")

    def owner(h):
        if ef.mover[h] == CHANCE:
            return ": chance"
        who = ef.players[ef.mover[h]]
        sid = ef.infoset_of[h]
        if len(ef.infosets[sid]) == 1 and sid == extensive._default_infoset_id(who, h):
            return f": {who}"
        return f": {who} in {sid}"

    for h in ef.order:
        depth = len(h)
        edge = "*" if not h else h[-1]
        if h and ef.mover[h[:-1]] == CHANCE:
            edge += f" @ {fmt_num(ef.chance_probs[h[:-1]][h[-1]])}"
        if h in ef.actions:
            tail = owner(h)
        elif with_payoffs:
            tail = "= " + " ".join(fmt_num(v) for v in ef.payoffs[h])
        else:
            tail = ""
        out.append(("  " * depth + edge + " " + tail).rstrip())


def _print_table(G_players, strategies, payoff, out):
    for prof in itertools.product(*strategies):
        out.append(" ".join(prof) + " = " + " ".join(fmt_num(v) for v in payoff[prof]))


def _print_structure(S: EpistemicStructure, out: list) -> None:
    out.append("[states]")
    out.append(" ".join(S.states))
    for a in S.agents:
        out.append(f"[partition agent={_attr(a)}]")
        for cell in S.partitions[a]:
            ws = S.order(cell)
            if S.beliefs is None:
                out.append(" ".join(ws))
            else:
                out.append(" ".join(f"{w}:{fmt_num(S.beliefs[a][cell][w])}" for w in ws))


def format_document(doc: Document) -> str:
    """Canonical text of a document (``parse(format_document(d)) == d``)."""
    out = [f"[document kind={doc.kind}" + (f" name={_attr(doc.name)}" if doc.name else "") + "]"]
    if doc.meta:
        out.append("[meta]")
        out.extend(f"{k} = {v}" for k, v in doc.meta.items())
    b = doc.body
    if doc.kind == "strategic":
        out.append("[players]")
        out.extend(f"{p}: {' '.join(ss)}" for p, ss in zip(b.players, b.strategies))
        out.append("[payoffs]")
        _print_table(b.players, b.strategies, b.payoff, out)
    elif doc.kind in ("extensive", "assessment"):
        ef = b if doc.kind == "extensive" else b.form
        out.append("[players]")
        out.append(" ".join(ef.players))
        _print_tree(ef, out)
        if doc.kind == "assessment":
            out.append("[behavior]")
            for sid in ef.all_infosets():
                dist = b.assessment.sigma[sid]
                nz = [(a, p) for a, p in dist.items() if p]
                if len(nz) == 1:
                    out.append(f"{sid}: {nz[0][0]}")
                else:
                    out.append(f"{sid}: " + " ".join(f"{a}={fmt_num(p)}" for a, p in dist.items()))
            out.append("[beliefs]")
            for sid in ef.all_infosets():
                hs = ef.infosets[sid]
                if len(hs) > 1:
                    out.extend(f"{fmt_history(h)} = {fmt_num(b.assessment.mu[h])}" for h in hs)
    elif doc.kind == "epistemic":
        _print_structure(b.structure, out)
        if b.plausibility is not None:
            out.append("[plausibility]")
            out.extend(" ".join(b.structure.order(lv)) for lv in b.plausibility.levels)
        if b.model is not None:
            G = b.model.game
            out.append("[players]")
            out.extend(f"{p}: {' '.join(ss)}" for p, ss in zip(G.players, G.strategies))
            out.append("[payoffs]")
            _print_table(G.players, G.strategies, G.payoff, out)
            out.append("[play]")
            out.extend(f"{w} = {' '.join(b.model.profile(w))}" for w in b.structure.states)
    elif doc.kind == "scenario":
        _print_structure(b.structure, out)
        if b.true_state is not None:
            out.append("[scenario]")
            out.append(f"true_state = {b.true_state}")
        if b.shape is None:
            out.append("[players]")
            out.extend(f"{p}: {' '.join(ss)}" for p, ss in zip(b.players, b.strategies))
            for w in b.structure.states:
                out.append(f"[payoffs state={_attr(w)}]")
                _print_table(b.players, b.strategies, b.payoffs[w], out)
        else:
            out.append("[players]")
            out.append(" ".join(b.players))
            _print_tree(b.shape, out, with_payoffs=False)
            for w in b.structure.states:
                out.append(f"[payoffs state={_attr(w)}]")
                for z in b.shape.terminals:
                    out.append(f"{fmt_history(z)} = " + " ".join(fmt_num(v) for v in b.payoffs[w][z]))
    elif doc.kind == "typespace":
        out.append("[players]")
        out.extend(f"{p}: {' '.join(ss)}" for p, ss in zip(b.players, b.strategies))
        out.append("[types]")
        out.extend(f"{p}: {' '.join(ts)}" for p, ts in zip(b.players, b.types))
        if b.relevant is not None:
            out.append("[relevant]")
            out.extend(" ".join(t) for t in b.relevant)
        for t in b.Y():
            out.append(f"[utilities types={','.join(t)}]")
            _print_table(b.players, b.strategies, b.utilities[t], out)
        for i in range(b.n):
            for ti in b.types[i]:
                out.append(f"[beliefs player={_attr(b.players[i])} type={_attr(ti)}]")
                out.extend(f"{','.join(o)} = {fmt_num(p)}" for o, p in b.beliefs[i][ti].items())
    elif doc.kind == "lottery":
        for name, L in b.lotteries.items():
            out.append(f"[lottery name={_attr(name)}]")
            out.extend(f"{o} = {fmt_num(p)}" for o, p in L)
        if b.utility is not None:
            out.append("[utility]")
            out.extend(f"{o} = {fmt_num(u)}" for o, u in b.utility.values.items())
        if b.ranking is not None:
            out.append("[ranking]")
            out.extend(" ".join(sorted(lv)) for lv in b.ranking.levels)
    else:  # pragma: no cover - kinds are checked on construction
        raise ValueError(f"unknown kind {doc.kind}")
    for ex in doc.expects:
        head = f"[expect command={_attr(ex.command)}"
        if ex.args:
            head += f" args={_attr(' '.join(shlex.quote(a) for a in ex.args))}"
        if ex.cite:
            head += f" cite={_attr(ex.cite)}"
        if ex.provenance:
            head += f" provenance={_attr(ex.provenance)}"
        if ex.exit:
            head += f" exit={ex.exit}"
        out.append(head + "]")
        out.extend(f"| {line}" if line else "|" for line in ex.lines)
    return "\n".join(out) + "\n"


def document_of(body, kind: str | None = None, name: str = "") -> Document:
    """Wrap a library object in a document."""
    if kind is None:
        kind = {StrategicGame: "strategic", ExtensiveForm: "extensive", IncompleteScenario: "scenario",
                TypeSpace: "typespace", AssessmentBody: "assessment", LotteryBody: "lottery",
                EpistemicBody: "epistemic"}.get(type(body))
        if isinstance(body, EpistemicStructure):
            kind, body = "epistemic", EpistemicBody(body)
    if kind is None:
        raise TypeError(f"no document kind for {type(body).__name__}")
    return Document(kind, body, name)
