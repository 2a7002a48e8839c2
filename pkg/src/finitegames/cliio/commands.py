"""Subcommands: each takes a parsed document plus options and returns an
exit status with a deterministic text report."""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction

from .. import epistemics, extensive, incompleteinfo, lotteries, refinements, strategic
from ..epistemics import EpistemicError
from ..extensive import CapExceeded, ExtensiveForm, FormError, SolverError
from ..incompleteinfo import IncompleteInfoError, IncompleteScenario, TypeSpace
from ..strategic import GameError, MixedComponent, MixedStrategy, StrategicGame
from .dot import emit_dot
from .textformat import AssessmentBody, Document, EpistemicBody, LotteryBody, document_of, fmt_num, format_document

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_UNDECIDED = 3

COMMANDS = ("validate", "nash", "mixed-nash", "dominate", "bi", "spe", "zermelo", "wse", "pbe", "seqeq",
            "know", "ck", "prior", "agree", "revise", "ckr", "harsanyi", "totypes", "tostates", "fixtures")


class UsageError(Exception):
    pass


@dataclass
class Report:
    status: int
    lines: list

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


@dataclass
class Options:
    cap: int | None = None
    format: str = "text"
    agent: str | None = None
    events: tuple = ()
    mode: str = strategic.STRICT_PURE
    exhaustive: bool = False


# ---------------------------------------------------------------- helpers


def _need(doc: Document, *kinds):
    if doc.kind not in kinds:
        raise UsageError(f"this command needs a {' or '.join(kinds)} document, got {doc.kind}")
    return doc.body


def _strategic_of(doc: Document) -> StrategicGame:
    if doc.kind == "strategic":
        return doc.body
    if doc.kind == "extensive":
        return extensive.to_strategic_form(doc.body)
    raise UsageError(f"this command needs a strategic or extensive document, got {doc.kind}")


def _structure_of(doc: Document):
    if doc.kind == "epistemic":
        return doc.body.structure
    if doc.kind == "scenario":
        return doc.body.structure
    raise UsageError(f"this command needs an epistemic or scenario document, got {doc.kind}")


def fmt_mixed(m: MixedStrategy, strategies) -> str:
    parts = [f"{s}@{fmt_num(m.prob(s))}" for s in strategies if m.prob(s) != 0]
    return "(" + ",".join(parts) + ")"


def fmt_profile(prof) -> str:
    return "(" + ",".join(prof) + ")"


def _event(S, text: str):
    states = [w for w in text.replace("{", "").replace("}", "").split(",") if w]
    unknown = [w for w in states if w not in S.states]
    if unknown:
        raise UsageError(f"unknown states in event: {','.join(unknown)}")
    return frozenset(states)


def _cap(opts: Options, default: int) -> int:
    return opts.cap if opts.cap is not None else default


# --------------------------------------------------------------- commands


def cmd_validate(doc: Document, opts: Options) -> Report:
    b = doc.body
    if doc.kind in ("extensive", "assessment"):
        ef = b if doc.kind == "extensive" else b.form
        if opts.format == "dot":
            diags = extensive.validate(ef)
            return Report(EXIT_INVALID if diags else EXIT_OK, emit_dot(ef, doc.name or None).splitlines())
        diags = extensive.validate(ef)
        if doc.kind == "assessment" and not diags:
            diags = refinements.check_assessment(ef, b.assessment)
        if diags:
            return Report(EXIT_INVALID, [f"invalid: {d}" for d in diags])
        return Report(EXIT_OK, [f"ok: {doc.kind} with {len(ef.order)} histories, "
                                f"{len(ef.terminals)} terminal, {len(ef.infosets)} information sets"])
    if doc.kind == "strategic":
        return Report(EXIT_OK, [f"ok: strategic game with {b.n} players, "
                                f"strategy counts {'x'.join(str(len(s)) for s in b.strategies)}"])
    if doc.kind in ("epistemic", "scenario"):
        S = b.structure
        if opts.format == "dot":
            return Report(EXIT_OK, emit_dot(S, doc.name or None).splitlines())
        tail = "with beliefs" if S.beliefs is not None else "without beliefs"
        return Report(EXIT_OK, [f"ok: {doc.kind} with {len(S.states)} states, {len(S.agents)} agents, {tail}"])
    if doc.kind == "typespace":
        flag = "own-payoff knowledge" if b.own_payoff_knowledge() else "payoffs depend on others' types"
        return Report(EXIT_OK, [f"ok: type space with {b.n} players, {len(b.Y())} relevant profiles, {flag}"])
    if doc.kind == "lottery":
        lines = []
        for name, L in b.lotteries.items():
            line = f"{name}: " + " ".join(f"{o}@{fmt_num(p)}" for o, p in L)
            if b.utility is not None:
                line += f"; expected utility {fmt_num(lotteries.expected_utility(L, b.utility))}"
            lines.append(line)
        if b.utility is not None and b.ranking is not None:
            lines.append("utility represents ranking: " + ("yes" if lotteries.represents(b.utility, b.ranking) else "no"))
        return Report(EXIT_OK, ["ok: lottery document"] + lines)
    raise UsageError(f"cannot validate a {doc.kind} document")


def cmd_nash(doc, opts):
    G = _strategic_of(doc)
    eqs = strategic.pure_nash(G)
    return Report(EXIT_OK, [fmt_profile(p) for p in eqs] or ["none"])


def cmd_mixed_nash(doc, opts):
    G = _need(doc, "strategic")
    lines = []
    for eq in strategic.mixed_nash_2p(G):
        if isinstance(eq, MixedComponent):
            m1, m2 = eq.sample
            lines.append(f"component supports {fmt_profile(eq.supports[0])} x {fmt_profile(eq.supports[1])}; "
                         f"sample ({fmt_mixed(m1, G.strategies[0])},{fmt_mixed(m2, G.strategies[1])})")
        else:
            m1, m2 = eq
            lines.append(f"({fmt_mixed(m1, G.strategies[0])},{fmt_mixed(m2, G.strategies[1])})")
    return Report(EXIT_OK, lines or ["none"])


def cmd_dominate(doc, opts):
    G = _strategic_of(doc)
    trace = strategic.iterated_deletion(G, opts.mode)
    lines = []
    for k, i, s, dom in trace.rounds:
        by = fmt_mixed(dom, G.strategies[i]) if isinstance(dom, MixedStrategy) else dom
        lines.append(f"round {k}: player {G.players[i]} deletes {s} (dominated by {by})")
    lines.append("survivors: " + " x ".join("{" + ",".join(ss) + "}" for ss in trace.survivors))
    return Report(EXIT_OK, lines)


def cmd_bi(doc, opts):
    ef = _need(doc, "extensive")
    plans = extensive.backward_induction(ef, _cap(opts, extensive.DEFAULT_CAP))
    lines = []
    for plan in plans:
        labels = extensive.bi_profile_labels(ef, plan)
        line = fmt_profile(labels)
        if not any(m == extensive.CHANCE for m in ef.mover.values()):
            line += f" outcome {extensive.fmt_history(extensive.play_path(ef, plan))}"
        lines.append(line)
    return Report(EXIT_OK, lines)


def cmd_spe(doc, opts):
    ef = _need(doc, "extensive")
    sols = extensive.spe(ef, _cap(opts, extensive.DEFAULT_CAP))
    return Report(EXIT_OK, [extensive.format_behavior(ef, b) for b in sols] or ["none"])


def cmd_zermelo(doc, opts):
    ef = _need(doc, "extensive")
    res = extensive.solve_zermelo(ef)
    lines = [res.category]
    for h in ef.order:
        if h in res.witness:
            lines.append(f"{extensive.fmt_history(h)}: {res.witness[h]}")
    return Report(EXIT_OK, lines)


def _assessment(doc):
    b = _need(doc, "assessment")
    return b.form, b.assessment


def cmd_wse(doc, opts):
    ef, a = _assessment(doc)
    dev = refinements.find_improvement(ef, a)
    if dev is not None:
        return Report(EXIT_OK, ["false", _fmt_dev(ef, dev)])
    if not refinements.bayes_updating_reached(ef, a):
        return Report(EXIT_OK, ["false", "beliefs at a reached information set are not Bayesian"])
    return Report(EXIT_OK, ["true"])


def _fmt_dev(ef, dev) -> str:
    plan = ", ".join(f"{s}={x}" for s, x in dev.plan.items())
    return (f"player {ef.players[dev.player]} improves at {dev.infoset}: {plan} yields "
            f"{fmt_num(dev.improved)} instead of {fmt_num(dev.current)}")


def cmd_pbe(doc, opts):
    ef, a = _assessment(doc)
    dev = refinements.find_improvement(ef, a)
    if dev is not None:
        return Report(EXIT_OK, ["false", _fmt_dev(ef, dev)])
    cert = refinements.pbe_certificate(ef, a, opts.exhaustive, _cap(opts, refinements.DEFAULT_ORDER_CAP))
    if cert is None:
        if refinements.forced_structure(ef, a) is None:
            return Report(EXIT_OK, ["false", "no plausibility order rationalizes the assessment"])
        return Report(EXIT_OK, ["false", "no rationalizing order admits Bayesian witnesses"])
    return Report(EXIT_OK, ["true", f"order: {cert.order.format(ef)}"])


def cmd_seqeq(doc, opts):
    ef, a = _assessment(doc)
    dev = refinements.find_improvement(ef, a)
    if dev is not None:
        return Report(EXIT_OK, ["false", _fmt_dev(ef, dev)])
    cert = refinements.se_certificate(ef, a, opts.exhaustive, _cap(opts, refinements.DEFAULT_ORDER_CAP))
    if cert is None:
        return Report(EXIT_OK, ["false", "no choice-measurable rationalizing order with a uniform Bayesian prior"])
    F = ", ".join(f"{extensive.fmt_history(h)}={v}" for h, v in cert.rep.F.items())
    nu = ", ".join(f"{extensive.fmt_history(h)}={fmt_num(p)}" for h, p in cert.prior.items())
    return Report(EXIT_OK, ["true", f"order: {cert.order.format(ef)}", f"F: {F}", f"prior: {nu}"])


def cmd_know(doc, opts):
    S = _structure_of(doc)
    if opts.agent is None or not opts.events:
        raise UsageError("know needs --agent and --event")
    E = _event(S, opts.events[0])
    try:
        K = epistemics.know(S, opts.agent, E)
    except EpistemicError as e:
        raise UsageError(str(e)) from None
    return Report(EXIT_OK, [f"K_{S.agent(opts.agent)}{S.fmt(E)} = {S.fmt(K)}"])


def cmd_ck(doc, opts):
    S = _structure_of(doc)
    lines = ["partition: " + " ".join(S.fmt(c) for c in epistemics.ck_partition(S))]
    for ev in opts.events:
        E = _event(S, ev)
        lines.append(f"CK{S.fmt(E)} = {S.fmt(epistemics.ck(S, E))}")
    return Report(EXIT_OK, lines)


def cmd_prior(doc, opts):
    if doc.kind == "typespace":
        P = incompleteinfo.harsanyi_consistent(doc.body)
        if P is None:
            return Report(EXIT_OK, ["none"])
        return Report(EXIT_OK, [f"{incompleteinfo.profile_label(t)} = {fmt_num(p)}" for t, p in P.items()])
    S = _structure_of(doc)
    if S.beliefs is None:
        raise UsageError("the structure has no beliefs")
    P = epistemics.common_prior(S)
    if P is None:
        return Report(EXIT_OK, ["none"])
    return Report(EXIT_OK, [f"{w} = {fmt_num(p)}" for w, p in P.items()])


def cmd_agree(doc, opts):
    S = _structure_of(doc)
    if not opts.events:
        raise UsageError("agree needs --event")
    E = _event(S, opts.events[0])
    try:
        res = epistemics.agreement_holds(S, E)
    except EpistemicError as e:
        return Report(EXIT_INVALID, [f"invalid: {e}"])
    lines = ["holds" if res.holds else "violated"]
    for w, (p, q) in res.common_posteriors.items():
        lines.append(f"{w}: commonly known posteriors {fmt_num(p)} and {fmt_num(q)}")
    return Report(EXIT_OK, lines)


def cmd_revise(doc, opts):
    b = _need(doc, "epistemic")
    if b.plausibility is None:
        raise UsageError("revise needs a [plausibility] section")
    if not opts.events:
        raise UsageError("revise needs at least one --event")
    S = b.structure
    evs = [_event(S, e) for e in opts.events]
    f = epistemics.agm_revise(b.plausibility, evs)
    lines = [f"f({S.fmt(E)}) = {S.fmt(f[E])}" for E in evs]
    lines.append("arrow axiom: " + ("holds" if epistemics.check_arrow(f) else "fails"))
    return Report(EXIT_OK, lines)


def cmd_ckr(doc, opts):
    if doc.kind == "strategic":
        model = epistemics.build_ckr_model(doc.body)
    else:
        b = _need(doc, "epistemic")
        if b.model is None:
            raise UsageError("ckr needs a strategic game or an epistemic document with [play]")
        model = b.model
    S = model.structure
    lines = [f"{w}: {fmt_profile(model.profile(w))}" for w in S.states]
    lines.append(f"R = {S.fmt(epistemics.rational_states(model))}")
    lines.append(f"CKR = {S.fmt(epistemics.ckr_states(model))}")
    return Report(EXIT_OK, lines)


def cmd_harsanyi(doc, opts):
    sc = _need(doc, "scenario")
    try:
        ef = incompleteinfo.harsanyi_transform(sc)
    except IncompleteInfoError as e:
        return Report(EXIT_INVALID, [f"invalid: {e}"])
    if opts.format == "dot":
        return Report(EXIT_OK, emit_dot(ef, doc.name or None).splitlines())
    lines = ["nature: " + " ".join(f"{w}@{fmt_num(p)}" for w, p in ef.chance_probs[()].items())]
    one_sided = sum(len(c) > 1 for c in sc.structure.partitions.values()) == 1
    for eq in incompleteinfo.bayesian_nash(sc):
        line = incompleteinfo.format_equilibrium(sc, eq)
        if one_sided:
            line += f" {incompleteinfo.classify(sc, eq)}"
        if sc.true_state is not None:
            played = incompleteinfo.played_at(sc, eq, sc.true_state)
            line += f"; at {sc.true_state}: " + fmt_profile(",".join(p) for p in played)
        lines.append(line)
    if len(lines) == 1:
        lines.append("no pure Bayesian Nash equilibrium")
    return Report(EXIT_OK, lines)


def cmd_totypes(doc, opts):
    sc = _need(doc, "scenario")
    try:
        ts = incompleteinfo.state_to_type(sc)
    except IncompleteInfoError as e:
        return Report(EXIT_INVALID, [f"invalid: {e}"])
    return Report(EXIT_OK, format_document(document_of(ts, "typespace", doc.name)).splitlines())


def cmd_tostates(doc, opts):
    ts = _need(doc, "typespace")
    sc = incompleteinfo.type_to_state(ts)
    return Report(EXIT_OK, format_document(document_of(sc, "scenario", doc.name)).splitlines())


HANDLERS = {
    "validate": cmd_validate, "nash": cmd_nash, "mixed-nash": cmd_mixed_nash, "dominate": cmd_dominate,
    "bi": cmd_bi, "spe": cmd_spe, "zermelo": cmd_zermelo, "wse": cmd_wse, "pbe": cmd_pbe, "seqeq": cmd_seqeq,
    "know": cmd_know, "ck": cmd_ck, "prior": cmd_prior, "agree": cmd_agree, "revise": cmd_revise,
    "ckr": cmd_ckr, "harsanyi": cmd_harsanyi, "totypes": cmd_totypes, "tostates": cmd_tostates,
}


def option_parser() -> argparse.ArgumentParser:
    """Options shared by every document command (also usable in fixtures)."""
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--cap", type=int, default=None, help="enumeration bound for capped solvers")
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.add_argument("--agent", default=None, help="agent name (know)")
    p.add_argument("--event", dest="events", action="append", default=[],
                   help="comma-separated states; repeatable for revise and ck")
    p.add_argument("--mode", default=strategic.STRICT_PURE,
                   choices=(strategic.STRICT_PURE, strategic.WEAK_SIMULTANEOUS, strategic.STRICT_MIXED))
    p.add_argument("--exhaustive", action="store_true", help="search all rationalizing orders (capped)")
    return p


def options_from(ns) -> Options:
    return Options(ns.cap, ns.format, ns.agent, tuple(ns.events), ns.mode, ns.exhaustive)


def run_document(command: str, doc: Document, opts: Options | None = None) -> Report:
    """Run one subcommand on a parsed document, mapping failures to exit codes."""
    opts = opts or Options()
    handler = HANDLERS.get(command)
    if handler is None:
        return Report(EXIT_USAGE, [f"error: unknown command {command!r}"])
    try:
        return handler(doc, opts)
    except UsageError as e:
        return Report(EXIT_USAGE, [f"error: {e}"])
    except CapExceeded as e:
        return Report(EXIT_UNDECIDED, [f"undecided: {e}"])
    except SolverError as e:
        return Report(EXIT_UNDECIDED, [f"undecided: {e}"])
    except (FormError, GameError, EpistemicError, IncompleteInfoError, lotteries.LotteryError) as e:
        return Report(EXIT_INVALID, [f"invalid: {e}"])
