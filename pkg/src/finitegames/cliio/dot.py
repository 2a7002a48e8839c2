"""Graphviz DOT text for game trees and epistemic structures.

Output depends only on the input object, so emitting twice gives identical
bytes.
"""
from __future__ import annotations

from ..epistemics import EpistemicStructure
from ..extensive import CHANCE, ExtensiveForm, fmt_history
from .textformat import fmt_num


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def tree_dot(ef: ExtensiveForm, name: str = "game") -> str:
    ids = {h: f"n{k}" for k, h in enumerate(ef.order)}
    out = [f"digraph {_q(name)} {{", "  node [shape=circle, fontsize=10];"]
    for h in ef.order:
        if h in ef.actions:
            who = "Nature" if ef.mover[h] == CHANCE else ef.players[ef.mover[h]]
            shape = "diamond" if ef.mover[h] == CHANCE else "circle"
            out.append(f"  {ids[h]} [label={_q(who)}, shape={shape}, tooltip={_q(fmt_history(h))}];")
        else:
            pay = "(" + ",".join(fmt_num(v) for v in ef.payoffs[h]) + ")"
            out.append(f"  {ids[h]} [label={_q(pay)}, shape=plaintext, tooltip={_q(fmt_history(h))}];")
    for h in ef.order:
        if h not in ef.actions:
            continue
        for a in ef.actions[h]:
            label = a
            if ef.mover[h] == CHANCE:
                label = f"{a} ({fmt_num(ef.chance_probs[h][a])})"
            out.append(f"  {ids[h]} -> {ids[h + (a,)]} [label={_q(label)}];")
    k = 0
    for sid in ef.all_infosets():
        hs = ef.infosets[sid]
        if len(hs) < 2:
            continue
        members = "; ".join(ids[h] for h in hs)
        out.append(f"  subgraph cluster_{k} {{ label={_q(sid)}; style=dashed; rank=same; {members}; }}")
        k += 1
    out.append("}")
    return "\n".join(out) + "\n"


def structure_dot(S: EpistemicStructure, name: str = "structure") -> str:
    """States as nodes; each agent's cells are chains of undirected edges
    labeled with the agent (with cell probabilities on the nodes' tooltips)."""
    ids = {w: f"s{k}" for k, w in enumerate(S.states)}
    out = [f"digraph {_q(name)} {{", "  node [shape=box, fontsize=10];", "  edge [dir=none];"]
    for w in S.states:
        out.append(f"  {ids[w]} [label={_q(w)}];")
    for a in S.agents:
        for cell in S.partitions[a]:
            ws = S.order(cell)
            for x, y in zip(ws, ws[1:]):
                out.append(f"  {ids[x]} -> {ids[y]} [label={_q(a)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def emit_dot(obj, name: str | None = None) -> str:
    if isinstance(obj, ExtensiveForm):
        return tree_dot(obj, name or "game")
    if isinstance(obj, EpistemicStructure):
        return structure_dot(obj, name or "structure")
    raise TypeError(f"cannot draw {type(obj).__name__}")
