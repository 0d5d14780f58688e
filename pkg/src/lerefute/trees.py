"""Rule-labelled trees of sequents shared by the prover and the refuter, plus exporters."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterator

from .display import DisplayMove
from .rules import DISPLAY
from .syntax import Position, Sequent, show

DISPLAY_RULES = DISPLAY
JSON_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ProofTree:
    """A node concludes ``conclusion`` by ``rule`` from the ``premises``.

    ``aux`` carries rule parameters: the display move for display steps,
    the chosen coordinate ``j`` for f_R/g_L, and occurrence families
    ``I``/``J`` for the generalised lattice rules of the refuter.
    """

    conclusion: Sequent
    rule: str
    premises: tuple = ()
    aux: dict = field(default_factory=dict, compare=False, hash=False)

    def walk(self) -> Iterator["ProofTree"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.premises))

    def rules(self, include_display: bool = False) -> Counter:
        return Counter(
            n.rule for n in self.walk() if include_display or n.rule not in DISPLAY_RULES
        )

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)


DerivationTree = ProofTree
RefutationTree = ProofTree


def display_chain(steps: list[tuple[DisplayMove, Sequent]], start: Sequent, top: ProofTree) -> ProofTree:
    """Wrap ``top`` (concluding the last sequent of ``steps``) in display steps down to ``start``.

    ``steps`` leads from ``start`` to ``top.conclusion``; the returned tree
    concludes ``start``.
    """
    tree = top
    seqs = [start] + [s for _, s in steps]
    for k in range(len(steps) - 1, -1, -1):
        move, _ = steps[k]
        back = move.inverse()
        tree = ProofTree(seqs[k], back.rule, (tree,), {"move": back})
    return tree


# --- exporters -------------------------------------------------------------


def _aux_json(aux: dict) -> dict:
    out: dict[str, Any] = {}
    for k, v in aux.items():
        if isinstance(v, DisplayMove):
            out[k] = {"rule": v.rule, "conn": v.conn, "coord": v.coord, "direction": v.direction}
        elif isinstance(v, Position):
            out[k] = _pos_json(v)
        elif isinstance(v, (list, tuple)) and v and all(isinstance(x, Position) for x in v):
            out[k] = [_pos_json(x) for x in v]
        elif isinstance(v, (list, tuple)):
            out[k] = list(v)
        else:
            out[k] = v
    return out


def _pos_json(p: Position) -> dict:
    return {"side": p.side, "path": list(p.path), "polarity": p.polarity}


def tree_to_dict(t: ProofTree) -> dict:
    return {
        "conclusion": show(t.conclusion),
        "rule": t.rule,
        "aux": _aux_json(t.aux),
        "premises": [tree_to_dict(p) for p in t.premises],
    }


def tree_to_json(t: ProofTree, indent: int | None = 2) -> str:
    return json.dumps({"version": JSON_SCHEMA_VERSION, "tree": tree_to_dict(t)}, indent=indent, ensure_ascii=False)


def _rule_label(t: ProofTree) -> str:
    if t.rule in DISPLAY_RULES and "move" in t.aux:
        return str(t.aux["move"])
    if "j" in t.aux:
        return f"{t.rule} [j={t.aux['j']}]"
    return t.rule


def tree_to_text(t: ProofTree) -> str:
    """Indented rendering, conclusion first, premises below."""
    lines: list[str] = []

    def go(node: ProofTree, depth: int) -> None:
        lines.append(f"{'  ' * depth}{show(node.conclusion)}    [{_rule_label(node)}]")
        for p in node.premises:
            go(p, depth + 1)

    go(t, 0)
    return "\n".join(lines)


def tree_to_dot(t: ProofTree, name: str = "derivation") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    counter = [0]

    def go(node: ProofTree) -> str:
        nid = f"n{counter[0]}"
        counter[0] += 1
        label = f"{show(node.conclusion)}\\n[{_rule_label(node)}]"
        lines.append(f'  {nid} [label="{_esc(label)}"];')
        for p in node.premises:
            pid = go(p)
            lines.append(f"  {pid} -> {nid};")
        return nid

    go(t)
    lines.append("}")
    return "\n".join(lines)


def _esc(text: str) -> str:
    return text.replace('"', '\\"')
