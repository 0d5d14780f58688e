"""Display postulates as reversible rewrites, and display-equivalence classes."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .signature import MONO, Signature
from .syntax import (
    PRE,
    Atom,
    Position,
    SApp,
    Sequent,
    check_structure,
    replace_at,
    show,
    subterm,
)

FORWARD = "FORWARD"
BACKWARD = "BACKWARD"


@dataclass(frozen=True)
class DisplayMove:
    """One display postulate. ``conn`` is always the primitive connective."""

    rule: str  # F_RES, F_GAL, G_RES, G_GAL
    conn: str
    coord: int
    direction: str

    def inverse(self) -> "DisplayMove":
        return DisplayMove(self.rule, self.conn, self.coord, BACKWARD if self.direction == FORWARD else FORWARD)

    def __str__(self) -> str:
        return f"{self.rule}({self.conn},{self.coord}){'' if self.direction == FORWARD else '^-1'}"


class DisplayError(ValueError):
    pass


def _swap(args: tuple, i: int, new) -> tuple:
    lst = list(args)
    lst[i - 1] = new
    return tuple(lst)


def _moves_from_ante(seq: Sequent, sig: Signature):
    x = seq.ante
    if not isinstance(x, SApp):
        return
    c = sig[x.conn]
    if not c.is_residual:
        # primitive ^f at the root: one forward move per coordinate
        for i, e in enumerate(c.order_type, start=1):
            res = sig[f"{c.name}#{i}"]
            child = x.args[i - 1]
            wrapped = SApp(res.name, res.family, _swap(x.args, i, seq.succ))
            if e is MONO:
                yield DisplayMove("F_RES", c.name, i, FORWARD), Sequent(child, wrapped, seq.kind)
            else:
                yield DisplayMove("F_GAL", c.name, i, FORWARD), Sequent(wrapped, child, seq.kind)
        return
    parent = sig[c.parent]
    i = c.coordinate
    child = x.args[i - 1]
    if parent.family == "F":
        # ^f#i(.., S at i, ..) |- S_i  back to  ^f(.., S_i, ..) |- S
        yield DisplayMove("F_GAL", parent.name, i, BACKWARD), Sequent(
            SApp(parent.name, "F", _swap(x.args, i, seq.succ)), child, seq.kind
        )
    else:
        # ^g@h(.., P at h, ..) |- S_h  back to  P |- ~g(.., S_h, ..)
        yield DisplayMove("G_RES", parent.name, i, BACKWARD), Sequent(
            child, SApp(parent.name, "G", _swap(x.args, i, seq.succ)), seq.kind
        )


def _moves_from_succ(seq: Sequent, sig: Signature):
    x = seq.succ
    if not isinstance(x, SApp):
        return
    c = sig[x.conn]
    if not c.is_residual:
        for k, e in enumerate(c.order_type, start=1):
            res = sig[f"{c.name}@{k}"]
            child = x.args[k - 1]
            wrapped = SApp(res.name, res.family, _swap(x.args, k, seq.ante))
            if e is MONO:
                yield DisplayMove("G_RES", c.name, k, FORWARD), Sequent(wrapped, child, seq.kind)
            else:
                yield DisplayMove("G_GAL", c.name, k, FORWARD), Sequent(child, wrapped, seq.kind)
        return
    parent = sig[c.parent]
    i = c.coordinate
    child = x.args[i - 1]
    if parent.family == "F":
        # P_i |- ~f#i(.., S at i, ..)  back to  ^f(.., P_i, ..) |- S
        yield DisplayMove("F_RES", parent.name, i, BACKWARD), Sequent(
            SApp(parent.name, "F", _swap(x.args, i, seq.ante)), child, seq.kind
        )
    else:
        # P_k |- ~g@k(.., P at k, ..)  back to  P |- ~g(.., P_k, ..)
        yield DisplayMove("G_GAL", parent.name, i, BACKWARD), Sequent(
            child, SApp(parent.name, "G", _swap(x.args, i, seq.ante)), seq.kind
        )


def display_neighbors(seq: Sequent, sig: Signature) -> list[tuple[DisplayMove, Sequent]]:
    """All sequents one display postulate away, in either direction."""
    return list(_moves_from_ante(seq, sig)) + list(_moves_from_succ(seq, sig))


def apply_move(seq: Sequent, move: DisplayMove, sig: Signature) -> Sequent:
    for m, nxt in display_neighbors(seq, sig):
        if m == move:
            return nxt
    raise DisplayError(f"{move} does not apply to {show(seq)}")


def equivalence_class(seq: Sequent, sig: Signature) -> list[Sequent]:
    """Closure of ``{seq}`` under display moves, in breadth-first order."""
    return list(class_with_paths(seq, sig))


def class_with_paths(seq: Sequent, sig: Signature) -> dict[Sequent, tuple[Sequent, DisplayMove] | None]:
    """Breadth-first parent pointers over the class (the start maps to None)."""
    parent: dict[Sequent, tuple[Sequent, DisplayMove] | None] = {seq: None}
    queue = deque([seq])
    while queue:
        cur = queue.popleft()
        for move, nxt in display_neighbors(cur, sig):
            if nxt not in parent:
                parent[nxt] = (cur, move)
                queue.append(nxt)
    return parent


def path_to(parents: dict, target: Sequent) -> list[tuple[DisplayMove, Sequent]]:
    """Moves leading from the class root to ``target`` as (move, resulting sequent) pairs."""
    steps = []
    cur = target
    while parents[cur] is not None:
        prev, move = parents[cur]
        steps.append((move, cur))
        cur = prev
    steps.reverse()
    return steps


def class_graph(seq: Sequent, sig: Signature) -> tuple[list[Sequent], list[tuple[Sequent, DisplayMove, Sequent]]]:
    """Nodes and directed move edges of the display class."""
    nodes = equivalence_class(seq, sig)
    edges = [(s, m, t) for s in nodes for m, t in display_neighbors(s, sig)]
    return nodes, edges


def class_to_dot(seq: Sequent, sig: Signature) -> str:
    nodes, edges = class_graph(seq, sig)
    ids = {s: f"n{k}" for k, s in enumerate(nodes)}
    lines = ["digraph display_class {", "  node [shape=box, fontname=monospace];"]
    for s in nodes:
        lines.append(f'  {ids[s]} [label="{_esc(show(s))}"];')
    for s, m, t in edges:
        if m.direction == FORWARD:
            lines.append(f'  {ids[s]} -> {ids[t]} [label="{_esc(str(m))}"];')
    lines.append("}")
    return "\n".join(lines)


def _esc(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


# --- displaying a chosen substructure ------------------------------------

_HOLE = Atom("∘hole")


def display_path(seq: Sequent, at: Position, sig: Signature) -> list[tuple[DisplayMove, Sequent]]:
    """Moves that bring the node at ``at`` to be an entire side.

    The path is computed on a copy of ``seq`` whose node at ``at`` is a
    placeholder leaf, so it is valid for any filling of that node.
    """
    subterm(seq, at)
    marked = replace_at(seq, at, _HOLE)
    parents = class_with_paths(marked, sig)
    side_attr = "ante" if at.polarity == PRE else "succ"
    hits = [s for s in parents if getattr(s, side_attr) == _HOLE]
    if len(hits) != 1:
        raise DisplayError(f"expected exactly one member displaying {at!r}, found {len(hits)}")
    return path_to(parents, hits[0])


def replay_moves(seq: Sequent, moves: list[DisplayMove], sig: Signature) -> list[tuple[DisplayMove, Sequent]]:
    """Apply ``moves`` in turn, recording each intermediate sequent."""
    out = []
    cur = seq
    for m in moves:
        cur = apply_move(cur, m, sig)
        out.append((m, cur))
    return out


def display_steps(seq: Sequent, at: Position, sig: Signature) -> list[tuple[DisplayMove, Sequent]]:
    """Like :func:`display_path` but the intermediate sequents are those of ``seq`` itself."""
    return replay_moves(seq, [m for m, _ in display_path(seq, at, sig)], sig)


def display_at(seq: Sequent, at: Position, sig: Signature) -> Sequent:
    """The class member whose whole precedent (PRE) or succedent (SUC) is the node at ``at``."""
    steps = display_steps(seq, at, sig)
    return steps[-1][1] if steps else seq


def subst_displayed(seq: Sequent, at: Position, replacement, sig: Signature) -> Sequent:
    """Display the node, swap in ``replacement``, and undo the display moves."""
    check_structure(replacement, sig, at.polarity)
    moves = [m for m, _ in display_path(seq, at, sig)]
    shown = replay_moves(seq, moves, sig)
    cur = shown[-1][1] if shown else seq
    if at.polarity == PRE:
        cur = Sequent(replacement, cur.succ, cur.kind)
    else:
        cur = Sequent(cur.ante, replacement, cur.kind)
    for m in reversed(moves):
        cur = apply_move(cur, m.inverse(), sig)
    return cur


# --- relation between two class members -----------------------------------


def _contains(big, small) -> bool:
    if big == small:
        return True
    if isinstance(big, SApp):
        return any(_contains(a, small) for a in big.args)
    return False


def decomposition_cases(s1: Sequent, s2: Sequent) -> list[int]:
    """Which of the four subtree relations between two equivalent sequents hold.

    1: P1 inside P2 and S2 inside S1.   2: P2 inside P1 and S1 inside S2.
    3: P1 inside S2 and P2 inside S1.   4: S2 inside P1 and S1 inside P2.
    """
    out = []
    if _contains(s2.ante, s1.ante) and _contains(s1.succ, s2.succ):
        out.append(1)
    if _contains(s1.ante, s2.ante) and _contains(s2.succ, s1.succ):
        out.append(2)
    if _contains(s2.succ, s1.ante) and _contains(s1.succ, s2.ante):
        out.append(3)
    if _contains(s1.ante, s2.succ) and _contains(s2.ante, s1.succ):
        out.append(4)
    return out
