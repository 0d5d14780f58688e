"""Tableau decision procedure over sequents.

A rule instance applied to a sequent on a branch yields a list of
alternatives. Each alternative is a list of sequents. A single
alternative extends the branch (a conjunctive reading). Several
alternatives split the branch (a disjunctive reading). An instance counts
as already applied on a branch when one of its alternatives is wholly
present there. A branch is terminated when every instance is in that
state. A rule with no alternatives at all (a nullary structural rule)
leaves nothing to show, so it marks its branch open.

Rules that do not split are applied first, display moves included. Each
branch then ends on the sequents produced by its last split, rather than
on display variants of earlier sequents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .display import display_neighbors
from .refuter import expected_premises, lattice_occurrences, side_condition_errors
from .rules import (
    AND_L,
    BOT_R,
    F_L,
    F_R,
    F_R_NE,
    FHAT_BOTCHECK,
    FHAT_GCHECK,
    FHAT_P,
    G_L,
    G_L_NE,
    G_R,
    OR_R,
    P_GCHECK,
    TOP_L,
    TOPHAT_GCHECK,
)
from .signature import Signature
from .syntax import (
    BOTCHECK,
    TOPHAT,
    And,
    App,
    Atom,
    Kind,
    Or,
    SApp,
    Sequent,
    check_sequent,
    is_residual_free,
    show,
)

AND_CHAIN = "∧_chain"
OR_CHAIN = "∨_chain"
RESIDUATION = "residuation"

SAME_BRANCH = "same"
NEW_BRANCHES = "split"


class BranchStatus(Enum):
    OPEN = "OPEN"
    CLOSED = "CLOSED"
    UNTERMINATED = "UNTERMINATED"


class TableauError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """The node budget ran out before the tableau terminated."""


@dataclass
class TableauNode:
    sequent: Sequent
    children: list = field(default_factory=list)
    rule_applied: str | None = None  # rule that produced the children
    source: Sequent | None = None  # sequent that rule was applied to
    branch_link: str | None = None  # SAME_BRANCH or NEW_BRANCHES
    status: BranchStatus | None = None  # set on leaves
    reason: str | None = None  # why a leaf is open

    def walk(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list["TableauNode"]:
        return [n for n in self.walk() if not n.children]

    def branches(self) -> list[list["TableauNode"]]:
        """Root-to-leaf node lists."""
        out = []
        stack = [(self, [self])]
        while stack:
            node, path = stack.pop()
            if not node.children:
                out.append(path)
            for c in reversed(node.children):
                stack.append((c, path + [c]))
        return out

    def has_revisit(self) -> bool:
        """Whether some branch holds the same sequent twice."""
        stack = [(self, False)]
        on_path: set = set()
        while stack:
            node, leaving = stack.pop()
            if leaving:
                on_path.discard(node.sequent)
                continue
            if node.sequent in on_path:
                return True
            on_path.add(node.sequent)
            stack.append((node, True))
            stack.extend((c, False) for c in reversed(node.children))
        return False

    def size(self) -> int:
        return sum(1 for _ in self.walk())


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    source: Sequent
    alternatives: tuple  # tuple of tuples of sequents

    @property
    def splits(self) -> bool:
        return len(self.alternatives) != 1


def _prov(seq: Sequent) -> Sequent:
    return seq.as_kind(Kind.PROVABLE)


_STRUCTURAL = (FHAT_BOTCHECK, FHAT_P, FHAT_GCHECK, TOPHAT_GCHECK, P_GCHECK)


def expand(seq: Sequent, sig: Signature) -> list[RuleInstance]:
    """Every tableau rule instance applicable to ``seq`` (side conditions included)."""
    seq = _prov(seq)
    anti = seq.as_kind(Kind.REFUTABLE)
    a, s = seq.ante, seq.succ
    out: list[RuleInstance] = []

    def single(rule, prems):
        out.append(RuleInstance(rule, seq, (tuple(_prov(p) for p in prems),)))

    def split(rule, prems):
        alts = tuple(dict.fromkeys((_prov(p),) for p in prems))
        out.append(RuleInstance(rule, seq, alts))

    free = is_residual_free(seq, sig)
    # non-splitting logical rules
    if isinstance(a, App) and expected_premises(F_L, anti, {}, sig) is not None:
        single(F_L, expected_premises(F_L, anti, {}, sig))
    if isinstance(s, App) and expected_premises(G_R, anti, {}, sig) is not None:
        single(G_R, expected_premises(G_R, anti, {}, sig))
    top_l = expected_premises(TOP_L, anti, {}, sig)
    if top_l is not None:
        single(TOP_L, top_l)
    bot_r = expected_premises(BOT_R, anti, {}, sig)
    if bot_r is not None:
        single(BOT_R, bot_r)
    if isinstance(s, And):
        single(AND_CHAIN, [Sequent(a, s.left), Sequent(a, s.right)])
    if isinstance(a, Or):
        single(OR_CHAIN, [Sequent(a.left, s), Sequent(a.right, s)])
    # residuation
    for move, nxt in display_neighbors(seq, sig):
        out.append(RuleInstance(RESIDUATION + ":" + str(move), seq, ((nxt,),)))
    if not free:
        return out
    # splitting rules: f_R / g_L with a chain branch, then the rest
    if isinstance(a, SApp) and isinstance(s, App) and expected_premises(F_R, anti, {"j": 1}, sig) is not None:
        n = len(a.args)
        prem = [_prov(p) for p in expected_premises(F_R, anti, {"j": 1}, sig)[:n]]
        chain = tuple(_prov(expected_premises(F_R, anti, {"j": j}, sig)[-1]) for j in range(1, n + 1))
        out.append(RuleInstance(F_R, seq, tuple((p,) for p in prem) + (chain,)))
    if isinstance(a, App) and isinstance(s, SApp) and expected_premises(G_L, anti, {"j": 1}, sig) is not None:
        n = len(s.args)
        prem = [_prov(p) for p in expected_premises(G_L, anti, {"j": 1}, sig)[:n]]
        chain = tuple(_prov(expected_premises(G_L, anti, {"j": j}, sig)[-1]) for j in range(1, n + 1))
        out.append(RuleInstance(G_L, seq, (chain,) + tuple((p,) for p in prem)))
    for rule in (F_R_NE, G_L_NE):
        prem = expected_premises(rule, anti, {}, sig)
        if prem is not None:
            split(rule, prem)
    for rule, main_ok in ((AND_L, isinstance(a, And)), (OR_R, isinstance(s, Or))):
        if not main_ok:
            continue
        side = "SUCCEDENT" if rule == AND_L else "PRECEDENT"
        I, J = lattice_occurrences(anti, side, sig)
        if side_condition_errors(rule, anti, sig):
            continue
        split(rule, expected_premises(rule, anti, {"I": I, "J": J}, sig))
    for rule in _STRUCTURAL:
        prem = expected_premises(rule, anti, {}, sig)
        if prem is not None:
            split(rule, prem)
    return out


def open_shape(seq: Sequent, sig: Signature) -> bool:
    """Sequent shapes that are refutable outright."""
    a, s = seq.ante, seq.succ

    def is_g(x):
        return isinstance(x, App) and sig[x.conn].family == "G" and not sig[x.conn].is_residual

    def is_f(x):
        return isinstance(x, App) and sig[x.conn].family == "F" and not sig[x.conn].is_residual

    if s == BOTCHECK:
        return a == TOPHAT or isinstance(a, Atom) or is_g(a)
    if isinstance(s, Atom):
        return a == TOPHAT or (isinstance(a, Atom) and a != s) or is_g(a)
    if is_f(s):
        return is_g(a) or isinstance(a, Atom) or a == TOPHAT
    return False


def classify_branch(branch: list[Sequent], sig: Signature, terminated: bool | None = None) -> BranchStatus:
    """OPEN iff the terminated branch holds an outright refutable sequent.

    Termination is checked unless the caller vouches for it.
    """
    if terminated is None:
        terminated = is_terminated(branch, sig)
    if not terminated:
        raise TableauError("branch is not terminated")
    return BranchStatus.OPEN if any(open_shape(s, sig) for s in branch) else BranchStatus.CLOSED


def is_terminated(branch: list[Sequent], sig: Signature) -> bool:
    present = set(branch)
    for seq in branch:
        for inst in expand(seq, sig):
            if not inst.alternatives or not any(all(x in present for x in alt) for alt in inst.alternatives):
                return False
    return True


# --- building -------------------------------------------------------------


class _Branch:
    """Sequents on one branch plus scan cursors over their rule instances.

    Sequents are only ever added, so an instance seen as already applied
    stays applied and the cursors never move backwards.
    """

    __slots__ = ("seqs", "present", "cursors", "sig", "has_open", "heads", "checked")

    def __init__(self, seqs, present, cursors, sig, has_open):
        self.seqs = seqs
        self.present = present
        self.cursors = cursors  # one (sequent index, instance index) per phase
        self.sig = sig
        self.has_open = has_open
        # the root and sequents added by splits; everything else on the branch
        # lies in the non-splitting closure of one of these
        self.heads = list(seqs)
        self.checked = 0  # heads before this index have been examined

    @classmethod
    def start(cls, seq: Sequent, sig: Signature) -> "_Branch":
        return cls([seq], {seq}, [(0, 0), (0, 0)], sig, open_shape(seq, sig))

    def copy(self) -> "_Branch":
        out = _Branch(list(self.seqs), set(self.present), list(self.cursors), self.sig, self.has_open)
        out.heads = list(self.heads)
        out.checked = self.checked
        return out

    def add(self, seq: Sequent) -> None:
        self.seqs.append(seq)
        self.present.add(seq)
        self.has_open = self.has_open or open_shape(seq, self.sig)


class _Builder:
    def __init__(self, sig: Signature, budget: int, split_first: bool, prune: bool, lookahead: int = 8):
        self.sig = sig
        self.budget = budget
        self.nodes = 0
        self.cache: dict[Sequent, tuple[list[RuleInstance], list[RuleInstance]]] = {}
        self.phases = (True, False) if split_first else (False, True)
        self.prune = prune
        self.found_closed = False
        self.scores: dict[tuple, int] = {}
        self.closures: dict[Sequent, tuple] = {}
        self.settled_at: dict[Sequent, int] = {}
        self.unsettled_at: dict[Sequent, int] = {}
        self.lookahead = lookahead

    def instances(self, seq: Sequent, want_split: bool) -> list[RuleInstance]:
        if seq not in self.cache:
            all_inst = expand(seq, self.sig)
            self.cache[seq] = ([i for i in all_inst if not i.splits], [i for i in all_inst if i.splits])
        return self.cache[seq][1 if want_split else 0]

    def new_node(self, seq: Sequent) -> TableauNode:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"tableau exceeded {self.budget} nodes")
        return TableauNode(seq)

    def grow(self, leaf: TableauNode, br: _Branch) -> None:
        """Saturate the branch ending at ``leaf``, attaching children in place."""
        while True:
            if self.prune:
                if self.found_closed:
                    leaf.status = BranchStatus.UNTERMINATED
                    leaf.reason = "not explored: a closed branch was already found"
                    return
                while not br.has_open and br.checked < len(br.heads):
                    br.has_open = self.settled(br.heads[br.checked], self.lookahead)
                    br.checked += 1
                if br.has_open:
                    leaf.status = BranchStatus.OPEN
                    leaf.reason = "holds a refutable sequent; further expansion cannot close it"
                    return
            inst = self._next(br)
            if inst is None:
                leaf.status = classify_branch(br.seqs, self.sig, terminated=True)
                if leaf.status is BranchStatus.CLOSED:
                    self.found_closed = True
                return
            if not inst.alternatives:
                leaf.rule_applied = inst.rule
                leaf.source = inst.source
                leaf.status = BranchStatus.OPEN
                leaf.reason = f"{inst.rule} on {show(inst.source)} has no premises"
                return
            if len(inst.alternatives) == 1:
                for x in inst.alternatives[0]:
                    if x not in br.present:
                        leaf = self._link(leaf, x, inst)
                        br.add(x)
                continue
            leaf.rule_applied = inst.rule
            leaf.source = inst.source
            leaf.branch_link = NEW_BRANCHES
            for alt in inst.alternatives:
                new = [x for x in dict.fromkeys(alt) if x not in br.present]
                if not new:
                    continue
                first = self.new_node(new[0])
                leaf.children.append(first)
                sub = br.copy()
                sub.add(new[0])
                sub.heads.extend(new)
                tail = first
                for x in new[1:]:
                    tail = self._link(tail, x, inst)
                    sub.add(x)
                self.grow(tail, sub)
            return

    def _link(self, node: TableauNode, seq: Sequent, inst: RuleInstance) -> TableauNode:
        child = self.new_node(seq)
        node.children.append(child)
        node.rule_applied = inst.rule
        node.source = inst.source
        node.branch_link = SAME_BRANCH
        return child

    def _pending(self, inst: RuleInstance, present: set) -> bool:
        return not inst.alternatives or not any(all(x in present for x in alt) for alt in inst.alternatives)

    def closure(self, seq: Sequent) -> tuple[Sequent, ...]:
        """``seq`` and everything non-splitting rules add to a branch holding it."""
        hit = self.closures.get(seq)
        if hit is None:
            seen = {seq: None}
            todo = [seq]
            while todo:
                x = todo.pop()
                for inst in self.instances(x, False):
                    for y in inst.alternatives[0] if inst.alternatives else ():
                        if y not in seen:
                            seen[y] = None
                            todo.append(y)
            hit = tuple(seen)
            self.closures[seq] = hit
        return hit

    def settled(self, seq: Sequent, depth: int) -> bool:
        """Every terminated branch through ``seq`` is open, as seen within ``depth`` splits.

        Depth 0 asks for an outright refutable sequent in the closure. Depth
        d also accepts a splitting instance on a closure member whose every
        alternative holds a sequent settled at depth d - 1: a terminated
        branch contains one of those alternatives.
        """
        known = self.settled_at.get(seq)
        if known is not None and known <= depth:
            return True
        if self.unsettled_at.get(seq, -1) >= depth:
            return False
        members = self.closure(seq)
        ok = any(open_shape(x, self.sig) for x in members)
        if not ok and depth > 0:
            ok = any(
                inst.alternatives and all(any(self.settled(z, depth - 1) for z in alt) for alt in inst.alternatives)
                for x in members
                for inst in self.instances(x, True)
            )
        if ok:
            self.settled_at[seq] = depth
        else:
            self.unsettled_at[seq] = depth
        return ok

    def _unsettled(self, inst: RuleInstance) -> int:
        key = (inst.rule, inst.source, inst.alternatives)
        hit = self.scores.get(key)
        if hit is None:
            d = max(self.lookahead - 1, 0)
            hit = sum(1 for alt in inst.alternatives if not any(self.settled(x, d) for x in alt))
            self.scores[key] = hit
        return hit

    def _best_split(self, br: _Branch, lo: int) -> RuleInstance:
        present = br.present
        best, best_score = None, None
        for m in range(len(br.seqs) - 1, lo - 1, -1):
            for inst in self.instances(br.seqs[m], True):
                if not self._pending(inst, present):
                    continue
                score = self._unsettled(inst) if self.prune else 0
                if best is None or score < best_score:
                    best, best_score = inst, score
                    if score == 0:
                        return best
            if best is not None and not self.prune:
                return best
        return best

    def _next(self, br: _Branch) -> RuleInstance | None:
        """The next instance to apply on ``br``, or None when it is terminated.

        Among splitting instances the one leaving the fewest alternatives
        without an outright refutable sequent goes first, newest sequent
        first on ties, so a branch follows one line of decomposition to its
        end before returning to older pending splits.
        """
        present = br.present
        for phase, want_split in enumerate(self.phases):
            k, i = br.cursors[phase]
            while k < len(br.seqs):
                insts = self.instances(br.seqs[k], want_split)
                while i < len(insts) and not self._pending(insts[i], present):
                    i += 1
                if i < len(insts):
                    break
                k += 1
                i = 0
            br.cursors[phase] = (k, i)
            if k == len(br.seqs):
                continue
            if want_split:
                return self._best_split(br, k)
            return self.instances(br.seqs[k], want_split)[i]
        return None


@dataclass
class Verdict:
    status: str  # "VALID" or "INVALID"
    tree: TableauNode
    nodes: int

    @property
    def valid(self) -> bool:
        return self.status == "VALID"


def build_tableau(
    seq: Sequent, sig: Signature, budget: int = 200_000, split_first: bool = False, prune: bool = False
) -> TableauNode:
    """A tableau tree for ``seq``, terminated on every branch unless ``prune`` is set.

    ``split_first`` applies splitting rules before non-splitting ones; the
    verdict does not depend on it, which the test-suite checks. With
    ``prune``, a branch stops as soon as it holds a refutable sequent, and
    the search stops at the first closed branch; the verdict is unchanged.
    """
    check_sequent(seq, sig)
    if not is_residual_free(seq, sig):
        raise TableauError("the tableau expects a residual-free sequent")
    b = _Builder(sig, budget, split_first, prune)
    root = b.new_node(_prov(seq))
    b.grow(root, _Branch.start(root.sequent, sig))
    root.nodes_used = b.nodes  # type: ignore[attr-defined]
    return root


def tree_status(root: TableauNode) -> BranchStatus:
    """CLOSED when at least one branch is closed, OPEN otherwise."""
    if any(leaf.status is BranchStatus.CLOSED for leaf in root.leaves()):
        return BranchStatus.CLOSED
    return BranchStatus.OPEN


def decide(
    seq: Sequent, sig: Signature, budget: int = 200_000, split_first: bool = False, prune: bool = True
) -> Verdict:
    """VALID iff the terminated tableau has a closed branch.

    Raises :class:`BudgetExceeded` (distinct from an INVALID verdict) when
    the node budget runs out. Pass ``prune=False`` for a tree terminated on
    every branch.
    """
    root = build_tableau(seq, sig, budget, split_first, prune)
    status = "VALID" if tree_status(root) is BranchStatus.CLOSED else "INVALID"
    return Verdict(status, root, root.size())


def branch_sequents(branch: list[TableauNode]) -> list[Sequent]:
    return [n.sequent for n in branch]


# --- export ---------------------------------------------------------------


def tableau_to_dict(node: TableauNode) -> dict:
    out = {"sequent": show(node.sequent), "children": [tableau_to_dict(c) for c in node.children]}
    if node.rule_applied is not None:
        out["rule_applied"] = node.rule_applied
        out["source"] = show(node.source)
        out["branch_link"] = node.branch_link
    if node.status is not None:
        out["status"] = node.status.value
    if node.reason:
        out["reason"] = node.reason
    return out


def tableau_to_json(node: TableauNode, indent: int | None = 2) -> str:
    from .trees import JSON_SCHEMA_VERSION

    return json.dumps({"version": JSON_SCHEMA_VERSION, "tableau": tableau_to_dict(node)}, indent=indent, ensure_ascii=False)


def tableau_to_text(node: TableauNode) -> str:
    lines: list[str] = []

    def go(n: TableauNode, depth: int) -> None:
        tag = f"  [{n.status.value}]" if n.status is not None else ""
        lines.append(f"{'  ' * depth}{show(n.sequent)}{tag}")
        for c in n.children:
            go(c, depth + (1 if n.branch_link == NEW_BRANCHES else 0))

    go(node, 0)
    return "\n".join(lines)


def tableau_to_dot(node: TableauNode) -> str:
    """Leaves of open branches are red, of closed branches green."""
    lines = ["digraph tableau {", "  node [shape=box, fontname=monospace];"]
    counter = [0]

    def go(n: TableauNode) -> str:
        nid = f"n{counter[0]}"
        counter[0] += 1
        attrs = f'label="{show(n.sequent)}"'
        if n.status is BranchStatus.OPEN:
            attrs += ", color=red, fontcolor=red"
        elif n.status is BranchStatus.CLOSED:
            attrs += ", color=green, fontcolor=darkgreen"
        lines.append(f"  {nid} [{attrs}];")
        for c in n.children:
            cid = go(c)
            style = "solid" if n.branch_link == NEW_BRANCHES else "dashed"
            label = (n.rule_applied or "").replace('"', "'")
            lines.append(f'  {nid} -> {cid} [style={style}, label="{label}"];')
        return nid

    go(node)
    lines.append("}")
    return "\n".join(lines)
