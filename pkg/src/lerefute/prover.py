"""Cut-free backward proof search in the display calculus, and a forward derivation checker.

Every non-display rule has premises of strictly smaller measure than its
conclusion (complexity first, then the number of nodes other than the
structural constants), and display moves preserve that measure. Searching
whole display classes and recursing only through non-display rules
therefore terminates, and a failure recorded for one class member holds
for the entire class.
"""

from __future__ import annotations

from .display import DisplayError, apply_move, class_with_paths, path_to
from .rules import (
    AND_L1,
    AND_L2,
    AND_R,
    BOT_L,
    BOT_R,
    BOT_W,
    DISPLAY,
    F_L,
    F_R,
    G_L,
    G_R,
    ID,
    OR_L,
    OR_R1,
    OR_R2,
    TOP_L,
    TOP_R,
    TOP_W,
)
from .signature import MONO, Signature
from .syntax import (
    BOTCHECK,
    TOPHAT,
    And,
    App,
    Atom,
    Bot,
    Kind,
    Or,
    SApp,
    Sequent,
    Top,
    TypeErrorLE,
    check_sequent,
    is_residual_free,
    show,
)
from .trees import ProofTree, display_chain


class ProverError(ValueError):
    pass


class DepthLimitExceeded(RuntimeError):
    """The hard recursion guard fired; this would indicate a non-terminating search."""


def _premise(ante, succ) -> Sequent:
    return Sequent(ante, succ, Kind.PROVABLE)


def _oriented(upsilon, phi, e, upsilon_left: bool) -> Sequent:
    """``Υ ⊢^ε φ`` (or ``φ ⊢^ε Υ`` when ``upsilon_left`` is false)."""
    left, right = (upsilon, phi) if upsilon_left else (phi, upsilon)
    return _premise(left, right) if e is MONO else _premise(right, left)


def rule_instances(seq: Sequent, sig: Signature) -> list[tuple[str, list[Sequent], dict]]:
    """Every non-display rule instance concluding ``seq``: ``(rule, premises, aux)``."""
    a, s = seq.ante, seq.succ
    out: list[tuple[str, list[Sequent], dict]] = []
    # zero-premise rules
    if isinstance(a, Atom) and a == s:
        out.append((ID, [], {}))
    if a == TOPHAT and isinstance(s, Top):
        out.append((TOP_R, [], {}))
    if isinstance(a, Bot) and s == BOTCHECK:
        out.append((BOT_L, [], {}))
    # operational connectives on the precedent
    if isinstance(a, Top):
        out.append((TOP_L, [_premise(TOPHAT, s)], {}))
    elif isinstance(a, And):
        out.append((AND_L1, [_premise(a.left, s)], {}))
        out.append((AND_L2, [_premise(a.right, s)], {}))
    elif isinstance(a, Or):
        out.append((OR_L, [_premise(a.left, s), _premise(a.right, s)], {}))
    elif isinstance(a, App):
        c = sig[a.conn]
        if c.family == "F" and not c.is_residual:
            out.append((F_L, [_premise(SApp(a.conn, "F", a.args), s)], {"conn": a.conn}))
        elif c.family == "G" and not c.is_residual and isinstance(s, SApp) and s.conn == a.conn:
            prem = [_oriented(u, phi, e, False) for u, phi, e in zip(s.args, a.args, c.order_type)]
            out.append((G_L, prem, {"conn": a.conn}))
    # operational connectives on the succedent
    if isinstance(s, Bot):
        out.append((BOT_R, [_premise(a, BOTCHECK)], {}))
    elif isinstance(s, And):
        out.append((AND_R, [_premise(a, s.left), _premise(a, s.right)], {}))
    elif isinstance(s, Or):
        out.append((OR_R1, [_premise(a, s.left)], {}))
        out.append((OR_R2, [_premise(a, s.right)], {}))
    elif isinstance(s, App):
        c = sig[s.conn]
        if c.family == "G" and not c.is_residual:
            out.append((G_R, [_premise(a, SApp(s.conn, "G", s.args))], {"conn": s.conn}))
        elif c.family == "F" and not c.is_residual and isinstance(a, SApp) and a.conn == s.conn:
            prem = [_oriented(u, phi, e, True) for u, phi, e in zip(a.args, s.args, c.order_type)]
            out.append((F_R, prem, {"conn": s.conn}))
    # weakening into the structural constants
    if a != TOPHAT:
        out.append((TOP_W, [_premise(TOPHAT, s)], {}))
    if s != BOTCHECK:
        out.append((BOT_W, [_premise(a, BOTCHECK)], {}))
    return out


class _Search:
    def __init__(self, sig: Signature, depth_limit: int, exclude: frozenset = frozenset()):
        self.sig = sig
        self.depth_limit = depth_limit
        self.exclude = exclude
        # sequent -> (member of its class that was closed, tree for it) or None
        self.memo: dict[Sequent, tuple[Sequent, ProofTree] | None] = {}

    def tree_for(self, seq: Sequent, depth: int) -> ProofTree | None:
        if seq not in self.memo:
            self._solve_class(seq, depth)
        hit = self.memo[seq]
        if hit is None:
            return None
        member, tree = hit
        if member == seq:
            return tree
        parents = class_with_paths(seq, self.sig)
        return display_chain(path_to(parents, member), seq, tree)

    def _solve_class(self, seq: Sequent, depth: int) -> None:
        if depth > self.depth_limit:
            raise DepthLimitExceeded(f"proof search exceeded depth {self.depth_limit} at {show(seq)}")
        members = list(class_with_paths(seq, self.sig))
        result = None
        for m in members:
            result = self._close_member(m, depth)
            if result is not None:
                break
        for m in members:
            self.memo[m] = result

    def _close_member(self, m: Sequent, depth: int) -> tuple[Sequent, ProofTree] | None:
        for rule, premises, aux in rule_instances(m, self.sig):
            if rule in self.exclude:
                continue
            subtrees = []
            for p in premises:
                t = self.tree_for(p, depth + 1)
                if t is None:
                    break
                subtrees.append(t)
            else:
                return m, ProofTree(m, rule, tuple(subtrees), aux)
        return None


def prove(seq: Sequent, sig: Signature, depth_limit: int = 10_000, exclude=()) -> ProofTree | None:
    """A cut-free derivation of ``seq``, or None if it is not derivable.

    ``exclude`` names rules the search may not use; it exists to check
    that the test harness notices a crippled calculus.
    """
    check_sequent(seq, sig)
    if not is_residual_free(seq, sig):
        raise ProverError("proof search expects a residual-free sequent")
    seq = seq.as_kind(Kind.PROVABLE)
    return _Search(sig, depth_limit, frozenset(exclude)).tree_for(seq, 0)


def is_provable(seq: Sequent, sig: Signature) -> bool:
    return prove(seq, sig) is not None


# --- checking ------------------------------------------------------------


def display_step_ok(node: ProofTree, sig: Signature) -> bool:
    """A display node has one premise that the recorded move turns into the conclusion."""
    move = node.aux.get("move")
    if move is None or move.rule != node.rule or len(node.premises) != 1:
        return False
    prem = node.premises[0].conclusion
    if prem.kind is not node.conclusion.kind:
        return False
    try:
        return apply_move(prem, move, sig) == node.conclusion
    except DisplayError:
        return False


def check_derivation(tree: ProofTree, sig: Signature) -> bool:
    """True iff every node is a well-typed instance of a cut-free rule schema."""
    for node in tree.walk():
        seq = node.conclusion
        if seq.kind is not Kind.PROVABLE:
            return False
        try:
            check_sequent(seq, sig)
        except (TypeErrorLE, Exception):
            return False
        if node.rule in DISPLAY:
            if not display_step_ok(node, sig):
                return False
            continue
        wanted = [p.conclusion for p in node.premises]
        if not any(rule == node.rule and prem == wanted for rule, prem, _ in rule_instances(seq, sig)):
            return False
    return True
