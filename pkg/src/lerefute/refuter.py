"""Refutation calculus: backward refutation search and a forward checker.

The search follows the completeness argument. It first rejects sequents
with a bottom in precedent position or a top in succedent position, since
those are derivable. It then removes displayable lattice branching and
outer logical connectives by substitution under display. Last, it
case-splits on the shapes of the two roots. Each step is exact: whenever
its premises cannot all be refuted, the sequent is derivable. So ``refute``
returns None precisely on derivable input.
"""

from __future__ import annotations

from .display import display_path, replay_moves
from .prover import display_step_ok
from .rules import (
    AND_L,
    AND_R1,
    AND_R2,
    AX1,
    AX2,
    AX3,
    AX4,
    BOT_R,
    DISPLAY,
    F_L,
    F_R,
    F_R_NE,
    FHAT_BOTCHECK,
    FHAT_GCHECK,
    FHAT_P,
    G_BOTCHECK,
    G_F,
    G_L,
    G_L_NE,
    G_P,
    G_R,
    OR_L1,
    OR_L2,
    OR_R,
    P_F,
    P_GCHECK,
    REFUTATION_STRUCTURAL,
    TOP_L,
    TOPHAT_F,
    TOPHAT_GCHECK,
)
from .signature import MONO, Signature
from .syntax import (
    BOTCHECK,
    PRE,
    SUC,
    TOPHAT,
    And,
    App,
    Atom,
    Bot,
    Kind,
    Or,
    Position,
    SApp,
    Sequent,
    Top,
    check_sequent,
    is_branching,
    is_residual_free,
    leaf_positions,
    replace_at,
    show,
)
from .trees import ProofTree, display_chain


class RefuterError(ValueError):
    pass


def _anti(ante, succ) -> Sequent:
    return Sequent(ante, succ, Kind.REFUTABLE)


def _bot_type(upsilon, e) -> Sequent:
    """``Υ ⊬^ε ⊥̌^ε``."""
    return _anti(upsilon, BOTCHECK) if e is MONO else _anti(TOPHAT, upsilon)


def _top_type(upsilon, e) -> Sequent:
    """``⊤̂^ε ⊬^ε Υ``."""
    return _anti(TOPHAT, upsilon) if e is MONO else _anti(upsilon, BOTCHECK)


def _oriented(left, right, e) -> Sequent:
    """``left ⊬^ε right``."""
    return _anti(left, right) if e is MONO else _anti(right, left)


def _prim(sig: Signature, name: str, family: str) -> bool:
    c = sig.get(name)
    return c is not None and c.family == family and not c.is_residual


def _structural(sig: Signature, x, family: str) -> bool:
    """``x`` is a structural connective of the given family (residuals allowed)."""
    return isinstance(x, SApp) and x.family == family and sig.get(x.conn) is not None


def lattice_occurrences(seq: Sequent, side: str, sig: Signature) -> tuple[list[Position], list[Position]]:
    """Conjunction leaves of PRE polarity and disjunction leaves of SUC polarity on one side."""
    conj, disj = [], []
    for pos, f in leaf_positions(seq, sig):
        if pos.side != side:
            continue
        if isinstance(f, And) and pos.polarity == PRE:
            conj.append(pos)
        elif isinstance(f, Or) and pos.polarity == SUC:
            disj.append(pos)
    return conj, disj


def _lattice_premises(seq: Sequent, side: str, first: list[Sequent], I: list[Position], J: list[Position]) -> list[Sequent]:
    out = list(first)
    for pick in ("left", "right"):
        for pos in I:
            out.append(_sub(seq, pos, pick))
    for pick in ("left", "right"):
        for pos in J:
            out.append(_sub(seq, pos, pick))
    return out


def _sub(seq: Sequent, pos: Position, pick: str) -> Sequent:
    from .syntax import subterm

    f = subterm(seq, pos)
    return replace_at(seq, pos, getattr(f, pick))


def expected_premises(rule: str, seq: Sequent, aux: dict, sig: Signature) -> list[Sequent] | None:
    """Premises of ``rule`` for conclusion ``seq``, or None if the schema does not match.

    Side conditions on residuals and branching are checked separately by
    :func:`side_condition_errors`.
    """
    a, s = seq.ante, seq.succ
    if rule == AX1:
        return [] if a == TOPHAT and s == BOTCHECK else None
    if rule == AX2:
        return [] if isinstance(a, Atom) and s == BOTCHECK else None
    if rule == AX3:
        return [] if a == TOPHAT and isinstance(s, Atom) else None
    if rule == AX4:
        return [] if isinstance(a, Atom) and isinstance(s, Atom) and a != s else None

    if rule in (FHAT_BOTCHECK, FHAT_P, FHAT_GCHECK):
        if not _structural(sig, a, "F"):
            return None
        if rule == FHAT_BOTCHECK and s != BOTCHECK:
            return None
        if rule == FHAT_P and not isinstance(s, Atom):
            return None
        if rule == FHAT_GCHECK and not _structural(sig, s, "G"):
            return None
        prem = [_bot_type(u, e) for u, e in zip(a.args, sig[a.conn].order_type)]
        if rule == FHAT_GCHECK:
            prem += [_top_type(u, e) for u, e in zip(s.args, sig[s.conn].order_type)]
        return prem
    if rule in (TOPHAT_GCHECK, P_GCHECK):
        if not _structural(sig, s, "G"):
            return None
        if rule == TOPHAT_GCHECK and a != TOPHAT:
            return None
        if rule == P_GCHECK and not isinstance(a, Atom):
            return None
        return [_top_type(u, e) for u, e in zip(s.args, sig[s.conn].order_type)]

    if rule == G_BOTCHECK:
        return [] if isinstance(a, App) and _prim(sig, a.conn, "G") and s == BOTCHECK else None
    if rule == G_P:
        return [] if isinstance(a, App) and _prim(sig, a.conn, "G") and isinstance(s, Atom) else None
    if rule == P_F:
        return [] if isinstance(a, Atom) and isinstance(s, App) and _prim(sig, s.conn, "F") else None
    if rule == TOPHAT_F:
        return [] if a == TOPHAT and isinstance(s, App) and _prim(sig, s.conn, "F") else None
    if rule == G_F:
        ok = isinstance(a, App) and _prim(sig, a.conn, "G") and isinstance(s, App) and _prim(sig, s.conn, "F")
        return [] if ok else None

    if rule == F_L:
        if isinstance(a, App) and _prim(sig, a.conn, "F"):
            return [_anti(SApp(a.conn, "F", a.args), s)]
        return None
    if rule == G_R:
        if isinstance(s, App) and _prim(sig, s.conn, "G"):
            return [_anti(a, SApp(s.conn, "G", s.args))]
        return None

    if rule == F_R:
        if not (isinstance(s, App) and _prim(sig, s.conn, "F") and isinstance(a, SApp) and a.family == "F"):
            return None
        if a.conn != s.conn:
            return None
        ot = sig[s.conn].order_type
        j = aux.get("j")
        if not isinstance(j, int) or not 1 <= j <= len(ot):
            return None
        prem = [_bot_type(u, e) for u, e in zip(a.args, ot)]
        return prem + [_oriented(a.args[j - 1], s.args[j - 1], ot[j - 1])]
    if rule == G_L:
        if not (isinstance(a, App) and _prim(sig, a.conn, "G") and isinstance(s, SApp) and s.family == "G"):
            return None
        if a.conn != s.conn:
            return None
        ot = sig[a.conn].order_type
        j = aux.get("j")
        if not isinstance(j, int) or not 1 <= j <= len(ot):
            return None
        prem = [_top_type(u, e) for u, e in zip(s.args, ot)]
        return prem + [_oriented(a.args[j - 1], s.args[j - 1], ot[j - 1])]
    if rule == F_R_NE:
        ok = isinstance(s, App) and _prim(sig, s.conn, "F") and _structural(sig, a, "F") and a.conn != s.conn
        if not ok:
            return None
        return [_bot_type(u, e) for u, e in zip(a.args, sig[a.conn].order_type)]
    if rule == G_L_NE:
        ok = isinstance(a, App) and _prim(sig, a.conn, "G") and _structural(sig, s, "G") and a.conn != s.conn
        if not ok:
            return None
        return [_top_type(u, e) for u, e in zip(s.args, sig[s.conn].order_type)]

    if rule == TOP_L:
        return [_anti(TOPHAT, s)] if isinstance(a, Top) else None
    if rule in (OR_L1, OR_L2):
        if not isinstance(a, Or):
            return None
        return [_anti(a.left if rule == OR_L1 else a.right, s)]
    if rule in (AND_R1, AND_R2):
        if not isinstance(s, And):
            return None
        return [_anti(a, s.left if rule == AND_R1 else s.right)]
    if rule == BOT_R:
        return [_anti(a, BOTCHECK)] if isinstance(s, Bot) else None

    if rule in (AND_L, OR_R):
        side = "SUCCEDENT" if rule == AND_L else "PRECEDENT"
        main = a if rule == AND_L else s
        if not isinstance(main, And if rule == AND_L else Or):
            return None
        I, J = lattice_occurrences(seq, side, sig)
        if list(aux.get("I", [])) != I or list(aux.get("J", [])) != J:
            return None
        if rule == AND_L:
            first = [_anti(main.left, s), _anti(main.right, s)]
        else:
            first = [_anti(a, main.left), _anti(a, main.right)]
        return _lattice_premises(seq, side, first, I, J)
    return None


_RESIDUAL_FREE_RULES = REFUTATION_STRUCTURAL | {F_R, F_R_NE, G_L, G_L_NE, AND_L, OR_R}


def side_condition_errors(rule: str, seq: Sequent, sig: Signature) -> list[str]:
    errs = []
    if rule in _RESIDUAL_FREE_RULES and not is_residual_free(seq, sig):
        errs.append(f"{rule}: endsequent {show(seq)} contains residuals")
    if rule in (AND_L, OR_R) and is_branching(seq, sig):
        errs.append(f"{rule}: endsequent {show(seq)} is branching")
    return errs


def refutation_errors(tree: ProofTree, sig: Signature) -> list[str]:
    """Every schema or side-condition violation found in ``tree``."""
    errs: list[str] = []
    for node in tree.walk():
        seq = node.conclusion
        if seq.kind is not Kind.REFUTABLE:
            errs.append(f"{show(seq)}: not an antisequent")
            continue
        try:
            check_sequent(seq, sig)
        except Exception as exc:  # typing or unknown connective
            errs.append(f"{show(seq)}: {exc}")
            continue
        if node.rule in DISPLAY:
            if not display_step_ok(node, sig):
                errs.append(f"{show(seq)}: bad display step {node.rule}")
            continue
        wanted = expected_premises(node.rule, seq, node.aux, sig)
        got = [p.conclusion for p in node.premises]
        if wanted is None:
            errs.append(f"{show(seq)}: does not match the schema of {node.rule}")
        elif wanted != got:
            errs.append(f"{show(seq)}: premises do not match {node.rule}")
        errs.extend(side_condition_errors(node.rule, seq, sig))
    return errs


def check_refutation(tree: ProofTree, sig: Signature) -> bool:
    return not refutation_errors(tree, sig)


# --- search ---------------------------------------------------------------


class _Refuter:
    def __init__(self, sig: Signature, trace: list | None = None):
        self.sig = sig
        self.memo: dict[Sequent, ProofTree | None] = {}
        self.trace = trace

    def refute(self, seq: Sequent) -> ProofTree | None:
        if seq in self.memo:
            return self.memo[seq]
        out = self._refute(seq)
        self.memo[seq] = out
        return out

    def _node(self, rule: str, seq: Sequent, aux: dict | None = None) -> ProofTree | None:
        """Close ``seq`` with ``rule``, refuting every premise; None if some premise fails."""
        aux = aux or {}
        premises = expected_premises(rule, seq, aux, self.sig)
        assert premises is not None, (rule, show(seq))
        subtrees = []
        for p in premises:
            t = self.refute(p)
            if t is None:
                return None
            subtrees.append(t)
        if self.trace is not None:
            self.trace.append((rule, seq, premises))
        return ProofTree(seq, rule, tuple(subtrees), aux)

    def _under_display(self, seq: Sequent, pos: Position, new, rule: str, aux: dict | None = None) -> ProofTree | None:
        """Refute ``seq`` by replacing the leaf at ``pos`` with ``new`` and closing with ``rule``.

        The rule is applied to the class member displaying that leaf; display
        steps on either side of it are recorded in the tree.
        """
        sig = self.sig
        reduced = replace_at(seq, pos, new)
        child = self.refute(reduced)
        if child is None:
            return None
        moves = [m for m, _ in display_path(seq, pos, sig)]
        down = replay_moves(seq, moves, sig)
        shown = down[-1][1] if down else seq
        shown_new = replay_moves(reduced, moves, sig)
        shown_new = shown_new[-1][1] if shown_new else reduced
        back = replay_moves(shown_new, [m.inverse() for m in reversed(moves)], sig)
        top = display_chain(back, shown_new, child)
        node = ProofTree(shown, rule, (top,), aux or {})
        if self.trace is not None:
            self.trace.append((rule, shown, [shown_new]))
        return display_chain(down, seq, node)

    def _refute(self, seq: Sequent) -> ProofTree | None:
        leaves = leaf_positions(seq, self.sig)
        # (a) derivable outright
        for pos, f in leaves:
            if (pos.polarity == PRE and isinstance(f, Bot)) or (pos.polarity == SUC and isinstance(f, Top)):
                return None
        # (b) displayable lattice branching
        for pos, f in leaves:
            if pos.polarity == SUC and isinstance(f, And):
                return self._under_display(seq, pos, f.left, AND_R1) or self._under_display(
                    seq, pos, f.right, AND_R2
                )
            if pos.polarity == PRE and isinstance(f, Or):
                return self._under_display(seq, pos, f.left, OR_L1) or self._under_display(
                    seq, pos, f.right, OR_L2
                )
        # (c) invertible logical rules under display
        for pos, f in leaves:
            if pos.polarity == PRE and isinstance(f, App) and _prim(self.sig, f.conn, "F"):
                return self._under_display(seq, pos, SApp(f.conn, "F", f.args), F_L, {"conn": f.conn})
            if pos.polarity == SUC and isinstance(f, App) and _prim(self.sig, f.conn, "G"):
                return self._under_display(seq, pos, SApp(f.conn, "G", f.args), G_R, {"conn": f.conn})
            if pos.polarity == PRE and isinstance(f, Top):
                return self._under_display(seq, pos, TOPHAT, TOP_L)
            if pos.polarity == SUC and isinstance(f, Bot):
                return self._under_display(seq, pos, BOTCHECK, BOT_R)
        # (d) root shapes
        return self._root_cases(seq)

    def _lattice(self, rule: str, seq: Sequent) -> ProofTree | None:
        side = "SUCCEDENT" if rule == AND_L else "PRECEDENT"
        I, J = lattice_occurrences(seq, side, self.sig)
        return self._node(rule, seq, {"I": I, "J": J})

    def _indexed(self, rule: str, seq: Sequent, n: int) -> ProofTree | None:
        """f_R / g_L: the coordinate-free premises must all fail, then try j = 1..n."""
        fixed = expected_premises(rule, seq, {"j": 1}, self.sig)[:n]
        for p in fixed:
            if self.refute(p) is None:
                return None
        for j in range(1, n + 1):
            t = self._node(rule, seq, {"j": j})
            if t is not None:
                return t
        return None

    def _root_cases(self, seq: Sequent) -> ProofTree | None:
        sig = self.sig
        a, s = seq.ante, seq.succ
        if isinstance(s, Or):
            return self._lattice(OR_R, seq)
        if isinstance(a, And):
            return self._lattice(AND_L, seq)
        if s == BOTCHECK:
            if a == TOPHAT:
                return self._node(AX1, seq)
            if isinstance(a, Atom):
                return self._node(AX2, seq)
            if isinstance(a, App):
                return self._node(G_BOTCHECK, seq)
            if isinstance(a, SApp):
                return self._node(FHAT_BOTCHECK, seq)
        elif isinstance(s, Atom):
            if a == TOPHAT:
                return self._node(AX3, seq)
            if isinstance(a, Atom):
                return self._node(AX4, seq) if a != s else None
            if isinstance(a, App):
                return self._node(G_P, seq)
            if isinstance(a, SApp):
                return self._node(FHAT_P, seq)
        elif isinstance(s, App):
            if a == TOPHAT:
                return self._node(TOPHAT_F, seq)
            if isinstance(a, Atom):
                return self._node(P_F, seq)
            if isinstance(a, App):
                return self._node(G_F, seq)
            if isinstance(a, SApp):
                if a.conn != s.conn:
                    return self._node(F_R_NE, seq)
                return self._indexed(F_R, seq, len(a.args))
        elif isinstance(s, SApp):
            if a == TOPHAT:
                return self._node(TOPHAT_GCHECK, seq)
            if isinstance(a, Atom):
                return self._node(P_GCHECK, seq)
            if isinstance(a, SApp):
                return self._node(FHAT_GCHECK, seq)
            if isinstance(a, App):
                if a.conn != s.conn:
                    return self._node(G_L_NE, seq)
                return self._indexed(G_L, seq, len(s.args))
        raise RefuterError(f"no case applies to {show(seq)}")


def refute(seq: Sequent, sig: Signature) -> ProofTree | None:
    """A refutation of ``seq`` (read as an antisequent), or None if ``seq`` is derivable."""
    check_sequent(seq, sig)
    if not is_residual_free(seq, sig):
        raise RefuterError("refutation search expects a residual-free sequent")
    return _Refuter(sig).refute(seq.as_kind(Kind.REFUTABLE))


def refute_with_trace(seq: Sequent, sig: Signature) -> tuple[ProofTree | None, list]:
    """Like :func:`refute`, also returning ``(rule, conclusion, premises)`` for every closed step."""
    check_sequent(seq, sig)
    if not is_residual_free(seq, sig):
        raise RefuterError("refutation search expects a residual-free sequent")
    trace: list = []
    tree = _Refuter(sig, trace).refute(seq.as_kind(Kind.REFUTABLE))
    return tree, trace


def is_refutable(seq: Sequent, sig: Signature) -> bool:
    return refute(seq, sig) is not None
