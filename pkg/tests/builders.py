"""Hand-built refutation trees used by several test modules."""

from lerefute import Kind, parse_sequent
from lerefute.display import display_neighbors
from lerefute.rules import AND_L, AND_R1, AND_R2, AX3, AX4, F_L, G_L, G_R, P_GCHECK, TOPHAT_F
from lerefute.trees import ProofTree


def anti(text, sig):
    return parse_sequent(text.replace("-|/", "|-"), sig).as_kind(Kind.REFUTABLE)


def leaf(text, rule, sig, **aux):
    return ProofTree(anti(text, sig), rule, (), aux)


def node(text, rule, premises, sig, **aux):
    return ProofTree(anti(text, sig), rule, tuple(premises), aux)


def display_node(text, premise, sig):
    """A display step from ``premise`` to the sequent ``text``."""
    target = anti(text, sig)
    for move, nxt in display_neighbors(premise.conclusion, sig):
        if nxt == target:
            return ProofTree(target, move.rule, (premise,), {"move": move})
    raise ValueError(f"{text} is not one display move away")


def branching_and_l_tree(sig):
    """Refutes g(p) & g(q) |- g(p & q) through an and-left step with a branching succedent."""
    left = node(
        "g(p) -|/ ~g(p & q)",
        G_L,
        [node("^T -|/ p & q", AND_R2, [leaf("^T -|/ q", AX3, sig)], sig),
         node("p -|/ p & q", AND_R2, [leaf("p -|/ q", AX4, sig)], sig)],
        sig,
        j=1,
    )
    right = node(
        "g(q) -|/ ~g(p & q)",
        G_L,
        [node("^T -|/ p & q", AND_R1, [leaf("^T -|/ p", AX3, sig)], sig),
         node("q -|/ p & q", AND_R1, [leaf("q -|/ p", AX4, sig)], sig)],
        sig,
        j=1,
    )
    return node(
        "g(p) & g(q) -|/ g(p & q)",
        G_R,
        [node("g(p) & g(q) -|/ ~g(p & q)", AND_L, [left, right], sig)],
        sig,
    )


def residual_structural_tree(sig):
    """Refutes f(p) |- f(p) through a structural step whose conclusion holds a residual."""
    top = leaf("^T -|/ f(p)", TOPHAT_F, sig)
    res = node("p -|/ ~f#1(f(p))", P_GCHECK, [top], sig)
    return node("f(p) -|/ f(p)", F_L, [display_node("^f(p) -|/ f(p)", res, sig)], sig)
