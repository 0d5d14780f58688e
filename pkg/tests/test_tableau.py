import json

import pytest
from hypothesis import given, settings

from lerefute import bundled_signature, parse_sequent, show
from lerefute.corpus import enumerate_sequents
from lerefute.prover import is_provable
from lerefute.tableau import (
    RESIDUATION,
    BranchStatus,
    BudgetExceeded,
    TableauError,
    build_tableau,
    classify_branch,
    decide,
    expand,
    open_shape,
    tableau_to_dot,
    tableau_to_json,
    tableau_to_text,
)

from strategies import formula_sequents

UNARY = bundled_signature("unary-fg")
MIXED = bundled_signature("mixed-tonicity")


def seq(text, sig=UNARY):
    return parse_sequent(text, sig)


def _instances(text):
    return {(i.rule, tuple(tuple(show(x) for x in alt) for alt in i.alternatives)) for i in expand(seq(text), UNARY)}


def test_expand_examples():
    assert expand(seq("p |- q"), UNARY) == []
    assert _instances("^f(p) |- ~B") == {
        ("f̂⊥̌", (("p |- ~B",),)),
        (f"{RESIDUATION}:F_RES(f,1)", (("p |- ~f#1(~B)",),)),
    }
    assert ("f_R", (("p |- ~B",), ("p |- p",))) in _instances("^f(p) |- f(p)")


def test_branch_classification():
    assert classify_branch([seq("p |- q")], UNARY) is BranchStatus.OPEN
    assert classify_branch([seq("p |- p")], UNARY) is BranchStatus.CLOSED
    assert classify_branch([seq("^T |- f(p)")], UNARY) is BranchStatus.OPEN
    with pytest.raises(TableauError):
        classify_branch([seq("f(p) |- q")], UNARY)


@pytest.mark.parametrize(
    "text, shaped",
    [("^T |- ~B", True), ("p |- ~B", True), ("^T |- q", True), ("g(p) |- ~B", True), ("g(p) |- q", True),
     ("g(p) |- f(q)", True), ("p |- f(q)", True), ("p |- p", False), ("f(p) |- q", False), ("p |- g(q)", False)],
)
def test_open_shapes(text, shaped):
    assert open_shape(seq(text), UNARY) is shaped


def test_open_tree_for_box_over_disjunction():
    root = build_tableau(seq("g(p | q) |- g(p) | g(q)"), UNARY)
    leaves = root.leaves()
    assert all(leaf.status is BranchStatus.OPEN for leaf in leaves)
    assert {show(leaf.sequent) for leaf in leaves} == {"q |- p", "^T |- p", "q |- q", "^T |- q"}
    # p |- q shows up on the open branches, above the leaves
    assert any(show(n.sequent) == "p |- q" for n in root.walk())
    assert decide(seq("g(p | q) |- g(p) | g(q)"), UNARY).status == "INVALID"


@pytest.mark.parametrize("text", ["f(p) |- f(p)", "bot |- p", "g(p) & g(q) |- g(p & q)", "p |- p | q"])
def test_valid_examples(text):
    v = decide(seq(text), UNARY)
    assert v.valid
    assert any(leaf.status is BranchStatus.CLOSED for leaf in v.tree.leaves())


def test_no_branch_revisits():
    root = build_tableau(seq("g(p | q) |- g(p) | g(q)"), UNARY)
    for branch in root.branches():
        seqs = [n.sequent for n in branch]
        assert len(seqs) == len(set(seqs))


def test_budget_reported_distinctly():
    with pytest.raises(BudgetExceeded):
        decide(seq("f(g(p | q, q), p & q) |- g(f(p, q), p | q)", MIXED), MIXED, budget=3, prune=False)


def test_residual_input_rejected():
    with pytest.raises(TableauError):
        decide(seq("p |- ~f#1(q)"), UNARY)


def test_exports():
    root = build_tableau(seq("g(p | q) |- g(p) | g(q)"), UNARY)
    doc = json.loads(tableau_to_json(root))
    assert doc["version"] == 1 and doc["tableau"]["sequent"] == "g(p | q) |- g(p) | g(q)"
    dot = tableau_to_dot(root)
    assert dot.count("fontcolor=red") == 4 and "color=green" not in dot
    assert tableau_to_text(root).splitlines()[0] == "g(p | q) |- g(p) | g(q)"


@pytest.mark.parametrize("sig", [UNARY, MIXED], ids=["unary", "mixed"])
def test_agrees_with_prover_small_corpus(sig):
    for s in enumerate_sequents(sig, max_depth=1, max_connectives=2):
        assert decide(s, sig).valid == is_provable(s, sig), show(s)


@settings(max_examples=40, deadline=None)
@given(formula_sequents(MIXED, 1))
def test_verdict_independent_of_strategy(s):
    verdicts = {
        decide(s, MIXED, prune=prune, split_first=split_first, budget=100_000).status
        for prune in (True, False)
        for split_first in (True, False)
    }
    assert verdicts == {"VALID" if is_provable(s, MIXED) else "INVALID"}


@settings(max_examples=40, deadline=None)
@given(formula_sequents(MIXED, 2))
def test_full_tree_is_terminated_and_classified(s):
    root = build_tableau(s, MIXED)
    for leaf in root.leaves():
        assert leaf.status in (BranchStatus.OPEN, BranchStatus.CLOSED)
    for branch in root.branches():
        seqs = [n.sequent for n in branch]
        assert len(seqs) == len(set(seqs))
