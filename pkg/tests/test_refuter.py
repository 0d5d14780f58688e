from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import given, settings

from lerefute import bundled_signature, parse_sequent
from lerefute.corpus import enumerate_sequents
from lerefute.prover import is_provable
from lerefute.refuter import RefuterError, check_refutation, refutation_errors, refute, refute_with_trace
from lerefute.rules import AX4, DISPLAY
from lerefute.syntax import Kind, complexity

from builders import branching_and_l_tree, leaf, residual_structural_tree
from strategies import formula_sequents

UNARY = bundled_signature("unary-fg")
MIXED = bundled_signature("mixed-tonicity")
LAMBEK = bundled_signature("lambek")


def seq(text, sig=UNARY):
    return parse_sequent(text, sig)


def test_distinct_atoms_use_ax4():
    t = refute(seq("p |- q"), UNARY)
    assert t.rule == AX4
    assert t.conclusion.kind is Kind.REFUTABLE


def test_disjunction_under_box():
    t = refute(seq("g(p | q) |- g(p) | g(q)"), UNARY)
    assert check_refutation(t, UNARY)
    assert t.rules() == Counter({"∨_R": 1, "g_R": 2, "g_L": 2, "∨_L1": 1, "∨_L2": 1, "Ax3": 2, "Ax4": 2})


@pytest.mark.parametrize("text", ["f(p) |- f(p)", "g(p) & g(q) |- g(p & q)", "p |- p", "bot |- q"])
def test_derivable_is_not_refuted(text):
    assert refute(seq(text), UNARY) is None


def test_branching_and_left_rejected():
    errs = refutation_errors(branching_and_l_tree(UNARY), UNARY)
    assert errs == ["∧_L: endsequent g(p) & g(q) -|/ ~g(p & q) is branching"]


def test_residual_in_structural_endsequent_rejected():
    errs = refutation_errors(residual_structural_tree(UNARY), UNARY)
    assert errs == ["pǧ: endsequent p -|/ ~f#1(f(p)) contains residuals"]


def test_ax4_needs_distinct_atoms():
    assert not check_refutation(leaf("p -|/ p", AX4, UNARY), UNARY)
    assert check_refutation(leaf("p -|/ q", AX4, UNARY), UNARY)


def test_provable_kind_rejected():
    t = refute(seq("p |- q"), UNARY)
    assert not check_refutation(replace(t, conclusion=seq("p |- q")), UNARY)


def test_residual_input_rejected():
    with pytest.raises(RefuterError):
        refute(seq("p |- ~f#1(q)"), UNARY)


def test_accepts_either_turnstile():
    assert refute(seq("p -|/ q"), UNARY) == refute(seq("p |- q"), UNARY)


@pytest.mark.parametrize("sig", [UNARY, MIXED, LAMBEK], ids=["unary", "mixed", "lambek"])
def test_exactly_one_engine_succeeds_small_corpus(sig):
    for s in enumerate_sequents(sig, max_depth=1, max_connectives=2):
        t = refute(s, sig)
        assert (t is None) == is_provable(s, sig)
        if t is not None:
            assert check_refutation(t, sig)


@settings(max_examples=80, deadline=None)
@given(formula_sequents(MIXED, 2))
def test_measure_decreases(s):
    tree, trace = refute_with_trace(s, MIXED)
    if tree is None:
        return
    for node in tree.walk():
        for p in node.premises:
            if node.rule in DISPLAY:
                assert complexity(p.conclusion) == complexity(node.conclusion)
            else:
                assert complexity(p.conclusion) < complexity(node.conclusion), node.rule
    assert all(rule for rule, _, _ in trace)
