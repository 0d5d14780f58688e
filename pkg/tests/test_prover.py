import json
from dataclasses import replace

import pytest
from hypothesis import given, settings

from lerefute import bundled_signature, parse_sequent
from lerefute.corpus import enumerate_sequents
from lerefute.prover import ProverError, check_derivation, is_provable, prove
from lerefute.rules import DISPLAY, ID
from lerefute.syntax import complexity
from lerefute.trees import ProofTree, tree_to_dot, tree_to_json, tree_to_text

from strategies import formula_sequents

UNARY = bundled_signature("unary-fg")
MIXED = bundled_signature("mixed-tonicity")


def seq(text, sig=UNARY):
    return parse_sequent(text, sig)


def test_identity():
    t = prove(seq("p |- p"), UNARY)
    assert t.rule == ID
    assert check_derivation(t, UNARY)


@pytest.mark.parametrize(
    "text",
    ["g(p) & g(q) |- g(p & q)", "f(p) |- f(p)", "f(p | q) |- f(p) | f(q)", "bot |- p", "p |- top", "p & q |- q | r"],
)
def test_derivable(text):
    t = prove(seq(text), UNARY)
    assert t is not None
    assert check_derivation(t, UNARY)


@pytest.mark.parametrize("text", ["g(p | q) |- g(p) | g(q)", "p |- q", "f(p) & f(q) |- f(p & q)", "top |- bot"])
def test_underivable(text):
    assert prove(seq(text), UNARY) is None


def test_mutated_conclusion_rejected():
    t = prove(seq("p |- p"), UNARY)
    assert not check_derivation(replace(t, conclusion=seq("p |- q")), UNARY)


def test_cut_rejected():
    a = prove(seq("p |- p"), UNARY)
    cut = ProofTree(seq("p |- p"), "Cut", (a, a))
    assert not check_derivation(cut, UNARY)


def test_residual_input_rejected():
    with pytest.raises(ProverError):
        prove(seq("p |- ~f#1(q)"), UNARY)


def test_excluded_rule_is_not_used():
    assert prove(seq("p |- p"), UNARY, exclude={ID}) is None


def test_small_corpus_trees_check():
    """Every proof found on a small exhaustive corpus passes the checker."""
    found = 0
    for s in enumerate_sequents(MIXED, max_depth=1, max_connectives=2):
        t = prove(s, MIXED)
        if t is not None:
            found += 1
            assert check_derivation(t, MIXED)
    assert found > 0


@settings(max_examples=60, deadline=None)
@given(formula_sequents(MIXED, 2))
def test_display_steps_keep_complexity(s):
    t = prove(s, MIXED)
    if t is None:
        return
    assert check_derivation(t, MIXED)
    for node in t.walk():
        if node.rule in DISPLAY:
            assert complexity(node.premises[0].conclusion) == complexity(node.conclusion)


def test_exports():
    t = prove(seq("g(p) & g(q) |- g(p & q)"), UNARY)
    doc = json.loads(tree_to_json(t))
    assert doc["version"] == 1
    assert tree_to_dot(t).startswith("digraph")
    assert "g(p) & g(q) |- g(p & q)" in tree_to_text(t)
    assert is_provable(seq("g(p) & g(q) |- g(p & q)"), UNARY)
