"""Every residual-free sequent is either derivable or refutable. Here are both outcomes."""

from lerefute import bundled_signature, parse_sequent
from lerefute.prover import check_derivation, prove
from lerefute.refuter import check_refutation, refute
from lerefute.trees import tree_to_text

sig = bundled_signature("unary-fg")

# %% A box does not distribute over a disjunction.
seq = parse_sequent("g(p | q) |- g(p) | g(q)", sig)
print("prove:", prove(seq, sig))
tree = refute(seq, sig)
print(tree_to_text(tree))
print("checker accepts:", check_refutation(tree, sig))
print("rules used:", dict(tree.rules()))

# %% It does distribute over a conjunction, one way round.
seq = parse_sequent("g(p) & g(q) |- g(p & q)", sig)
print()
print("refute:", refute(seq, sig))
proof = prove(seq, sig)
print(tree_to_text(proof))
print("checker accepts:", check_derivation(proof, sig))

# %% Display steps are part of the trees; they can be hidden when counting.
print("with display steps:", proof.size(), "without:", sum(proof.rules().values()))
