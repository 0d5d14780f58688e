"""The tableau procedure: an open tree for an invalid sequent, a closed branch for a valid one."""

from lerefute import bundled_signature, parse_sequent
from lerefute.tableau import BranchStatus, build_tableau, decide, tableau_to_dot, tableau_to_text

sig = bundled_signature("unary-fg")

# %% Fully terminated tree. Indentation marks a new branch.
seq = parse_sequent("g(p | q) |- g(p) | g(q)", sig)
root = build_tableau(seq, sig)
print(tableau_to_text(root))
print("open leaves:", sum(leaf.status is BranchStatus.OPEN for leaf in root.leaves()), "of", len(root.leaves()))

# %% decide stops early by default; the verdict is the same.
v = decide(seq, sig)
print("\npruned:", v.status, v.nodes, "node(s)")
print("full:  ", decide(seq, sig, prune=False).status)

# %% A valid sequent: one closed branch is enough.
v = decide(parse_sequent("f(p) |- f(p)", sig), sig, prune=False)
print("\n" + tableau_to_text(v.tree))
print(v.status)

# %% Graphviz source, open leaves in red.
print("\n" + tableau_to_dot(root)[:200] + " ...")
