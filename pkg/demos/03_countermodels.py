"""Finite lattice models: small lattices, normal operations, residuals and countermodels."""

from lerefute import bundled_signature, parse_sequent
from lerefute.semantics import enumerate_lattices, enumerate_normal_ops, find_countermodel, residual_table
from lerefute.signature import order_type

sig = bundled_signature("unary-fg")

# %% Lattices up to five elements, one per isomorphism class.
lats = enumerate_lattices(5)
for lat in lats:
    print(lat.name, "size", lat.size, "distributive" if lat.is_distributive() else "not distributive")

# %% Unary join-preserving maps on the four-element Boolean lattice, and their residuals.
diamond = lats[3]
ops = enumerate_normal_ops(diamond, order_type("1"), "F", cap=None)
print(f"\n{len(ops)} normal unary operations on {diamond.name}")
for tab in ops[:4]:
    print("f =", tab.tolist(), " residual =", residual_table(diamond, sig["f"], tab, 0).tolist())

# %% Countermodels for three invalid sequents.
for text in ["p |- q", "g(p | q) |- g(p) | g(q)", "f(p) & f(q) |- f(p & q)"]:
    cm = find_countermodel(parse_sequent(text, sig), sig)
    exp = cm.expansion
    print(f"\n{text}\n  lattice {exp.lattice.name or exp.lattice.size}, valuation {cm.valuation}")
    for name, tab in exp.ops.items():
        print(f"  {name} = {tab.tolist()}")

# %% A derivable sequent has no countermodel.
print("\nf(p | q) |- f(p) | f(q):", find_countermodel(parse_sequent("f(p | q) |- f(p) | f(q)", sig), sig))
