"""Display moves rewrite a sequent so any chosen part stands alone on one side."""

from lerefute import bundled_signature, parse_sequent, show
from lerefute.display import apply_move, display_at, display_neighbors, equivalence_class
from lerefute.syntax import positions, structure_edges, subterm

sig = bundled_signature("mixed-tonicity")
seq = parse_sequent("^f(p, ~g(q, r)) |- s", sig)

# %% One member per edge of the generation tree, the turnstile included.
cls = equivalence_class(seq, sig)
print(f"{len(cls)} members, {structure_edges(seq)} edges")
for s in cls:
    print("  ", show(s))

# %% Each move has an inverse.
for move, nxt in display_neighbors(seq, sig):
    print(f"\n{move}: {show(nxt)}")
    print(f"{move.inverse()}: {show(apply_move(nxt, move.inverse(), sig))}")

# %% Bring every substructure to the front.
print()
for at in positions(seq, sig):
    print(f"{show(subterm(seq, at)):>16}  ->  {show(display_at(seq, at, sig))}")
