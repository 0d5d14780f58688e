"""Run the three engines side by side over a small exhaustive corpus and check the models agree."""

import time

from lerefute import bundled_signature
from lerefute.corpus import corpus_size, enumerate_sequents
from lerefute.prover import prove
from lerefute.refuter import refute
from lerefute.semantics import model_families
from lerefute.tableau import decide

sig = bundled_signature("mixed-tonicity")
depth, bound = 1, 3
print("corpus size:", corpus_size(sig, depth, bound))

# %% Exactly one of prove and refute succeeds; the tableau agrees with the prover.
t = time.time()
rows = [(s, prove(s, sig) is not None, refute(s, sig) is not None, decide(s, sig).valid)
        for s in enumerate_sequents(sig, depth, bound)]
print(f"checked {len(rows)} sequents in {time.time() - t:.1f}s")
print("prove xor refute:", all(p != r for _, p, r, _ in rows))
print("tableau = prove: ", all(p == d for _, p, _, d in rows))

# %% Derivable sequents hold in every model on lattices of at most three elements.
fams = model_families(sig, 3)
proved = [s for s, p, _, _ in rows if p]
print(f"{sum(f.size for f in fams)} models; {len(proved)} proved sequents;",
      "all true:", all(f.holds(s).all() for s in proved for f in fams))
