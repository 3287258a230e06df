"""
Hard Top-K versus Gumbel-perturbed Top-K
========================================

Selection keeps the K highest-scoring prompts.  Adding Gumbel noise turns
the hard cut into sampling without replacement, so lower-scoring prompts
still get picked now and then.  The noise scale sets how often.
"""

import numpy as np

from lze.rng import substream
from lze.select import select_top_k

energies = [0.1, 0.35, 0.6, 0.85, 1.1]
snapshot = list(enumerate(energies))

# %%
# With zero noise the decision is deterministic.  Ties go to the smaller id.
print(select_top_k(snapshot, kappa=0.4, gumbel_scale=0.0, rng=substream(0)).selected)
print(select_top_k([(3, 0.5), (1, 0.5), (2, 0.2)], kappa=0.34, gumbel_scale=0.0, rng=substream(0)).selected)

# %%
# Selection frequency for each prompt at a few noise scales.  At scale 1 the
# noise is as large as the whole spread of energies, so the ranking is only
# a mild preference.
trials = 5000
for scale in (0.0, 0.1, 0.25, 1.0):
    counts = np.zeros(len(energies))
    for t in range(trials):
        for i in select_top_k(snapshot, 0.4, scale, substream(1, t)).selected:
            counts[i] += 1
    print(f"scale={scale:<5} frequencies={np.round(counts / trials, 3)}")
