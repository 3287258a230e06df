"""
Gradient variance peaks at a 50% pass rate
==========================================

With group-relative advantages the per-prompt gradient variance scales as
p(1 - p) G / n.  The Monte-Carlo oracle below checks that, and a softmax
policy shows how far real score vectors sit from the homogeneous case.
"""

import numpy as np

from lze.rng import substream
from lze.sim import ToyPolicy, variance_oracle, variance_oracle_softmax

# %%
# Empirical trace variance against the closed form, group size 8.
for p in (0.1, 0.3, 0.5, 0.7, 0.9):
    emp, pred = variance_oracle(p, 8, 200_000, substream(3, int(p * 10)))
    print(f"p={p}  empirical={emp:.5f}  predicted={pred:.5f}")

# %%
# On a real softmax policy the score norm differs between correct and wrong
# answers, so the prediction with a single G is only approximate.  The exact
# decomposition still matches.
policy = ToyPolicy(np.array([[1.0, 0.0, -0.5, 0.3]]), np.array([0]))
print(variance_oracle_softmax(policy, 0, 8, 200_000, substream(4)))
