"""
Scoring prompts by learning potential
=====================================

Each prompt gets a score from three quantities that are cheap to track:
how hard it looked at the start, how uncertain its current pass rate is,
and whether that pass rate is moving up or down.
"""

import numpy as np

from lze.energy import EnergyInputs, energy_score, energy_scores, uncertainty
from lze.pool import apply_rollout_result, initialize_pool

# %%
# The uncertainty factor is the Bernoulli variance rescaled to peak at 1.
# Prompts that are always solved or never solved score zero.
for p in np.linspace(0, 1, 11):
    print(f"p={p:.1f}  4p(1-p)={uncertainty(p):.2f}")

# %%
# A worked example: 2 of 5 rollouts correct at initialization, then 2 of 4
# at the next step.  The EMA starts at the initial pass rate, so the momentum
# is 0.5 - 0.4 = 0.1.
state = initialize_pool({0: 0.4})
rec = apply_rollout_result(state, 0, 0.5, lam=0.9)
print("difficulty", rec.d0, "momentum", rec.momentum, "ema", rec.ema)
print("score", energy_score(EnergyInputs(rec.d0, 0.5, rec.momentum, alpha=0.3)))

# %%
# Vectorized scoring over a pool, with and without each factor.  Dropping the
# uncertainty factor lets solved prompts compete for updates again.
d0 = np.array([0.9, 0.5, 0.1, 0.6])
p = np.array([0.0, 0.5, 1.0, 0.75])
m = np.array([0.0, 0.1, 0.0, -0.2])
print("full          ", energy_scores(d0, p, m, 0.3))
print("no uncertainty", energy_scores(d0, p, m, 0.3, uncertainty=False))
print("no momentum   ", energy_scores(d0, p, m, 0.3, momentum=False))
