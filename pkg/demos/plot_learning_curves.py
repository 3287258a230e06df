"""
Learning curves on the simulated prompt pool
============================================

A pool of 64 prompts with a softmax policy per prompt.  Three strategies
spend the same rollouts but differ in which groups get a gradient step:
energy-ranked Top-K, a random K, or every group.
"""

import numpy as np

from lze.sim import SelectorParams, SimEnvConfig, Strategy, run_learning_experiment

env = SimEnvConfig(seed=0)
params = SelectorParams(epochs=120, gumbel_scale=0.1)

# %%
# Optimized prompt groups needed to reach a mean true pass rate of 0.9.
curves = {s: run_learning_experiment(env, s, params) for s in Strategy}
for s, c in curves.items():
    print(f"{s.value:<8} samples to 0.9: {c.samples_to(0.9)}  final mean: {c.mean_pass_rate[-1]:.3f}")

# %%
# The first few points of each curve, as (step, mean pass rate).
for s, c in curves.items():
    print(s.value, [(k, round(v, 3)) for k, v in c.as_pairs()[:6]])

# %%
# Ablations: turn off one factor of the score at a time.
for flag in ("use_difficulty", "use_uncertainty", "use_momentum"):
    c = run_learning_experiment(env, Strategy.LZE, SelectorParams(epochs=120, gumbel_scale=0.1, **{flag: False}))
    print(f"without {flag[4:]:<12} samples to 0.9: {c.samples_to(0.9)}")
