"""
Pruning solved prompts and catching forgetting
==============================================

Prompts that are fully solved for several epochs in a row stop receiving
rollouts.  A fraction of them is re-checked every epoch, and any that
regressed go back into the active pool.
"""

import numpy as np

from lze.energy import pass_rate
from lze.pool import initialize_pool, apply_rollout_result
from lze.prune import PruneConfig, end_of_epoch_prune, replay_restore, replay_sample
from lze.rng import substream
from lze.sim import ToyPolicy, rollout

# %%
# Prompt 0 is always answered correctly; prompt 1 is a coin flip.
policy = ToyPolicy(np.array([[0.0, 40.0, 0.0], [0.0, 0.0, 0.0]]), np.array([1, 1]))
state = initialize_pool({0: 0.3, 1: 0.5})
cfg = PruneConfig(t_prune=2, rho=1.0)
g = substream(0)

for epoch in (1, 2):
    for pid in state.active:
        apply_rollout_result(state, pid, pass_rate(rollout(policy, pid, 8, g)), lam=0.9)
    moved = end_of_epoch_prune(state, cfg)
    print(f"epoch {epoch}: streak={state[0].solved_streak} pruned now={moved} active={state.active}")

# %%
# The policy forgets prompt 0.  Replay notices and restores it with a fresh
# streak; its EMA and momentum carry over untouched.
policy = policy.with_logits(0, np.array([0.0, -40.0, 0.0]))
sampled = replay_sample(state, cfg, substream(0, 1))
results = {pid: pass_rate(rollout(policy, pid, 8, g)) for pid in sampled}
print("replayed", results, "restored", replay_restore(state, results))
print(state[0])
