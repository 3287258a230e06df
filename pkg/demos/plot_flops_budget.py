"""
Where the compute goes
======================

Inference costs 4 FLOPs per parameter per token and optimization 6.
Keeping only 40% of groups for the update saves 36% of the total; pruning
solved prompts cuts into the inference share on top of that.
"""

from lze.flops import CostModel, baseline_flops, lze_flops, savings_ratio
from lze.sim import SelectorParams, SimEnvConfig, Strategy, run_learning_experiment

model = CostModel(params=1.5e9, tokens_per_sample=512)

# %%
# Closed-form comparison for 10 epochs over 7,500 prompts with 8 rollouts each.
base = baseline_flops(model, 10, 7500, 8)
ours = lze_flops(model, 0.4, 10, 7500, 8)
print(f"baseline {base:.3e}  selected {ours:.3e}  saved {savings_ratio(model, 0.4):.0%}")
for kappa in (0.1, 0.25, 0.4, 0.7, 1.0):
    print(f"kappa={kappa:<5} saved {savings_ratio(model, kappa):.1%}")

# %%
# The running ledger from a simulated run, with and without pruning.  Easy
# prompts get solved fast here, so pruning has something to remove.
env = SimEnvConfig(num_prompts=64, p_min=0.5, p_max=0.99, seed=1)
for prune in (False, True):
    c = run_learning_experiment(env, Strategy.LZE, SelectorParams(epochs=40, prune=prune))
    led = c.ledger
    print(f"prune={prune!s:<5} inference={led.inference_flops:.0f} optimization={led.optimization_flops:.0f} "
          f"replay={led.replay_flops:.0f} pruned at end={c.pruned_final}")
