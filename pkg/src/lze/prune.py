"""Forward pruning with replay (epoch-level bookkeeping)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Mapping

import numpy as np

from .errors import InvalidParams, NotPruned
from .pool import Pool, PoolState, PromptId, check_probability
from .select import floor_fraction


@dataclass(frozen=True)
class PruneConfig:
    t_prune: int = 2
    rho: float = 0.25

    def __post_init__(self):
        if int(self.t_prune) != self.t_prune or self.t_prune < 1:
            raise InvalidParams(f"t_prune must be an integer >= 1, got {self.t_prune!r}")
        if not (0.0 <= self.rho <= 1.0):
            raise InvalidParams(f"rho must lie in [0, 1], got {self.rho!r}")


def update_streaks(state: PoolState) -> None:
    """Advance solved-streak counters of every active prompt.

    A prompt counts as solved when its latest rollout group was all-correct;
    a prompt never rolled out counts as unsolved.
    """
    for pid in state.active:
        rec = state.records[pid]
        if rec.last_pass_rate == 1.0:
            state.replace(pid, solved_streak=rec.solved_streak + 1)
        elif rec.solved_streak != 0:
            state.replace(pid, solved_streak=0)


def prune_candidates(state: PoolState, cfg: PruneConfig) -> List[PromptId]:
    return [pid for pid in state.active if state.records[pid].solved_streak >= cfg.t_prune]


def end_of_epoch_prune(state: PoolState, cfg: PruneConfig) -> List[PromptId]:
    update_streaks(state)
    moved = prune_candidates(state, cfg)
    for pid in moved:
        state.replace(pid, pool=Pool.PRUNED)
    return moved


def replay_sample(state: PoolState, cfg: PruneConfig, rng: np.random.Generator) -> List[PromptId]:
    """Uniformly sample ``floor(rho * |pruned|)`` pruned ids without replacement."""
    pruned = state.pruned
    k = floor_fraction(cfg.rho, len(pruned))
    if k == 0:
        return []
    picks = rng.choice(len(pruned), size=k, replace=False)
    return sorted(pruned[i] for i in picks)


def replay_restore(state: PoolState, results: Mapping[PromptId, float]) -> List[PromptId]:
    """Move replayed prompts that are no longer fully solved back to Active.

    Restored prompts keep their EMA and momentum; only the streak resets.
    Prompts still at pass rate 1 stay pruned with their streak untouched.
    """
    for pid, p in results.items():
        if state[pid].pool is not Pool.PRUNED:
            raise NotPruned(f"prompt {pid} is not in the prune pool")
        check_probability(p)
    restored = []
    for pid in sorted(results):
        if results[pid] < 1.0:
            state.replace(pid, pool=Pool.ACTIVE, solved_streak=0)
            restored.append(pid)
    return restored
