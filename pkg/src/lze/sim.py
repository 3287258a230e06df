"""Desk-scale training environment.

Each synthetic prompt is answered by its own softmax over ``M`` candidate
answers, exactly one of which is correct.  That is the smallest policy for
which the pass rate, its gradient, the clipped surrogate and score-function
norms all have closed forms, so the theory can be checked against exact
values rather than estimates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, List, NamedTuple, Optional, Sequence

import numpy as np

from . import rng as rngmod
from .energy import RolloutGroup, energy_scores
from .errors import EmptyGroup, InvalidInputs, InvalidParams, InvalidProbability, MismatchedGroup, UnknownPrompt
from .flops import CostModel, FlopsLedger, ledger_record, budget_report, INIT, OPTIMIZE, REPLAY, ROLLOUT
from .pool import PoolState, PromptId, apply_rollout_result, initialize_pool
from .prune import PruneConfig, end_of_epoch_prune, replay_restore, replay_sample
from .select import SelectionDecision, select_top_k, top_k_size

# ---------------------------------------------------------------------------
# policy


@dataclass(frozen=True)
class SimEnvConfig:
    num_prompts: int = 64
    answers_per_prompt: int = 16
    n_rollouts: int = 8
    # initial true pass rates: p_min + (p_max - p_min) * Beta(a, b)
    difficulty_a: float = 0.5
    difficulty_b: float = 0.5
    p_min: float = 0.02
    p_max: float = 0.98
    logit_noise: float = 0.5
    learn_rate: float = 2.0
    clip_epsilon: float = 0.2
    inner_epochs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.num_prompts < 1:
            raise InvalidParams("num_prompts must be >= 1")
        if self.answers_per_prompt < 2:
            raise InvalidParams("answers_per_prompt must be >= 2")
        if self.n_rollouts < 1:
            raise InvalidParams("n_rollouts must be >= 1")
        if not self.clip_epsilon > 0:
            raise InvalidParams("clip_epsilon must be > 0")
        if self.learn_rate < 0:
            raise InvalidParams("learn_rate must be >= 0")
        if self.inner_epochs < 1:
            raise InvalidParams("inner_epochs must be >= 1")
        if not (0.0 <= self.p_min <= self.p_max <= 1.0):
            raise InvalidParams("need 0 <= p_min <= p_max <= 1")
        if not (self.difficulty_a > 0 and self.difficulty_b > 0):
            raise InvalidParams("difficulty_a and difficulty_b must be > 0")


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    z = np.exp(logits - logits.max(axis=-1, keepdims=True))
    return z / z.sum(axis=-1, keepdims=True)


@dataclass(frozen=True)
class ToyPolicy:
    """Row ``i`` of ``logits`` is prompt i's answer distribution (ids are dense)."""

    logits: np.ndarray  # (N, M)
    correct_index: np.ndarray  # (N,)

    def __post_init__(self):
        logits = np.array(self.logits, dtype=np.float64)
        correct = np.array(self.correct_index, dtype=np.int64)
        if logits.ndim != 2 or logits.shape[1] < 2:
            raise InvalidInputs("logits must have shape (N, M) with M >= 2")
        if correct.shape != (logits.shape[0],) or correct.min() < 0 or correct.max() >= logits.shape[1]:
            raise InvalidInputs("correct_index must hold one index in [0, M) per prompt")
        logits.flags.writeable = False
        correct.flags.writeable = False
        object.__setattr__(self, "logits", logits)
        object.__setattr__(self, "correct_index", correct)

    @property
    def num_prompts(self) -> int:
        return self.logits.shape[0]

    @property
    def num_answers(self) -> int:
        return self.logits.shape[1]

    def _row(self, pid):
        if not (0 <= pid < self.num_prompts):
            raise UnknownPrompt(f"unknown prompt id {pid}")
        return int(pid)

    def probs(self, pid: Optional[PromptId] = None) -> np.ndarray:
        if pid is None:
            return softmax(self.logits)
        return softmax(self.logits[self._row(pid)])

    def true_pass_rates(self) -> np.ndarray:
        pi = softmax(self.logits)
        return pi[np.arange(self.num_prompts), self.correct_index]

    def true_pass_rate(self, pid: PromptId) -> float:
        i = self._row(pid)
        return float(softmax(self.logits[i])[self.correct_index[i]])

    def pass_rate_grad(self, pid: PromptId) -> np.ndarray:
        """Analytic gradient of the pass rate w.r.t. the prompt's logits: ``p (e_c - pi)``."""
        i = self._row(pid)
        pi = softmax(self.logits[i])
        c = self.correct_index[i]
        g = -pi[c] * pi
        g[c] += pi[c]
        return g

    def pass_rate_hessian(self, pid: PromptId) -> np.ndarray:
        """``p [(e_c - pi)(e_c - pi)^T - diag(pi) + pi pi^T]``."""
        i = self._row(pid)
        pi = softmax(self.logits[i])
        c = self.correct_index[i]
        u = -pi.copy()
        u[c] += 1.0
        return pi[c] * (np.outer(u, u) - np.diag(pi) + np.outer(pi, pi))

    def with_logits(self, pid: PromptId, row: np.ndarray) -> "ToyPolicy":
        logits = self.logits.copy()
        logits[self._row(pid)] = row
        return ToyPolicy(logits, self.correct_index)


def make_policy(env: SimEnvConfig) -> ToyPolicy:
    """Draw a policy whose initial true pass rates follow the configured spread.

    Distractor logits are Gaussian; the correct logit is then solved for so the
    prompt's pass rate hits its drawn target exactly.
    """
    g = rngmod.substream(env.seed, rngmod.ENV)
    n, m = env.num_prompts, env.answers_per_prompt
    correct = g.integers(m, size=n)
    logits = g.normal(0.0, env.logit_noise, size=(n, m))
    target = env.p_min + (env.p_max - env.p_min) * g.beta(env.difficulty_a, env.difficulty_b, size=n)
    rows = np.arange(n)
    mask = np.ones((n, m), dtype=bool)
    mask[rows, correct] = False
    others = np.log(np.where(mask, np.exp(logits), 0.0).sum(axis=1))
    with np.errstate(divide="ignore"):
        log_odds = np.log(target) - np.log1p(-target)
    # +-60 keeps logits finite while p rounds to exactly 0 or 1 for M < 1e20
    logits[rows, correct] = np.clip(log_odds, -60.0, 60.0) + others
    return ToyPolicy(logits, correct)


# ---------------------------------------------------------------------------
# rollouts and the GRPO update


@dataclass(frozen=True)
class SampledGroup(RolloutGroup):
    """A rollout group that also remembers which answers were sampled."""

    answers: tuple = ()


def _sample_answers(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF sampling; ``probs`` (K, M), ``u`` (K, n) -> answers (K, n)."""
    cdf = np.cumsum(probs, axis=-1)
    cdf[..., -1] = 1.0
    return (u[..., :, None] >= cdf[..., None, :]).sum(axis=-1)


def rollout(policy: ToyPolicy, pid: PromptId, n: int, rng: np.random.Generator) -> SampledGroup:
    """Draw ``n`` answers; reward 1 iff the answer is the correct one."""
    if n < 1:
        raise InvalidParams("n must be >= 1")
    probs = policy.probs(pid)
    answers = _sample_answers(probs[None, :], rng.random(n)[None, :])[0]
    rewards = (answers == policy.correct_index[pid]).astype(int)
    return SampledGroup(prompt=int(pid), rewards=tuple(rewards.tolist()), answers=tuple(answers.tolist()))


def group_advantages(group: RolloutGroup) -> np.ndarray:
    """Reward minus the group's pass rate; sums to zero."""
    if group.n == 0:
        raise EmptyGroup(f"prompt {group.prompt}: rollout group is empty")
    r = np.asarray(group.rewards, dtype=np.float64)
    return r - r.mean()


class UpdateInfo(NamedTuple):
    clipped_fraction: float
    max_ratio_deviation: float


def grpo_update(logits, rows, answers, rewards, learn_rate, clip_epsilon, inner_epochs=1):
    """Clipped-surrogate ascent on ``rows`` of ``logits`` (returns a new array).

    Each prompt's objective is the mean over its n rollouts of
    ``min(ratio * A, clip(ratio, 1-eps, 1+eps) * A)`` with ``A = r - mean(r)``.
    Prompts have disjoint parameters, so no cross-prompt averaging is applied.
    """
    logits = np.array(logits, dtype=np.float64)
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return logits, UpdateInfo(0.0, 0.0)
    answers = np.asarray(answers, dtype=np.int64)
    rewards = np.asarray(rewards, dtype=np.float64)
    k, n = answers.shape
    adv = rewards - rewards.mean(axis=1, keepdims=True)
    theta = logits[rows]
    idx = np.arange(k)[:, None]
    old_logp = log_softmax(theta)[idx, answers]
    clipped_total = 0
    max_dev = 0.0
    for _ in range(inner_epochs):
        logp_all = log_softmax(theta)
        ratio = np.exp(logp_all[idx, answers] - old_logp)
        max_dev = max(max_dev, float(np.abs(ratio - 1.0).max()))
        clipped = ((adv > 0) & (ratio > 1.0 + clip_epsilon)) | ((adv < 0) & (ratio < 1.0 - clip_epsilon))
        clipped_total += int(clipped.sum())
        coef = np.where(clipped, 0.0, adv * ratio) / n
        grad = np.zeros_like(theta)
        np.add.at(grad, (np.broadcast_to(idx, answers.shape), answers), coef)
        grad -= coef.sum(axis=1, keepdims=True) * np.exp(logp_all)
        theta = theta + learn_rate * grad
    logits[rows] = theta
    return logits, UpdateInfo(clipped_total / (k * n * inner_epochs), max_dev)


def grpo_step(
    policy: ToyPolicy,
    groups: Sequence[SampledGroup],
    learn_rate: float,
    clip_epsilon: float,
    inner_epochs: int = 1,
    return_info: bool = False,
):
    """One clipped-surrogate update over ``groups``; other prompts are untouched."""
    if not groups:
        return (policy, UpdateInfo(0.0, 0.0)) if return_info else policy
    for g in groups:
        if len(g.answers) != len(g.rewards):
            raise MismatchedGroup(f"prompt {g.prompt}: {len(g.answers)} answers vs {len(g.rewards)} rewards")
        policy._row(g.prompt)
    sizes = {g.n for g in groups}
    if len(sizes) == 1:
        batches = [list(groups)]
    else:
        batches = [[g for g in groups if g.n == s] for s in sorted(sizes)]
    logits = policy.logits
    infos = []
    for batch in batches:
        logits, info = grpo_update(
            logits,
            [g.prompt for g in batch],
            [g.answers for g in batch],
            [g.rewards for g in batch],
            learn_rate,
            clip_epsilon,
            inner_epochs,
        )
        infos.append(info)
    new = ToyPolicy(logits, policy.correct_index)
    if return_info:
        info = UpdateInfo(max(i.clipped_fraction for i in infos), max(i.max_ratio_deviation for i in infos))
        return new, info
    return new


# ---------------------------------------------------------------------------
# variance and Taylor oracles


def variance_oracle(
    p: float,
    n: int,
    num_trials: int,
    rng: np.random.Generator,
    G: float = 1.0,
    dim: int = 4,
    chunk: int = 1 << 17,
):
    """Monte-Carlo variance of the per-group gradient estimator.

    Score vectors are ``sqrt(G) * (+/- e_j)``: constant norm, with successes
    and failures living on orthogonal coordinates and a random sign so the
    score has mean zero.  Homogeneity then holds exactly and the mean gradient
    vanishes, so the exact variance is ``p (1 - p) G / n``.

    Returns ``(empirical_trace_variance, predicted)``.
    """
    if not (0.0 < p < 1.0):
        raise InvalidProbability(f"p must lie strictly inside (0, 1), got {p!r}")
    if dim < 2 or dim % 2:
        raise InvalidParams("dim must be an even integer >= 2")
    half = dim // 2
    scale = math.sqrt(G) / n
    s1 = np.zeros(dim)
    s2 = np.zeros(dim)
    done = 0
    while done < num_trials:
        t = min(chunk, num_trials - done)
        r = rng.random((t, n)) < p
        j = rng.integers(half, size=(t, n)) + np.where(r, 0, half)
        sign = np.where(rng.random((t, n)) < 0.5, -1.0, 1.0)
        val = (r - p) * sign * scale
        for c in range(dim):
            gc = np.where(j == c, val, 0.0).sum(axis=1)
            s1[c] += gc.sum()
            s2[c] += gc @ gc
        done += t
    mean = s1 / num_trials
    var = (s2 - num_trials * mean**2) / (num_trials - 1)
    return float(var.sum()), p * (1.0 - p) * G / n


def variance_oracle_softmax(policy: ToyPolicy, pid: PromptId, n: int, num_trials: int, rng: np.random.Generator):
    """Same estimator on the real softmax policy, where homogeneity is only
    approximate.  Reports the gap instead of asserting it.

    The estimator uses the true pass rate as the fixed baseline.
    """
    i = policy._row(pid)
    pi = policy.probs(i)
    c = int(policy.correct_index[i])
    p = float(pi[c])
    m = pi.size
    # squared score norm per answer: ||e_y - pi||^2
    sq = (1.0 - 2.0 * pi) + (pi @ pi)
    G = float(pi @ sq)
    reward = np.zeros(m)
    reward[c] = 1.0
    grad_p = policy.pass_rate_grad(i)
    exact = (float(pi @ ((reward - p) ** 2 * sq)) - float(grad_p @ grad_p)) / n
    predicted = p * (1.0 - p) * G / n
    ans = _sample_answers(np.broadcast_to(pi, (num_trials, m)), rng.random((num_trials, n)))
    adv = (ans == c) - p
    counts = np.zeros((num_trials, m))
    np.add.at(counts, (np.arange(num_trials)[:, None].repeat(n, 1), ans), adv)
    g = (counts - adv.sum(axis=1, keepdims=True) * pi) / n
    empirical = float(g.var(axis=0, ddof=1).sum())
    return {"empirical": empirical, "exact": exact, "predicted": predicted, "G": G, "grad_norm_sq": float(grad_p @ grad_p)}


# ||Hessian of p||_2 <= 2 everywhere, so the Taylor remainder is at most ||delta||^2.
CURVATURE_BOUND = 1.0


class TaylorCheck(NamedTuple):
    lhs: float  # exact change in pass rate
    rhs: float  # first-order prediction
    grad_norm: float
    delta_norm: float
    curvature: float = CURVATURE_BOUND

    @property
    def remainder_ok(self) -> bool:
        return abs(self.lhs - self.rhs) <= self.curvature * self.delta_norm**2 + 1e-15

    @property
    def cauchy_schwarz_ok(self) -> bool:
        return abs(self.lhs) <= self.grad_norm * self.delta_norm + self.curvature * self.delta_norm**2 + 1e-15

    @property
    def holds(self) -> bool:
        return self.remainder_ok and self.cauchy_schwarz_ok


def taylor_check(policy: ToyPolicy, pid: PromptId, delta) -> TaylorCheck:
    """Compare the exact pass-rate change under a logit step with its linearization."""
    i = policy._row(pid)
    delta = np.asarray(delta, dtype=np.float64)
    if delta.shape != (policy.num_answers,):
        raise InvalidInputs(f"delta must have shape ({policy.num_answers},)")
    c = policy.correct_index[i]
    before = softmax(policy.logits[i])[c]
    after = softmax(policy.logits[i] + delta)[c]
    grad = policy.pass_rate_grad(i)
    return TaylorCheck(
        lhs=float(after - before),
        rhs=float(grad @ delta),
        grad_norm=float(np.linalg.norm(grad)),
        delta_norm=float(np.linalg.norm(delta)),
    )


def finite_difference_grad(policy: ToyPolicy, pid: PromptId, h: float = 1e-5) -> np.ndarray:
    """Central differences of the pass rate along each logit coordinate."""
    i = policy._row(pid)
    c = policy.correct_index[i]
    row = policy.logits[i]
    out = np.empty(row.size)
    for a in range(row.size):
        e = np.zeros(row.size)
        e[a] = h
        out[a] = (softmax(row + e)[c] - softmax(row - e)[c]) / (2 * h)
    return out


# ---------------------------------------------------------------------------
# the training loop


class Strategy(enum.Enum):
    LZE = "lze"
    UNIFORM = "uniform"
    FULL = "full"


@dataclass(frozen=True)
class SelectorParams:
    kappa: float = 0.4
    alpha: float = 0.3
    lam: float = 0.9
    gumbel_scale: float = 1.0
    t_prune: int = 2
    rho: float = 0.25
    epochs: int = 100
    steps_per_epoch: int = 1
    batch_size: int = 0  # 0: every step rolls out the whole active pool
    prune: bool = True
    use_difficulty: bool = True
    use_uncertainty: bool = True
    use_momentum: bool = True

    def __post_init__(self):
        if not (0.0 < self.kappa <= 1.0):
            raise InvalidParams(f"kappa must lie in (0, 1], got {self.kappa!r}")
        if not (0.0 <= self.alpha < 1.0):
            raise InvalidParams(f"alpha must lie in [0, 1), got {self.alpha!r}")
        if not (0.0 < self.lam < 1.0):
            raise InvalidParams(f"lam must lie in (0, 1), got {self.lam!r}")
        if self.gumbel_scale < 0:
            raise InvalidParams("gumbel_scale must be >= 0")
        if self.epochs < 0 or self.steps_per_epoch < 1 or self.batch_size < 0:
            raise InvalidParams("epochs >= 0, steps_per_epoch >= 1 and batch_size >= 0 required")
        PruneConfig(self.t_prune, self.rho)


@dataclass(frozen=True)
class InitEvent:
    num_prompts: int
    mean_pass_rate: float  # analytic
    mean_initial_estimate: float  # sampled p^(0)


@dataclass(frozen=True)
class ReplayEvent:
    epoch: int
    sampled: tuple
    restored: tuple


@dataclass(frozen=True)
class StepEvent:
    step: int
    epoch: int
    active: int
    pruned: int
    decision: SelectionDecision
    samples_optimized: int  # cumulative prompt groups used for gradient updates
    mean_pass_rate: float


@dataclass(frozen=True)
class PruneEvent:
    epoch: int
    pruned: tuple


@dataclass(frozen=True)
class BudgetEvent:
    report: dict
    ledger: FlopsLedger


def _uniform_decision(step, rows, energies, kappa, rng):
    k = top_k_size(kappa, len(rows))
    pick = rng.choice(len(rows), size=k, replace=False) if k else np.array([], dtype=np.int64)
    scores = {int(i): (float(e), float(e)) for i, e in zip(rows, energies)}
    return SelectionDecision(step, tuple(sorted(int(rows[j]) for j in pick)), scores, k, kappa)


def train(
    env: SimEnvConfig,
    strategy: Strategy,
    params: SelectorParams,
    cost: Optional[CostModel] = None,
    stop_at: Optional[float] = None,
) -> Iterator[object]:
    """Run the full selection-and-training loop, yielding events as they happen.

    Events come in the order: one InitEvent, then per epoch an optional
    ReplayEvent, one StepEvent per step, an optional PruneEvent, and finally a
    BudgetEvent.  ``stop_at`` ends the run as soon as the mean true pass rate
    reaches that value.
    """
    strategy = Strategy(strategy)
    cost = cost or CostModel()
    tokens = cost.tokens_per_sample
    seed = env.seed
    n = env.n_rollouts
    policy = make_policy(env)
    num = env.num_prompts
    ledger = FlopsLedger()
    prune_cfg = PruneConfig(params.t_prune, params.rho)

    def sample(rows, u):
        pi = softmax(policy.logits[rows])
        ans = _sample_answers(pi, u)
        return ans, (ans == policy.correct_index[rows][:, None]).astype(np.float64)

    all_rows = np.arange(num)
    u = rngmod.substream(seed, rngmod.INIT).random((num, n))
    _, rewards = sample(all_rows, u)
    p0 = rewards.mean(axis=1)
    state = initialize_pool({i: float(p0[i]) for i in range(num)})
    ledger_record(ledger, cost, INIT, tokens, count=num * n)
    yield InitEvent(num, float(policy.true_pass_rates().mean()), float(p0.mean()))

    step = 0
    samples = 0
    steps_done = 0
    stopped = stop_at is not None and policy.true_pass_rates().mean() >= stop_at
    for epoch in range(1, params.epochs + 1):
        if stopped:
            break
        state.epoch = epoch
        if params.prune and state.pruned:
            sampled = replay_sample(state, prune_cfg, rngmod.substream(seed, rngmod.REPLAY, epoch))
            restored = []
            if sampled:
                rows = np.array(sampled)
                u = rngmod.substream(seed, rngmod.REPLAY_ROLLOUT, epoch).random((num, n))
                _, rw = sample(rows, u[rows])
                ledger_record(ledger, cost, REPLAY, tokens, count=len(sampled) * n)
                restored = replay_restore(state, {int(i): float(p) for i, p in zip(rows, rw.mean(axis=1))})
            yield ReplayEvent(epoch, tuple(sampled), tuple(restored))

        active = np.array(state.active, dtype=np.int64)
        if params.batch_size:
            perm = rngmod.substream(seed, rngmod.MINIBATCH, epoch).permutation(active)
            batches = [perm[s : s + params.batch_size] for s in range(0, len(perm), params.batch_size)] or [perm]
        else:
            batches = [active] * params.steps_per_epoch

        for batch in batches:
            step += 1
            state.step = step
            rows = np.sort(batch)
            if rows.size:
                u = rngmod.substream(seed, rngmod.ROLLOUT, step).random((num, n))
                answers, rw = sample(rows, u[rows])
                pr = rw.mean(axis=1)
                for i, p in zip(rows.tolist(), pr.tolist()):
                    apply_rollout_result(state, i, p, params.lam)
                ledger_record(ledger, cost, ROLLOUT, tokens, count=rows.size * n)
                recs = [state.records[i] for i in rows.tolist()]
                energies = energy_scores(
                    [r.d0 for r in recs],
                    pr,
                    [r.momentum for r in recs],
                    params.alpha,
                    difficulty=params.use_difficulty,
                    uncertainty=params.use_uncertainty,
                    momentum=params.use_momentum,
                )
                sel_rng = rngmod.substream(seed, rngmod.SELECT, step)
                if strategy is Strategy.LZE:
                    decision = select_top_k(
                        list(zip(rows.tolist(), energies.tolist())), params.kappa, params.gumbel_scale, sel_rng, step
                    )
                elif strategy is Strategy.UNIFORM:
                    decision = _uniform_decision(step, rows, energies, params.kappa, sel_rng)
                else:
                    scores = {int(i): (float(e), float(e)) for i, e in zip(rows, energies)}
                    decision = SelectionDecision(step, tuple(rows.tolist()), scores, rows.size, 1.0)
                chosen = np.searchsorted(rows, np.array(decision.selected, dtype=np.int64))
                logits, _ = grpo_update(
                    policy.logits,
                    rows[chosen],
                    answers[chosen],
                    rw[chosen],
                    env.learn_rate,
                    env.clip_epsilon,
                    env.inner_epochs,
                )
                policy = ToyPolicy(logits, policy.correct_index)
                if chosen.size:
                    ledger_record(ledger, cost, OPTIMIZE, tokens, count=chosen.size * n)
                samples += chosen.size
            else:
                decision = SelectionDecision(step, (), {}, 0, params.kappa)
            steps_done += 1
            mean_p = float(policy.true_pass_rates().mean())
            yield StepEvent(step, epoch, len(state.active), len(state.pruned), decision, samples, mean_p)
            if stop_at is not None and mean_p >= stop_at:
                stopped = True
                break

        if params.prune and not stopped:
            moved = end_of_epoch_prune(state, prune_cfg)
            yield PruneEvent(epoch, tuple(moved))

    baseline = cost.c_total * cost.params * tokens * n * num * steps_done
    yield BudgetEvent(budget_report(ledger, baseline), ledger)


@dataclass
class LearningCurve:
    steps: np.ndarray
    samples: np.ndarray  # cumulative optimized prompt groups
    mean_pass_rate: np.ndarray
    ledger: Optional[FlopsLedger] = None
    pruned_final: int = 0

    def samples_to(self, threshold: float) -> Optional[int]:
        hit = np.nonzero(self.mean_pass_rate >= threshold)[0]
        return int(self.samples[hit[0]]) if hit.size else None

    def steps_to(self, threshold: float) -> Optional[int]:
        hit = np.nonzero(self.mean_pass_rate >= threshold)[0]
        return int(self.steps[hit[0]]) if hit.size else None

    def as_pairs(self):
        return list(zip(self.steps.tolist(), self.mean_pass_rate.tolist()))


def run_learning_experiment(
    env: SimEnvConfig,
    strategy: Strategy,
    params: SelectorParams = SelectorParams(),
    cost: Optional[CostModel] = None,
    stop_at: Optional[float] = None,
) -> LearningCurve:
    """Mean true pass rate (over all prompts, pruned included) after every step."""
    steps, samples, means = [0], [0], []
    ledger = None
    pruned = 0
    for ev in train(env, strategy, params, cost, stop_at):
        if isinstance(ev, InitEvent):
            means.append(ev.mean_pass_rate)
        elif isinstance(ev, StepEvent):
            steps.append(ev.step)
            samples.append(ev.samples_optimized)
            means.append(ev.mean_pass_rate)
            pruned = ev.pruned
        elif isinstance(ev, BudgetEvent):
            ledger = ev.ledger
    return LearningCurve(np.array(steps), np.array(samples), np.array(means), ledger, pruned)
