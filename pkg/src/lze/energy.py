"""Scoring functions: pass rate, the three energy factors and their product,
plus the EMA/convolution utilities used to cross-check the recurrent EMA."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    EmptyGroup,
    EmptyHistory,
    InsufficientHistory,
    InvalidDecay,
    InvalidInputs,
    InvalidProbability,
)
from .pool import PromptId


@dataclass(frozen=True)
class RolloutGroup:
    prompt: PromptId
    rewards: tuple

    def __post_init__(self):
        rewards = tuple(int(r) for r in self.rewards)
        if any(r not in (0, 1) or r != orig for r, orig in zip(rewards, self.rewards)):
            raise InvalidInputs(f"rewards must be 0/1, got {self.rewards!r}")
        object.__setattr__(self, "rewards", rewards)

    @property
    def n(self) -> int:
        return len(self.rewards)


@dataclass(frozen=True)
class EnergyInputs:
    d0: float
    pass_rate: float
    momentum: float
    alpha: float = 0.3


def pass_rate(group: RolloutGroup) -> float:
    if group.n == 0:
        raise EmptyGroup(f"prompt {group.prompt}: rollout group is empty")
    return sum(group.rewards) / group.n


def uncertainty(p: float) -> float:
    """Normalized Bernoulli variance ``4 p (1 - p)``; 1 at p=0.5, 0 at the ends."""
    if not (0.0 <= p <= 1.0):
        raise InvalidProbability(f"p must lie in [0, 1], got {p!r}")
    return 4.0 * p * (1.0 - p)


def energy_score(inputs: EnergyInputs) -> float:
    d0, p, m, alpha = inputs.d0, inputs.pass_rate, inputs.momentum, inputs.alpha
    if not (0.0 <= d0 <= 1.0):
        raise InvalidInputs(f"d0 must lie in [0, 1], got {d0!r}")
    if not (0.0 <= p <= 1.0):
        raise InvalidInputs(f"pass_rate must lie in [0, 1], got {p!r}")
    if not (-1.0 <= m <= 1.0):
        raise InvalidInputs(f"momentum must lie in [-1, 1], got {m!r}")
    if not (0.0 <= alpha < 1.0):
        raise InvalidInputs(f"alpha must lie in [0, 1), got {alpha!r}")
    return d0 * (4.0 * p * (1.0 - p)) * (1.0 + alpha * m)


def energy_scores(d0, p, m, alpha: float = 0.3, *, difficulty=True, uncertainty=True, momentum=True):
    """Vectorized energy over arrays, with per-factor switches for ablations.

    A disabled factor is replaced by 1.  Inputs are trusted; use
    :func:`energy_score` when validation matters.
    """
    d0 = np.asarray(d0, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    out = np.ones(np.broadcast(d0, p, m).shape)
    if difficulty:
        out = out * d0
    if uncertainty:
        out = out * (4.0 * p * (1.0 - p))
    if momentum:
        out = out * (1.0 + alpha * m)
    return out


def _check_history(history, lam):
    if len(history) == 0:
        raise EmptyHistory("history is empty")
    if not (0.0 < lam < 1.0):
        raise InvalidDecay(f"lambda must lie in (0, 1), got {lam!r}")
    return np.asarray(history, dtype=np.float64)


def ema_kernel(t: int, lam: float) -> np.ndarray:
    """Weights on ``p^(t), p^(t-1), ..., p^(0)`` for the unrolled EMA at time t.

    ``(1-lam) lam^tau`` for lag tau < t, and ``lam^t`` on the initial value so
    the weights sum to one.
    """
    w = (1.0 - lam) * lam ** np.arange(t + 1, dtype=np.float64)
    w[t] = lam**t
    return w


def geometric_kernel(t: int, lam: float) -> np.ndarray:
    """Truncated geometric kernel ``(1-lam) lam^tau`` for tau = 0..t.

    Its weights sum to ``1 - lam^(t+1)``; kept only to report how far it sits
    from the recurrence.
    """
    return (1.0 - lam) * lam ** np.arange(t + 1, dtype=np.float64)


def ema_kernel_convolve(history: Sequence[float], lam: float) -> float:
    """EMA at the last index of ``history`` as an explicit causal convolution."""
    h = _check_history(history, lam)
    t = len(h) - 1
    return float(np.dot(ema_kernel(t, lam), h[::-1]))


def geometric_kernel_convolve(history: Sequence[float], lam: float) -> float:
    h = _check_history(history, lam)
    t = len(h) - 1
    return float(np.dot(geometric_kernel(t, lam), h[::-1]))


def ema_recurrent(history: Sequence[float], lam: float) -> np.ndarray:
    """Recurrent EMA at every index, seeded with ``mu^(0) = p^(0)``."""
    h = _check_history(history, lam)
    mu = np.empty_like(h)
    mu[0] = h[0]
    for t in range(1, len(h)):
        mu[t] = lam * mu[t - 1] + (1.0 - lam) * h[t]
    return mu


def momentum_from_history(history: Sequence[float], lam: float) -> float:
    """High-pass output: latest pass rate minus the EMA one step earlier."""
    if len(history) < 2:
        raise InsufficientHistory(f"need at least 2 values, got {len(history)}")
    return float(history[-1]) - ema_kernel_convolve(history[:-1], lam)
